"""Geometry kernel for Heisenberg space Nil3(tau).

Submodules:

* :mod:`nil3.core` -- metric, orthonormal frame, connection table
* :mod:`nil3.revolution` -- closed-form geometry of surfaces of revolution
* :mod:`nil3.oracle` -- finite-difference fundamental forms, reference surfaces
* :mod:`nil3.barrier` -- the barrier family M_c and its certification
* :mod:`nil3.sweep` -- barrier sweep with contact detection
* :mod:`nil3.mesh` -- triangle meshes, OBJ/CSV/report emission
"""

from .core import AmbientParams, bundle_curvature, connection_frame, frame_at, metric_at
from .revolution import Meridian, mean_curvature

__version__ = "0.1.0"

__all__ = [
    "AmbientParams",
    "Meridian",
    "bundle_curvature",
    "connection_frame",
    "frame_at",
    "mean_curvature",
    "metric_at",
]
