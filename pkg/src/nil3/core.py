"""Metric, orthonormal frame and Levi-Civita connection of Nil3(tau).

The model is R^3 with ``ds^2 = dx^2 + dy^2 + (2 tau x dy - dz)^2``. The frame

    E1 = d/dx,   E2 = d/dy + 2 tau x d/dz,   E3 = d/dz

is orthonormal, so inner products of frame coefficients are Euclidean.
Points and vectors are plain numpy arrays whose last axis has length 3;
every function broadcasts over leading axes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_STEP = 1e-5


@dataclass(frozen=True)
class AmbientParams:
    """Bundle curvature ``tau >= 0``; ``tau = 0`` is flat R^3."""

    tau: float

    def __post_init__(self):
        tau = float(self.tau)
        if not np.isfinite(tau) or tau < 0:
            raise ValueError(f"tau must be a finite number >= 0, got {self.tau!r}")
        object.__setattr__(self, "tau", tau)


def _as_amb(amb) -> AmbientParams:
    return amb if isinstance(amb, AmbientParams) else AmbientParams(amb)


def metric_at(p, amb) -> np.ndarray:
    """Coordinate metric matrix g_ij at ``p`` (shape ``(..., 3, 3)``)."""
    tau = _as_amb(amb).tau
    p = np.asarray(p, dtype=float)
    k = 2.0 * tau * p[..., 0]
    g = np.zeros(p.shape[:-1] + (3, 3))
    g[..., 0, 0] = 1.0
    g[..., 1, 1] = 1.0 + k * k
    g[..., 1, 2] = g[..., 2, 1] = -k
    g[..., 2, 2] = 1.0
    return g


def frame_at(p, amb) -> np.ndarray:
    """Coordinate components of (E1, E2, E3); row ``i`` is E_{i+1}."""
    tau = _as_amb(amb).tau
    p = np.asarray(p, dtype=float)
    e = np.zeros(p.shape[:-1] + (3, 3))
    e[..., 0, 0] = 1.0
    e[..., 1, 1] = 1.0
    e[..., 1, 2] = 2.0 * tau * p[..., 0]
    e[..., 2, 2] = 1.0
    return e


def coord_to_frame(p, v, amb) -> np.ndarray:
    """Convert coordinate components (cx, cy, cz) at ``p`` to frame components."""
    tau = _as_amb(amb).tau
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    out = np.array(np.broadcast_to(v, np.broadcast_shapes(v.shape, p.shape)), dtype=float)
    out[..., 2] = v[..., 2] - 2.0 * tau * p[..., 0] * v[..., 1]
    return out


def frame_to_coord(p, a, amb) -> np.ndarray:
    """Inverse of :func:`coord_to_frame`."""
    tau = _as_amb(amb).tau
    p = np.asarray(p, dtype=float)
    a = np.asarray(a, dtype=float)
    out = np.array(np.broadcast_to(a, np.broadcast_shapes(a.shape, p.shape)), dtype=float)
    out[..., 2] = a[..., 2] + 2.0 * tau * p[..., 0] * a[..., 1]
    return out


def inner(a, b) -> np.ndarray:
    """Metric inner product of two vectors given in frame components."""
    return np.sum(np.asarray(a) * np.asarray(b), axis=-1)


def connection_table(amb) -> np.ndarray:
    """Constant table ``T[i, j] = nabla_{E_i} E_j`` in frame components (0-based)."""
    tau = _as_amb(amb).tau
    T = np.zeros((3, 3, 3))
    T[0, 1] = (0.0, 0.0, tau)
    T[1, 0] = (0.0, 0.0, -tau)
    T[0, 2] = T[2, 0] = (0.0, -tau, 0.0)
    T[1, 2] = T[2, 1] = (tau, 0.0, 0.0)
    return T


def connection_frame(i: int, j: int, amb) -> np.ndarray:
    """``nabla_{E_i} E_j`` for 1-based frame indices ``i, j``."""
    for idx in (i, j):
        if isinstance(idx, bool) or not isinstance(idx, (int, np.integer)) or not 1 <= idx <= 3:
            raise ValueError(f"frame index must be 1, 2 or 3, got {idx!r}")
    return connection_table(amb)[i - 1, j - 1].copy()


def covariant_derivative(base, field_coeffs, directional_derivs, amb) -> np.ndarray:
    """Covariant derivative of the field ``Y = sum b_j E_j`` along ``X = sum a_i E_i``.

    ``field_coeffs`` are the frame coefficients ``b_j`` at the point and
    ``directional_derivs`` the derivatives ``X(b_j)``; the caller supplies
    them, analytically or by finite differences.
    """
    a = np.asarray(base, dtype=float)
    b = np.asarray(field_coeffs, dtype=float)
    db = np.asarray(directional_derivs, dtype=float)
    T = connection_table(amb)
    return db + np.einsum("...i,...j,ijk->...k", a, b, T)


def directional_derivative(fn, p, direction, h: float = DEFAULT_STEP) -> np.ndarray:
    """Central difference of ``fn`` at ``p`` along the coordinate vector ``direction``."""
    p = np.asarray(p, dtype=float)
    d = np.asarray(direction, dtype=float)
    return (np.asarray(fn(p + h * d)) - np.asarray(fn(p - h * d))) / (2.0 * h)


def bundle_curvature(amb) -> float:
    """``1/2 g(nabla_{E1}E2 - nabla_{E2}E1, E3)``, evaluated from the table."""
    diff = connection_frame(1, 2, amb) - connection_frame(2, 1, amb)
    return 0.5 * float(inner(diff, np.array([0.0, 0.0, 1.0])))


# -- self checks --------------------------------------------------------------


def orthonormality_defect(p, amb) -> float:
    """Max deviation of ``g(E_i, E_j)`` from the Kronecker delta at ``p``."""
    e = frame_at(p, amb)
    g = metric_at(p, amb)
    gram = np.einsum("...ia,...ab,...jb->...ij", e, g, e)
    return float(np.max(np.abs(gram - np.eye(3))))


def compatibility_defect(amb) -> float:
    """Max of ``|<nabla_k E_i, E_j> + <E_i, nabla_k E_j>|`` over the table."""
    T = connection_table(amb)
    # <nabla_{E_k} E_i, E_j> = T[k, i, j]
    return float(np.max(np.abs(T + np.transpose(T, (0, 2, 1)))))


def lie_bracket_fd(i: int, j: int, p, amb, h: float = DEFAULT_STEP) -> np.ndarray:
    """``[E_i, E_j]`` at ``p`` in frame components, by central differences.

    Only the coordinate expressions of :func:`frame_at` enter, so this is
    independent of the connection table.
    """
    p = np.asarray(p, dtype=float)
    Ei = frame_at(p, amb)[i - 1]
    Ej = frame_at(p, amb)[j - 1]
    dEj = directional_derivative(lambda q: frame_at(q, amb)[j - 1], p, Ei, h)
    dEi = directional_derivative(lambda q: frame_at(q, amb)[i - 1], p, Ej, h)
    return coord_to_frame(p, dEj - dEi, amb)


def torsion_defect(p, amb, h: float = DEFAULT_STEP) -> float:
    """Max over (i, j) of ``|nabla_i E_j - nabla_j E_i - [E_i, E_j]|`` at ``p``."""
    worst = 0.0
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            lhs = connection_frame(i, j, amb) - connection_frame(j, i, amb)
            worst = max(worst, float(np.max(np.abs(lhs - lie_bracket_fd(i, j, p, amb, h)))))
    return worst
