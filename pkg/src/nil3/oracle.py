"""Finite-difference fundamental forms for arbitrary parametric surfaces.

This is the independent check on every closed form in :mod:`nil3.revolution`.
It only needs the surface map (and optionally its Jacobian); second
derivatives are always taken numerically, and the covariant derivative is
assembled from the connection table:

    nabla_{v_i} v_j = d_i(a_j) + sum_{k,l} a_i^k a_j^l nabla_{E_k} E_l

where ``a_j`` are the frame coefficients of the tangent ``v_j``. Because the
frame is orthonormal, the unit normal is the normalised cross product of the
frame coefficients of the two tangents.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import revolution as rev
from .core import _as_amb, coord_to_frame, covariant_derivative, inner

MAX_CONDITION = 1e8


class StencilError(ValueError):
    """The difference stencil leaves the parameter rectangle."""


class DegenerateParametrization(ValueError):
    """The first fundamental form is (numerically) singular."""


@dataclass(frozen=True)
class NumericDiffPolicy:
    """Central differences of order 2 with step ``h``.

    ``use_jacobian`` lets the oracle use an analytic first derivative when the
    surface carries one; second derivatives are numeric either way.
    """

    h: float = 1e-4
    use_jacobian: bool = True

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("step h must be positive")


@dataclass(frozen=True)
class ParametricSurface:
    """A map ``(u, v) -> chart point`` on a parameter rectangle.

    ``orientation`` (+1 or -1) multiplies the normal ``a_u x a_v``. A periodic
    ``v`` (period ``v_range[1] - v_range[0]``) is exempt from stencil checks.
    """

    map: Callable
    u_range: tuple[float, float]
    v_range: tuple[float, float]
    jacobian: Callable | None = None
    orientation: int = 1
    v_periodic: bool = False
    name: str = "surface"
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    def flipped(self) -> "ParametricSurface":
        return replace(self, orientation=-self.orientation)

    def __call__(self, u, v) -> np.ndarray:
        return np.asarray(self.map(np.asarray(u, float), np.asarray(v, float)), dtype=float)


def _check_stencil(srf: ParametricSurface, u, v, reach: float):
    u = np.asarray(u, float)
    v = np.asarray(v, float)
    lo, hi = srf.u_range
    if np.any(u - reach < lo) or np.any(u + reach > hi):
        raise StencilError(f"u stencil of reach {reach:g} leaves [{lo}, {hi}] on {srf.name}")
    if not srf.v_periodic:
        lo, hi = srf.v_range
        if np.any(v - reach < lo) or np.any(v + reach > hi):
            raise StencilError(f"v stencil of reach {reach:g} leaves [{lo}, {hi}] on {srf.name}")


def _fd_tangents(srf, u, v, h):
    fu = (srf(u + h, v) - srf(u - h, v)) / (2 * h)
    fv = (srf(u, v + h) - srf(u, v - h)) / (2 * h)
    return fu, fv


def numeric_tangents(srf: ParametricSurface, u, v, policy: NumericDiffPolicy | None = None):
    """Central-difference partials ``(f_u, f_v)`` in chart components.

    Raises :class:`DegenerateParametrization` if they are linearly dependent.
    """
    policy = policy or NumericDiffPolicy()
    _check_stencil(srf, u, v, policy.h)
    fu, fv = _fd_tangents(srf, np.asarray(u, float), np.asarray(v, float), policy.h)
    cross = np.linalg.norm(np.cross(fu, fv), axis=-1)
    scale = np.linalg.norm(fu, axis=-1) * np.linalg.norm(fv, axis=-1)
    if np.any(cross <= 1e-10 * np.maximum(scale, 1e-300)):
        raise DegenerateParametrization(f"tangents of {srf.name} are linearly dependent")
    return fu, fv


@dataclass(frozen=True)
class NumericForms:
    G11: np.ndarray
    G12: np.ndarray
    G22: np.ndarray
    B11: np.ndarray
    B12: np.ndarray
    B22: np.ndarray
    normal: np.ndarray

    @property
    def det_G(self):
        return self.G11 * self.G22 - self.G12**2

    def mean_curvature(self):
        return (self.G22 * self.B11 - 2.0 * self.G12 * self.B12 + self.G11 * self.B22) / (
            2.0 * self.det_G
        )


def numeric_forms(srf: ParametricSurface, u, v, amb, policy: NumericDiffPolicy | None = None,
                  reference=None) -> NumericForms:
    """First and second fundamental forms plus unit normal at ``(u, v)``.

    ``reference`` (frame components) overrides the orientation flag: the
    normal is chosen with positive inner product against it.
    """
    policy = policy or NumericDiffPolicy()
    amb = _as_amb(amb)
    h = policy.h
    u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
    analytic = policy.use_jacobian and srf.jacobian is not None
    _check_stencil(srf, u, v, h if analytic else 2 * h)

    def frame_tangents(uu, vv):
        if analytic:
            fu, fv = srf.jacobian(uu, vv)
            fu, fv = np.asarray(fu, float), np.asarray(fv, float)
        else:
            fu, fv = _fd_tangents(srf, uu, vv, h)
        p = srf(uu, vv)
        return coord_to_frame(p, fu, amb), coord_to_frame(p, fv, amb)

    a1, a2 = frame_tangents(u, v)
    a1_up, a2_up = frame_tangents(u + h, v)
    a1_um, a2_um = frame_tangents(u - h, v)
    a1_vp, a2_vp = frame_tangents(u, v + h)
    a1_vm, a2_vm = frame_tangents(u, v - h)
    d1a1 = (a1_up - a1_um) / (2 * h)
    d1a2 = (a2_up - a2_um) / (2 * h)
    d2a1 = (a1_vp - a1_vm) / (2 * h)
    d2a2 = (a2_vp - a2_vm) / (2 * h)

    G11, G12, G22 = inner(a1, a1), inner(a1, a2), inner(a2, a2)
    det = G11 * G22 - G12**2
    # eigenvalue ratio of the 2x2 Gram matrix
    tr = G11 + G22
    disc = np.sqrt(np.maximum(tr**2 / 4 - det, 0.0))
    lmax, lmin = tr / 2 + disc, tr / 2 - disc
    if np.any(~(lmin > 0)) or np.any(lmax > MAX_CONDITION * lmin):
        raise DegenerateParametrization(f"first fundamental form of {srf.name} is near-singular")

    n = np.cross(a1, a2)
    n = n / np.linalg.norm(n, axis=-1)[..., None]
    if reference is not None:
        sign = np.where(inner(n, np.asarray(reference, float)) < 0, -1.0, 1.0)
        n = n * sign[..., None]
    else:
        n = n * srf.orientation

    nab11 = covariant_derivative(a1, a1, d1a1, amb)
    nab12 = covariant_derivative(a1, a2, d1a2, amb)
    nab21 = covariant_derivative(a2, a1, d2a1, amb)
    nab22 = covariant_derivative(a2, a2, d2a2, amb)
    B12 = 0.5 * (inner(nab12, n) + inner(nab21, n))
    return NumericForms(G11, G12, G22, inner(nab11, n), B12, inner(nab22, n), n)


def numeric_second_form(srf, u, v, policy=None, amb=0.0):
    """``((B11, B12, B22), (G11, G12, G22))`` by finite differences."""
    f = numeric_forms(srf, u, v, amb, policy)
    return (f.B11, f.B12, f.B22), (f.G11, f.G12, f.G22)


def numeric_normal(srf, u, v, policy=None, amb=0.0):
    return numeric_forms(srf, u, v, amb, policy).normal


def numeric_mean_curvature(srf, u, v, policy=None, amb=0.0):
    """Mean curvature with respect to the surface's oriented normal."""
    return numeric_forms(srf, u, v, amb, policy).mean_curvature()


# -- surface transforms (ambient isometries) --------------------------------------


def translate_y(srf: ParametricSurface, dy: float) -> ParametricSurface:
    """Image under ``y -> y + dy``; the metric only depends on x."""

    def m(u, v):
        p = srf(u, v).copy()
        p[..., 1] += dy
        return p

    return replace(srf, map=m, name=f"{srf.name}+y{dy:+g}")


def reflect_y(srf: ParametricSurface, sigma: float) -> ParametricSurface:
    """Image under the isometry ``(x, y, z) -> (x, 2 sigma - y, -z)``.

    In frame components this is ``diag(1, -1, -1)``, a rotation, so the
    orientation flag keeps the pushed-forward normal and ``H`` is unchanged.
    """

    flip = np.array([1.0, -1.0, -1.0])

    def m(u, v):
        p = srf(u, v) * flip
        p[..., 1] += 2.0 * sigma
        return p

    jac = None
    if srf.jacobian is not None:
        def jac(u, v):
            fu, fv = srf.jacobian(u, v)
            return np.asarray(fu) * flip, np.asarray(fv) * flip

    return replace(srf, map=m, jacobian=jac, name=f"reflect({srf.name}, {sigma:g})")


# -- catalog ----------------------------------------------------------------------------


def revolution_surface(m: rev.Meridian, t_range=None, name=None) -> ParametricSurface:
    """The immersion ``(t, phi) -> (-r sin phi, t, r cos phi)``, inner normal."""
    t_range = t_range or (m.t_min, m.t_max)

    def fmap(t, phi):
        return rev.immerse(m, t, phi)

    def jac(t, phi):
        t = m.check_domain(t)
        r, rp = np.asarray(m.r(t), float), np.asarray(m.dr(t), float)
        s, c = np.sin(phi), np.cos(phi)
        ft = np.stack(np.broadcast_arrays(-rp * s, np.ones_like(rp * s), rp * c), axis=-1)
        fp = np.stack(np.broadcast_arrays(-r * c, np.zeros_like(r * c), -r * s), axis=-1)
        return ft, fp

    # cross(v1, v2) points away from the axis; the inner normal is its negative
    return ParametricSurface(fmap, tuple(t_range), (0.0, 2 * np.pi), jac, -1, True,
                             name or f"revolution({m.name})", {"meridian": m})


def vertical_plane(d: float = 0.0, half_width: float = 10.0) -> ParametricSurface:
    """The plane ``{y = d}`` parametrised by ``(x, z)``."""

    def fmap(u, v):
        u, v = np.broadcast_arrays(u, v)
        return np.stack([u, np.full_like(u, d), v], axis=-1)

    def jac(u, v):
        u, v = np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))
        one, zero = np.ones_like(u), np.zeros_like(u)
        return np.stack([one, zero, zero], -1), np.stack([zero, zero, one], -1)

    w = float(half_width)
    return ParametricSurface(fmap, (-w, w), (-w, w), jac, 1, False, f"vertical_plane({d:g})",
                             {"plane_y": float(d)})


def ridge(height: float = 0.0, rho0: float = 3.0, curvature: float = 0.5,
          half_width: float = 1.0) -> ParametricSurface:
    """Rotational graph ``y = height - curvature (rho - rho0)^2`` over an annulus.

    Parametrised by ``(rho, phi)``; the crest is the circle ``rho = rho0``.
    Not minimal: it bulges towards ``+y``, which makes it a clean target for
    an interior first contact in a barrier sweep.
    """
    if not 0 < half_width < rho0:
        raise ValueError("need 0 < half_width < rho0")
    a = float(curvature)

    def fmap(rho, phi):
        rho, phi = np.broadcast_arrays(rho, phi)
        y = height - a * (rho - rho0) ** 2
        return np.stack([-rho * np.sin(phi), y, rho * np.cos(phi)], axis=-1)

    def jac(rho, phi):
        rho, phi = np.broadcast_arrays(np.asarray(rho, float), np.asarray(phi, float))
        s, c = np.sin(phi), np.cos(phi)
        fr = np.stack([-s, -2 * a * (rho - rho0), c], axis=-1)
        fp = np.stack([-rho * c, np.zeros_like(rho), -rho * s], axis=-1)
        return fr, fp

    return ParametricSurface(fmap, (rho0 - half_width, rho0 + half_width), (0.0, 2 * np.pi), jac,
                             1, True, f"ridge({height:g})", {})


CATALOG_NAMES = ("vertical_plane", "euclidean_catenoid", "revolution", "barrier", "ridge",
                 "reflected_barrier")


def catalog(name: str, params: dict | None = None, amb=0.0) -> ParametricSurface:
    """Named reference surfaces.

    ``vertical_plane(d)``, ``euclidean_catenoid(rho)``, ``revolution(meridian)``,
    ``barrier(c)`` and the sweep targets ``ridge(...)`` and
    ``reflected_barrier(c, sigma)``. ``t_max`` bounds the parameter range of
    revolution-type entries.
    """
    params = dict(params or {})
    amb = _as_amb(amb)
    if name == "vertical_plane":
        return vertical_plane(params.get("d", 0.0), params.get("half_width", 10.0))
    if name == "euclidean_catenoid":
        rho = params.get("rho", 1.0)
        m = rev.catenoid_meridian(rho)
        return revolution_surface(m, (0.0, params.get("t_max", 5.0)), f"euclidean_catenoid({rho:g})")
    if name == "revolution":
        m = params["meridian"]
        return revolution_surface(m, (m.t_min, params.get("t_max", min(m.t_max, 5.0))))
    if name in ("barrier", "reflected_barrier"):
        from .barrier import BarrierParams, barrier_meridian, overflow_threshold

        c = params["c"]
        t_max = params.get("t_max", min(2.0, overflow_threshold(c)))
        bp = BarrierParams(c=c, tau=amb.tau, t0=params.get("t0", 0.0), t_max=t_max)
        srf = revolution_surface(barrier_meridian(bp), (bp.t0, bp.t_max), f"barrier({c:g})")
        if name == "reflected_barrier":
            srf = reflect_y(srf, params.get("sigma", 0.0))
        return srf
    if name == "ridge":
        return ridge(params.get("height", 0.0), params.get("rho0", 3.0),
                     params.get("curvature", 0.5), params.get("half_width", 1.0))
    raise ValueError(f"unknown catalog surface {name!r}; expected one of {CATALOG_NAMES}")
