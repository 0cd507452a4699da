"""The barrier family M_c with meridian ``r_c(t) = exp(exp(c t) / c)``.

For ``c > c0 = 4 tau^2 + 2 tau + 1`` these surfaces have ``H <= 0`` with
respect to the inner normal. Numerically this is certified in two ways at
once: the mean curvature is sampled on a grid, and every link of the chain

    2 r W^3 H <= 1 + r'^2 - r r'' + 4 tau^2 r^2 + 2 tau r r'      (i)
               = 1 + r^2 (e^{ct} (2 tau - c) + 4 tau^2)            (ii)
              <= 1 + r^2 (4 tau^2 + 2 tau - c)                     (iii)
              <= 1 + 4 tau^2 + 2 tau - c <= 0                      (iv)

is evaluated pointwise and its slack reported.

Distances to the vertical plane ``{y = 0}`` are ``|y|``: the projection to
the (x, y) base is a Riemannian submersion onto the Euclidean plane and the
plane is the preimage of a line, so the distance is the base distance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import revolution as rev

EXP_LIMIT = 700.0
CHAIN_RTOL = 1e-10


class BarrierRangeError(ValueError):
    """``r_c`` would overflow double precision at the requested ``t``."""


def c0(tau: float) -> float:
    """Threshold ``4 tau^2 + 2 tau + 1``."""
    return 4.0 * tau * tau + 2.0 * tau + 1.0


def overflow_threshold(c: float) -> float:
    """Largest ``t`` with ``exp(c t) / c <= EXP_LIMIT``, i.e. ``r_c(t)`` finite."""
    return float(np.log(EXP_LIMIT * c) / c)


def certification_limit(c: float) -> float:
    """Largest ``t`` where ``r W^3`` (roughly ``r^4 e^{3ct}``) stays finite."""
    g = lambda t: 4.0 * np.exp(c * t) / c + 3.0 * c * t - EXP_LIMIT
    return float(brentq(g, 0.0, overflow_threshold(c)))


@dataclass(frozen=True)
class BarrierParams:
    c: float
    tau: float = 0.0
    t0: float = 0.0
    t_max: float | None = None

    def __post_init__(self):
        if self.tau < 0:
            raise ValueError("tau must be >= 0")
        if self.t0 < 0:
            raise ValueError("t0 must be >= 0")
        if not self.c > c0(self.tau):
            raise ValueError(
                f"c = {self.c:g} must exceed c0 = 4 tau^2 + 2 tau + 1 = {c0(self.tau):g}"
            )
        if self.t_max is None:
            object.__setattr__(self, "t_max", overflow_threshold(self.c))
        if not self.t_max > self.t0:
            raise ValueError("t_max must exceed t0")

    @property
    def c0(self) -> float:
        return c0(self.tau)


def barrier_meridian(p: BarrierParams) -> rev.Meridian:
    """``r = exp(e^{ct}/c)``, ``r' = e^{ct} r``, ``r'' = e^{ct} (c + e^{ct}) r``."""
    c = float(p.c)
    t_bar = overflow_threshold(c)

    def growth(t):
        t = np.asarray(t, dtype=float)
        if np.any(t > t_bar):
            raise BarrierRangeError(f"r_c overflows for t > {t_bar:.6g} (c = {c:g})")
        return np.exp(c * t)

    def r(t):
        return np.exp(growth(t) / c)

    def dr(t):
        e = growth(t)
        return e * np.exp(e / c)

    def d2r(t):
        e = growth(t)
        return e * (c + e) * np.exp(e / c)

    return rev.Meridian(r, dr, d2r, p.t0, t_bar, f"barrier({c:g})")


@dataclass
class CertReport:
    tau: float
    c: float
    c0: float
    t_range: tuple[float, float]
    n_t: int
    n_phi: int
    max_H: float
    argmax_H: tuple[float, float]
    max_H_at_t0: float
    margins: dict
    identity_max_rel: float
    passed: bool
    samples: dict = field(default_factory=dict, repr=False)

    def as_dict(self) -> dict:
        out = {
            "tau": self.tau,
            "c": self.c,
            "c0": self.c0,
            "t_min": self.t_range[0],
            "t_max": self.t_range[1],
            "grid": f"{self.n_t}x{self.n_phi}",
            "max_H": self.max_H,
            "argmax_t": self.argmax_H[0],
            "argmax_phi": self.argmax_H[1],
            "max_H_at_t0": self.max_H_at_t0,
        }
        for k, v in self.margins.items():
            out[f"min_slack_{k}"] = v
        out["identity_ii_max_rel"] = self.identity_max_rel
        out["pass"] = self.passed
        return out


def _slack(lo, hi):
    """Normalised margin of ``lo <= hi``; negative means violated."""
    scale = np.maximum(np.maximum(np.abs(lo), np.abs(hi)), 1.0)
    return (hi - lo) / scale


def certification_grid(p: BarrierParams, n_t: int = 256, n_phi: int = 256):
    """Geometric ``t`` samples on ``[t0, min(t_max, limit)]`` and uniform ``phi``."""
    if n_t < 2 or n_phi < 1:
        raise ValueError("grid needs n_t >= 2 and n_phi >= 1")
    t_hi = min(p.t_max, certification_limit(p.c))
    if t_hi <= p.t0:
        raise BarrierRangeError("certification range is empty below the overflow limit")
    if p.t0 > 0:
        t = np.geomspace(p.t0, t_hi, n_t)
    else:
        t = np.concatenate([[0.0], t_hi * np.geomspace(1e-4, 1.0, n_t - 1)])
    phi = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)
    return t, phi


def certify(p: BarrierParams, n_t: int = 256, n_phi: int = 256, grid=None) -> CertReport:
    """Sample ``H`` and the estimate chain on a ``t x phi`` grid."""
    t, phi = grid if grid is not None else certification_grid(p, n_t, n_phi)
    t = np.asarray(t, float)
    phi = np.asarray(phi, float)
    limit = certification_limit(p.c)
    if np.any(t > limit) or np.any(t < p.t0):
        raise BarrierRangeError(
            f"certification grid must lie in [{p.t0:g}, {limit:.6g}] for c = {p.c:g}"
        )
    m = barrier_meridian(p)
    T, PHI = np.meshgrid(t, phi, indexing="ij")
    tau, c = p.tau, p.c

    H = rev.mean_curvature(m, T, PHI, tau)
    r, rp, rpp = m.values(T)
    _, W = rev.normal(m, T, PHI, tau)
    # the G/B assembly cancels catastrophically once r' is large, so step (i)
    # is checked on 2 r W^3 H from the closed form
    lhs = 2.0 * r * W**3 * H
    b1 = 1 + rp**2 - r * rpp + 4 * tau**2 * r**2 + 2 * tau * r * rp
    b2 = 1 + r**2 * (np.exp(c * T) * (2 * tau - c) + 4 * tau**2)
    b3 = 1 + r**2 * (4 * tau**2 + 2 * tau - c)
    b4 = 1 + 4 * tau**2 + 2 * tau - c

    margins = {
        "i": float(np.min(_slack(lhs, b1))),
        "iii": float(np.min(_slack(b2, b3))),
        "iv": float(np.min(_slack(b3, np.full_like(b3, b4)))),
        "final": float(-b4 / max(abs(b4), 1.0)),
    }
    identity = float(np.max(np.abs(b1 - b2) / np.maximum(np.abs(b2), 1.0)))
    k = np.unravel_index(np.argmax(H), H.shape)
    max_H = float(H[k])
    passed = (
        all(v >= -CHAIN_RTOL for v in margins.values())
        and margins["final"] >= 0
        and identity <= CHAIN_RTOL
        and max_H <= 0.0
        and bool(np.all(np.isfinite(H)))
    )
    return CertReport(
        tau=tau, c=c, c0=p.c0, t_range=(float(t[0]), float(t[-1])), n_t=len(t), n_phi=len(phi),
        max_H=max_H, argmax_H=(float(T[k]), float(PHI[k])),
        max_H_at_t0=float(np.max(H[0])), margins=margins, identity_max_rel=identity,
        passed=bool(passed), samples={"t": T, "phi": PHI, "H": H},
    )


@dataclass(frozen=True)
class BoundaryCircle:
    center: tuple[float, float, float]
    radius: float
    plane_y: float
    note: str = ""

    def points(self, n: int = 64) -> np.ndarray:
        phi = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
        return np.stack([self.radius * np.sin(phi), np.full(n, self.plane_y),
                         self.radius * np.cos(phi)], axis=-1)


def boundary_radius(c: float, t0: float = 0.0) -> float:
    """``r_c(t0)``; at ``t0 = 0`` this is ``exp(1/c)``. Formula only, any ``c > 0``."""
    if not c > 0:
        raise ValueError("c must be positive")
    return float(np.exp(np.exp(c * t0) / c))


def profile_height(c: float, R: float) -> float | None:
    """``ln(c ln R) / c``, the ``t`` with ``r_c(t) = R``; ``None`` if ``R <= exp(1/c)``.

    Formula only: holds for any ``c > 0``, certified barrier or not.
    """
    if not c > 0:
        raise ValueError("c must be positive")
    if R <= np.exp(1.0 / c):
        return None if R < np.exp(1.0 / c) else 0.0
    return float(np.log(c * np.log(R)) / c)


def boundary_circle(p: BarrierParams) -> BoundaryCircle:
    """The boundary ring of M_c: radius ``r_c(t0)`` in the plane ``{y = t0}``."""
    radius = float(barrier_meridian(p).r(p.t0))
    note = "" if p.t0 == 0 else "t0 != 0: radius is r_c(t0), not exp(1/c)"
    return BoundaryCircle((0.0, float(p.t0), 0.0), radius, float(p.t0), note)


def vertical_plane_distance(points, y0: float = 0.0) -> np.ndarray:
    """Distance from chart points to the vertical plane ``{y = y0}``."""
    return np.abs(np.asarray(points, float)[..., 1] - y0)


def clearance_threshold(p: BarrierParams, eps: float) -> float:
    """``T`` such that points of M_c with ``t > T`` are farther than ``eps`` from ``{y=0}``.

    On M_c the y-coordinate is ``t`` itself, so ``T = eps``.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    return float(eps)


def convergence_profile(p: BarrierParams, R: float) -> float | None:
    """Largest ``t`` with ``r_c(t) <= R``: ``ln(c ln R) / c``.

    This is the maximal y-coordinate of M_c inside the cylinder
    ``x^2 + z^2 <= R^2``. Returns ``None`` when the cylinder misses M_c
    (``R <= r_c(t0)``).
    """
    if R <= float(barrier_meridian(p).r(p.t0)):
        return None
    return profile_height(p.c, R)


def embeddedness_check(p: BarrierParams, n_t: int = 64, n_phi: int = 64) -> bool:
    """Structural injectivity check of the revolution map on a sample grid.

    Distinct ``t`` give distinct ``y = t``; at fixed ``t`` distinct ``phi``
    give distinct points on a circle of radius ``r_c(t) > 0``.
    """
    t = np.linspace(p.t0, min(p.t_max, overflow_threshold(p.c)), n_t)
    phi = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)
    m = barrier_meridian(p)
    pts = rev.immerse(m, t[:, None], phi[None, :])
    y_distinct = bool(np.all(np.diff(pts[:, 0, 1]) > 0))
    r = np.asarray(m.r(t))
    angle = np.arctan2(-pts[..., 0], pts[..., 2]) % (2 * np.pi)
    phi_distinct = bool(np.all(np.diff(angle, axis=1) > 0))
    return y_distinct and bool(np.all(r > 0)) and phi_distinct
