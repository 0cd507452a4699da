"""Coordinate surfaces of revolution about the y-axis in Nil3(tau).

The immersion is ``f(t, phi) = (-r(t) sin phi, t, r(t) cos phi)`` for a
positive profile ``r``. Rotation about the y-axis is not an isometry when
``tau > 0``, so every quantity below depends on ``phi``.

All vector quantities are returned in frame components (see
:mod:`nil3.core`). The normal ``N`` is the inner normal (pointing towards the
axis at ``tau = 0``) and mean curvature is reported with respect to it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import _as_amb

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Meridian:
    """Profile ``r`` with analytic first and second derivatives on ``[t_min, t_max]``."""

    r: Callable
    dr: Callable
    d2r: Callable
    t_min: float = 0.0
    t_max: float = np.inf
    name: str = "meridian"

    def check_domain(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if np.any(~np.isfinite(t)) or np.any(t < self.t_min) or np.any(t > self.t_max):
            raise ValueError(
                f"t outside the domain [{self.t_min}, {self.t_max}] of {self.name}"
            )
        return t

    def values(self, t):
        """``(r, r', r'')`` at ``t`` after a domain check."""
        t = self.check_domain(t)
        return np.asarray(self.r(t), float), np.asarray(self.dr(t), float), np.asarray(self.d2r(t), float)


@dataclass(frozen=True)
class FundamentalForms:
    G11: np.ndarray
    G12: np.ndarray
    G22: np.ndarray
    B11: np.ndarray
    B12: np.ndarray
    B22: np.ndarray
    W: np.ndarray

    @property
    def det_G(self):
        return self.G11 * self.G22 - self.G12**2

    def mean_curvature(self):
        """Half the G-trace of B."""
        return (self.G22 * self.B11 - 2.0 * self.G12 * self.B12 + self.G11 * self.B22) / (
            2.0 * self.det_G
        )


# -- standard profiles ----------------------------------------------------------


def cosh_meridian(t_min: float = 0.0, t_max: float = np.inf) -> Meridian:
    return Meridian(np.cosh, np.sinh, np.cosh, t_min, t_max, "cosh")


def exp_meridian(t_min: float = 0.0, t_max: float = np.inf) -> Meridian:
    return Meridian(np.exp, np.exp, np.exp, t_min, t_max, "exp")


def quadratic_meridian(t_min: float = 0.0, t_max: float = np.inf) -> Meridian:
    """``r(t) = 1 + t^2``."""
    return Meridian(
        lambda t: 1.0 + np.asarray(t) ** 2,
        lambda t: 2.0 * np.asarray(t),
        lambda t: np.full_like(np.asarray(t, dtype=float), 2.0),
        t_min,
        t_max,
        "quadratic",
    )


def cylinder_meridian(radius: float = 1.0, t_min: float = 0.0, t_max: float = np.inf) -> Meridian:
    if radius <= 0:
        raise ValueError("cylinder radius must be positive")
    return Meridian(
        lambda t: np.full_like(np.asarray(t, dtype=float), radius),
        lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        t_min,
        t_max,
        "cylinder",
    )


def catenoid_meridian(rho: float = 1.0, t_min: float = 0.0, t_max: float = np.inf) -> Meridian:
    """Euclidean catenoid profile ``rho cosh(t / rho)`` with neck radius ``rho``."""
    if rho <= 0:
        raise ValueError("necksize must be positive")
    return Meridian(
        lambda t: rho * np.cosh(np.asarray(t) / rho),
        lambda t: np.sinh(np.asarray(t) / rho),
        lambda t: np.cosh(np.asarray(t) / rho) / rho,
        t_min,
        t_max,
        f"catenoid({rho:g})",
    )


# -- geometry ----------------------------------------------------------------------


def _angles(phi):
    phi = np.mod(np.asarray(phi, dtype=float), TWO_PI)
    return np.sin(phi), np.cos(phi)


def immerse(m: Meridian, t, phi) -> np.ndarray:
    """Chart point ``(-r sin phi, t, r cos phi)``."""
    t = m.check_domain(t)
    r = np.asarray(m.r(t), float)
    s, c = _angles(phi)
    return np.stack(np.broadcast_arrays(-r * s, t, r * c), axis=-1)


def tangents(m: Meridian, t, phi, amb) -> tuple[np.ndarray, np.ndarray]:
    """Frame components of ``v1 = df/dt`` and ``v2 = df/dphi``."""
    tau = _as_amb(amb).tau
    r, rp, _ = m.values(t)
    s, c = _angles(phi)
    v1 = np.stack(np.broadcast_arrays(-rp * s, np.ones_like(rp * s), 2 * tau * r * s + rp * c), axis=-1)
    v2 = np.stack(np.broadcast_arrays(-r * c, np.zeros_like(r * c), -r * s), axis=-1)
    return v1, v2


def _w(tau, r, rp, s, c):
    return np.sqrt(1.0 + (2 * tau * r * s * c + rp) ** 2)


def normal(m: Meridian, t, phi, amb) -> tuple[np.ndarray, np.ndarray]:
    """Inner unit normal ``N`` and the scale factor ``W >= 1``."""
    tau = _as_amb(amb).tau
    r, rp, _ = m.values(t)
    s, c = _angles(phi)
    W = _w(tau, r, rp, s, c)
    N = np.stack(np.broadcast_arrays(s, rp + 2 * tau * r * s * c, -c), axis=-1) / W[..., None]
    return N, W


def first_form(m: Meridian, t, phi, amb):
    """``(G11, G12, G22)``."""
    tau = _as_amb(amb).tau
    r, rp, _ = m.values(t)
    s, c = _angles(phi)
    G11 = s**2 * rp**2 + (2 * tau * r * s + c * rp) ** 2 + 1.0
    G12 = -2.0 * tau * r**2 * s**2
    G22 = r**2 + 0.0 * s
    return G11, G12, G22


def second_form(m: Meridian, t, phi, amb):
    """``(B11, B12, B22)`` with respect to the inner normal.

    B12 and B22 are the familiar closed forms. B11 is the projection of
    ``nabla_{v1} v1`` on ``N``:

        W B11 = -r'' + 4 tau^2 r sin^2(phi) (1 + r'^2 (1 + cos^2 phi))
                + 2 tau r' sin(phi) cos(phi) (r'^2 + 4 tau^2 r^2 sin^2 phi)
    """
    tau = _as_amb(amb).tau
    r, rp, rpp = m.values(t)
    s, c = _angles(phi)
    W = _w(tau, r, rp, s, c)
    s2 = np.sin(2 * np.mod(np.asarray(phi, float), TWO_PI))
    c2 = np.cos(2 * np.mod(np.asarray(phi, float), TWO_PI))
    B11 = (
        -rpp
        + 4 * tau**2 * r * s**2 * (1 + rp**2 * (1 + c**2))
        + 2 * tau * rp * s * c * (rp**2 + 4 * tau**2 * r**2 * s**2)
    ) / W
    B12 = tau * r * (4 * tau * r * rp * s * c**3 + tau**2 * r**2 * s2**2 + c2 * rp**2 - 1) / W
    B22 = -r * (tau * r * s2 * (tau * r * s2 + rp) - 1) / W
    return B11, B12, B22


def fundamental_forms(m: Meridian, t, phi, amb) -> FundamentalForms:
    G11, G12, G22 = first_form(m, t, phi, amb)
    B11, B12, B22 = second_form(m, t, phi, amb)
    _, W = normal(m, t, phi, amb)
    G11, G12, G22, B11, B12, B22, W = np.broadcast_arrays(G11, G12, G22, B11, B12, B22, W)
    return FundamentalForms(G11, G12, G22, B11, B12, B22, W)


def mean_curvature_numerator(m: Meridian, t, phi, amb):
    """``1 + r'^2 - r r'' + 4 tau^2 r^2 sin^4 phi + 2 tau r r' sin phi cos phi``."""
    tau = _as_amb(amb).tau
    r, rp, rpp = m.values(t)
    s, c = _angles(phi)
    return 1 + rp**2 - r * rpp + 4 * tau**2 * r**2 * s**4 + 2 * tau * r * rp * s * c


def mean_curvature(m: Meridian, t, phi, amb):
    """Closed-form ``H(t, phi)``: the numerator above over ``2 r W^3``.

    ``W`` already contains the square root, so the denominator is
    ``2 r (W^2)^{3/2}``; at ``tau = 0`` this gives the classical
    ``(1 + r'^2)^{3/2}``.
    """
    tau = _as_amb(amb).tau
    r, rp, _ = m.values(t)
    s, c = _angles(phi)
    W = _w(tau, r, rp, s, c)
    return mean_curvature_numerator(m, t, phi, amb) / (2.0 * r * W**3)


def mean_curvature_assembled(m: Meridian, t, phi, amb):
    """``(G22 B11 - 2 G12 B12 + G11 B22) / (2 det G)`` from the two forms."""
    return fundamental_forms(m, t, phi, amb).mean_curvature()


def euclidean_mean_curvature(m: Meridian, t):
    """Classical rotational-surface mean curvature in R^3, inner normal."""
    r, rp, rpp = m.values(t)
    return (1 + rp**2 - r * rpp) / (2 * r * (1 + rp**2) ** 1.5)
