import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nil3 import revolution as rev
from nil3.oracle import NumericDiffPolicy, numeric_forms, numeric_tangents, revolution_surface

from conftest import TAUS

MERIDIANS = {
    "cosh": lambda: rev.cosh_meridian(-np.inf),
    "exp": lambda: rev.exp_meridian(-np.inf),
    "quadratic": lambda: rev.quadratic_meridian(-np.inf),
}


def test_meridian_domain_is_enforced():
    m = rev.cosh_meridian(0.0, 2.0)
    with pytest.raises(ValueError):
        rev.immerse(m, -0.1, 0.0)
    with pytest.raises(ValueError):
        rev.mean_curvature(m, 2.5, 0.0, 0.5)
    with pytest.raises(ValueError):
        rev.immerse(m, np.nan, 0.0)


def test_immerse_examples():
    m = rev.cosh_meridian()
    t = 0.7
    assert np.allclose(rev.immerse(m, t, 0.0), [0.0, t, np.cosh(t)], atol=0)
    assert np.allclose(rev.immerse(m, t, np.pi / 2), [-np.cosh(t), t, 0.0], atol=1e-15)
    assert np.allclose(rev.immerse(m, 0.0, np.pi), [0.0, 0.0, -1.0], atol=1e-15)


def test_tangents_at_phi_zero():
    m = rev.exp_meridian()
    t = 0.3
    v1, v2 = rev.tangents(m, t, 0.0, 0.5)
    assert np.allclose(v1, [0, 1, np.exp(t)], atol=0)
    assert np.allclose(v2, [-np.exp(t), 0, 0], atol=0)


def test_tangents_flat_case():
    m = rev.quadratic_meridian()
    t, phi = 0.8, 2.1
    v1, _ = rev.tangents(m, t, phi, 0.0)
    rp = 2 * t
    assert np.allclose(v1, [-rp * np.sin(phi), 1, rp * np.cos(phi)], atol=1e-15)


@pytest.mark.parametrize("name", MERIDIANS)
def test_normal_unit_and_orthogonal(name, rng):
    m = MERIDIANS[name]()
    t = rng.uniform(0.0, 2.0, 200)
    phi = rng.uniform(0.0, 2 * np.pi, 200)
    for tau in TAUS:
        v1, v2 = rev.tangents(m, t, phi, tau)
        N, W = rev.normal(m, t, phi, tau)
        assert np.all(np.abs(np.linalg.norm(N, axis=-1) - 1) <= 1e-12)
        scale = np.linalg.norm(v1, axis=-1)
        assert np.all(np.abs(np.sum(v1 * N, -1)) <= 1e-12 * scale)
        assert np.all(np.abs(np.sum(v2 * N, -1)) <= 1e-12 * np.linalg.norm(v2, axis=-1))
        assert np.all(W >= 1)


def test_normal_at_phi_zero():
    m = rev.cosh_meridian()
    t = 0.6
    N, W = rev.normal(m, t, 0.0, 1.0)
    rp = np.sinh(t)
    assert np.isclose(W, np.sqrt(1 + rp**2), rtol=1e-15)
    assert np.allclose(N, np.array([0, rp, -1]) / np.sqrt(1 + rp**2), atol=1e-15)


def test_normal_matches_oracle():
    tau, t, phi = 0.5, 0.3, 0.7
    m = rev.exp_meridian(-np.inf)
    N, W = rev.normal(m, t, phi, tau)
    r, rp = np.exp(t), np.exp(t)
    assert np.isclose(W, np.sqrt(1 + (2 * tau * r * np.sin(phi) * np.cos(phi) + rp) ** 2), rtol=1e-15)
    srf = revolution_surface(m, (-1.0, 3.0))
    f = numeric_forms(srf, t, phi, tau, NumericDiffPolicy(use_jacobian=False))
    assert np.allclose(f.normal, N, atol=1e-8)


def test_numeric_tangents_pushed_to_frame_match():
    from nil3.core import coord_to_frame

    tau, t, phi = 0.5, 0.9, 2.3
    m = rev.cosh_meridian(-np.inf)
    srf = revolution_surface(m, (-1.0, 3.0))
    fu, fv = numeric_tangents(srf, t, phi, NumericDiffPolicy(h=1e-5))
    p = srf(t, phi)
    v1, v2 = rev.tangents(m, t, phi, tau)
    assert np.allclose(coord_to_frame(p, fu, tau), v1, atol=1e-8)
    assert np.allclose(coord_to_frame(p, fv, tau), v2, atol=1e-8)


def test_first_form_examples():
    t = np.linspace(0, 2, 9)
    m = rev.cosh_meridian()
    G11, G12, G22 = rev.first_form(m, t, 0.4, 0.0)
    assert np.allclose(G11, np.cosh(t) ** 2, rtol=1e-14)
    assert np.allclose(G12, 0.0)
    assert np.allclose(G22, np.cosh(t) ** 2, rtol=1e-14)
    _, G12, _ = rev.first_form(rev.cylinder_meridian(2.0), 0.5, np.pi / 2, 1.0)
    assert np.isclose(G12, -8.0, rtol=1e-15)


@pytest.mark.parametrize("name", MERIDIANS)
def test_det_identity(name, rng):
    m = MERIDIANS[name]()
    t = rng.uniform(0.0, 2.0, 500)
    phi = rng.uniform(0.0, 2 * np.pi, 500)
    for tau in TAUS:
        F = rev.fundamental_forms(m, t, phi, tau)
        r = m.r(t)
        target = r**2 * F.W**2
        assert np.max(np.abs(F.det_G - target) / target) <= 1e-12


def test_second_form_flat_case():
    m = rev.quadratic_meridian()
    t = np.linspace(0.0, 2.0, 11)
    phi = 1.3
    B11, B12, B22 = rev.second_form(m, t, phi, 0.0)
    r, rp, rpp = m.values(t)
    w = np.sqrt(1 + rp**2)
    assert np.allclose(B11, -rpp / w, rtol=1e-14)
    assert np.allclose(B12, 0.0, atol=1e-15)
    assert np.allclose(B22, r / w, rtol=1e-14)


def test_euclidean_catenoid_is_minimal():
    m = rev.cosh_meridian()
    t = np.linspace(0.0, 2.0, 17)
    F = rev.fundamental_forms(m, t, 0.9, 0.0)
    assert np.allclose(F.B11 * F.G22 + F.B22 * F.G11, 0.0, atol=1e-12)


@pytest.mark.parametrize("tau", TAUS)
@pytest.mark.parametrize("name", MERIDIANS)
def test_second_form_matches_oracle(name, tau, rng):
    m = MERIDIANS[name]()
    srf = revolution_surface(m, (-1.0, 3.0))
    pts = [(0.4, 1.1)] + [tuple(x) for x in zip(rng.uniform(0.1, 2, 6), rng.uniform(0, 2 * np.pi, 6))]
    for t, phi in pts:
        f = numeric_forms(srf, t, phi, tau)
        B = rev.second_form(m, t, phi, tau)
        scale = max(1.0, max(abs(b) for b in B))
        for got, want in zip((f.B11, f.B12, f.B22), B):
            assert abs(got - want) / scale < 1e-6


def test_alternative_b11_differs_from_oracle():
    """A plausible-looking B11 expression fails against the oracle; the implemented one agrees."""
    tau, t, phi = 0.5, 0.4, 1.1
    m = rev.exp_meridian(-np.inf)
    r, rp, rpp = np.exp(t), np.exp(t), np.exp(t)
    s, c = np.sin(phi), np.cos(phi)
    W = np.sqrt(1 + (2 * tau * r * s * c + rp) ** 2)
    variant = (-rpp + 4 * tau**2 * r * s**2 * (rp**2 + r**2 * c**2)
               + 2 * tau * r**2 * rp * s * c * (1 + 4 * tau**2 * s**2)) / W
    f = numeric_forms(revolution_surface(m, (-1.0, 3.0)), t, phi, tau)
    B11 = rev.second_form(m, t, phi, tau)[0]
    assert abs(f.B11 - B11) < 1e-6 * max(1, abs(B11))
    assert abs(variant - B11) > 1e-2


def test_mean_curvature_cosh_flat_vanishes():
    m = rev.cosh_meridian()
    T, P = np.meshgrid(np.linspace(0.1, 2, 64), np.linspace(0, 2 * np.pi, 64, endpoint=False))
    assert np.max(np.abs(rev.mean_curvature(m, T, P, 0.0))) < 1e-8


@pytest.mark.parametrize("name", MERIDIANS)
def test_mean_curvature_phi_zero_is_tau_independent(name):
    m = MERIDIANS[name]()
    t = np.linspace(0.1, 2, 64)
    base = rev.euclidean_mean_curvature(m, t)
    for tau in TAUS:
        for phi in (0.0, np.pi):
            H = rev.mean_curvature(m, t, phi, tau)
            assert np.max(np.abs(H - base) / np.maximum(1, np.abs(base))) <= 1e-10


@pytest.mark.parametrize("name", MERIDIANS)
def test_mean_curvature_is_pi_periodic(name, rng):
    m = MERIDIANS[name]()
    t = rng.uniform(0.1, 2, 300)
    phi = rng.uniform(0, 2 * np.pi, 300)
    for tau in TAUS:
        a = rev.mean_curvature(m, t, phi, tau)
        b = rev.mean_curvature(m, t, phi + np.pi, tau)
        assert np.max(np.abs(a - b) / np.maximum(1, np.abs(a))) <= 1e-10


@pytest.mark.parametrize("name", MERIDIANS)
def test_closed_form_equals_assembly(name):
    m = MERIDIANS[name]()
    T, P = np.meshgrid(np.linspace(0.1, 2, 64), np.linspace(0, 2 * np.pi, 64, endpoint=False))
    for tau in TAUS:
        a = rev.mean_curvature(m, T, P, tau)
        b = rev.mean_curvature_assembled(m, T, P, tau)
        assert np.max(np.abs(a - b) / np.maximum(1, np.abs(a))) <= 1e-10


def test_w_cubed_denominator_is_confirmed():
    """W^(3/2) would disagree with the assembled quotient wherever W != 1."""
    m = rev.exp_meridian(-np.inf)
    t, phi, tau = 0.5, 0.8, 0.5
    num = rev.mean_curvature_numerator(m, t, phi, tau)
    _, W = rev.normal(m, t, phi, tau)
    r = np.exp(t)
    assembled = rev.mean_curvature_assembled(m, t, phi, tau)
    assert np.isclose(assembled, num / (2 * r * W**3), rtol=1e-12)
    assert not np.isclose(assembled, num / (2 * r * W**1.5), rtol=1e-3)


def test_tau_zero_reduction(rng):
    for name, make in MERIDIANS.items():
        m = make()
        t = rng.uniform(0.1, 2, 50)
        phi = rng.uniform(0, 2 * np.pi, 50)
        assert np.allclose(rev.mean_curvature(m, t, phi, 0.0), rev.euclidean_mean_curvature(m, t),
                           rtol=1e-12, atol=1e-15)


def test_cylinder_mean_curvature_formula():
    # numerator 1 + 4 tau^2 sin^4 over 2 r W^3 with W = sqrt(1 + tau^2 sin^2(2 phi))
    R, tau, phi = 1.5, 0.5, 0.6
    H = rev.mean_curvature(rev.cylinder_meridian(R), 0.3, phi, tau)
    W = np.sqrt(1 + (2 * tau * R * np.sin(phi) * np.cos(phi)) ** 2)
    assert np.isclose(H, (1 + 4 * tau**2 * R**2 * np.sin(phi) ** 4) / (2 * R * W**3), rtol=1e-14)


@given(
    st.floats(0.1, 2.0), st.floats(0.0, 2 * np.pi), st.floats(0.0, 1.0),
    st.sampled_from(sorted(MERIDIANS)),
)
def test_property_identities(t, phi, tau, name):
    m = MERIDIANS[name]()
    F = rev.fundamental_forms(m, t, phi, tau)
    r = m.r(t)
    assert abs(F.det_G - r**2 * F.W**2) <= 1e-12 * r**2 * F.W**2
    H = rev.mean_curvature(m, t, phi, tau)
    assert abs(F.mean_curvature() - H) <= 1e-10 * max(1, abs(H))
    assert abs(rev.mean_curvature(m, t, phi + np.pi, tau) - H) <= 1e-10 * max(1, abs(H))
    assert np.isclose(F.G11, rev.first_form(m, t, phi, tau)[0])
    assert F.W >= 1.0
