import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nil3 import core
from nil3.core import AmbientParams

from conftest import TAUS, christoffel_fd, polarized_metric

coords = st.floats(-5, 5, allow_nan=False)
taus = st.floats(0, 2, allow_nan=False)


def test_ambient_rejects_negative_tau():
    with pytest.raises(ValueError):
        AmbientParams(-0.1)
    with pytest.raises(ValueError):
        AmbientParams(float("nan"))


@pytest.mark.parametrize("tau", TAUS)
def test_metric_identity_on_x_zero(tau):
    assert np.array_equal(core.metric_at([0.0, 3.0, -2.0], tau), np.eye(3))


def test_metric_flat_case(rng):
    for p in rng.uniform(-5, 5, (10, 3)):
        assert np.array_equal(core.metric_at(p, 0.0), np.eye(3))


def test_metric_example_half_tau():
    expected = np.array([[1, 0, 0], [0, 2, -1], [0, -1, 1]], dtype=float)
    assert np.allclose(core.metric_at([1.0, 0.0, 0.0], 0.5), expected, atol=0)
    assert np.allclose(polarized_metric([1.0, 0.0, 0.0], 0.5), expected, atol=1e-14)


@given(coords, coords, coords, taus)
def test_metric_matches_quadratic_form(x, y, z, tau):
    p = np.array([x, y, z])
    g = core.metric_at(p, tau)
    assert np.allclose(g, polarized_metric(p, tau), atol=1e-10 * (1 + abs(x * tau)) ** 2)
    assert np.allclose(g, g.T)
    assert np.all(np.linalg.eigvalsh(g) > 0)


def test_frame_flat_and_half_tau():
    assert np.array_equal(core.frame_at([1.0, 2.0, 3.0], 0.0), np.eye(3))
    assert np.array_equal(core.frame_at([1.0, 7.0, -1.0], 0.5)[1], [0.0, 1.0, 1.0])


def test_frame_orthonormal_random(rng):
    for tau in TAUS:
        for p in rng.uniform(-5, 5, (50, 3)):
            assert core.orthonormality_defect(p, tau) <= 1e-12


@given(coords, coords, coords, taus, st.lists(st.floats(-3, 3), min_size=3, max_size=3))
def test_frame_coordinate_conversion_roundtrip(x, y, z, tau, v):
    p = np.array([x, y, z])
    a = core.coord_to_frame(p, v, tau)
    assert np.allclose(core.frame_to_coord(p, a, tau), v, atol=1e-9)
    # frame coefficients measure the metric norm
    g = core.metric_at(p, tau)
    v = np.asarray(v)
    assert np.isclose(a @ a, v @ g @ v, rtol=1e-9, atol=1e-9)


def test_connection_examples():
    tau = 0.7
    assert np.array_equal(core.connection_frame(1, 2, tau), [0, 0, tau])
    assert np.array_equal(core.connection_frame(2, 1, tau), [0, 0, -tau])
    assert np.array_equal(core.connection_frame(3, 3, tau), [0, 0, 0])
    assert np.array_equal(core.connection_frame(2, 3, tau), [tau, 0, 0])
    assert np.array_equal(core.connection_frame(3, 2, tau), [tau, 0, 0])
    assert np.array_equal(core.connection_frame(1, 3, tau), [0, -tau, 0])
    assert np.array_equal(core.connection_frame(3, 1, tau), [0, -tau, 0])
    for i in (1, 2, 3):
        assert np.array_equal(core.connection_frame(i, i, tau), [0, 0, 0])


@pytest.mark.parametrize("bad", [0, 4, -1, 1.5, "1", True])
def test_connection_rejects_bad_index(bad):
    with pytest.raises(ValueError):
        core.connection_frame(bad, 1, 0.5)


@pytest.mark.parametrize("tau", TAUS)
def test_connection_table_matches_christoffel_oracle(tau, rng):
    for p in rng.uniform(-2, 2, (5, 3)):
        G = christoffel_fd(p, tau)
        E = core.frame_at(p, tau)
        for i in range(3):
            for j in range(3):
                dEj = core.directional_derivative(lambda q: core.frame_at(q, tau)[j], p, E[i])
                coord = dEj + np.einsum("kab,a,b->k", G, E[i], E[j])
                expected = core.coord_to_frame(p, coord, tau)
                assert np.allclose(core.connection_frame(i + 1, j + 1, tau), expected, atol=1e-8)


@pytest.mark.parametrize("tau", TAUS)
def test_torsion_free_and_compatible(tau, rng):
    assert core.compatibility_defect(tau) == 0.0
    for p in rng.uniform(-3, 3, (10, 3)):
        assert core.torsion_defect(p, tau, h=1e-5) <= 1e-8


def test_flat_connection_vanishes():
    assert not np.any(core.connection_table(0.0))


def test_covariant_derivative_constant_e3_along_v1():
    tau, r, rp, phi = 0.5, 1.3, 0.8, 0.9
    s, c = np.sin(phi), np.cos(phi)
    v1 = [-rp * s, 1.0, 2 * tau * r * s + rp * c]
    got = core.covariant_derivative(v1, [0, 0, 1], [0, 0, 0], tau)
    assert np.allclose(got, [tau, tau * rp * s, 0.0], atol=1e-15)
    assert np.array_equal(core.covariant_derivative([0, 0, 1], [0, 0, 1], [0, 0, 0], tau), [0, 0, 0])


@pytest.mark.parametrize("tau", (0.25, 1.0))
def test_covariant_derivative_random_field_matches_christoffel(tau, rng):
    h = 1e-5
    A = rng.normal(size=(3, 3))

    def Y(q):
        return np.array([np.sin(A[0] @ q), np.cos(A[1] @ q), q[0] * q[2] + 0.3 * q[1]])

    for _ in range(5):
        p = rng.uniform(-1.5, 1.5, 3)
        X = rng.normal(size=3)
        # frame route
        coeffs = lambda q: core.coord_to_frame(q, Y(q), tau)
        db = core.directional_derivative(coeffs, p, X, h)
        got = core.covariant_derivative(core.coord_to_frame(p, X, tau), coeffs(p), db, tau)
        # coordinate route
        G = christoffel_fd(p, tau, h)
        coord = core.directional_derivative(Y, p, X, h) + np.einsum("kij,i,j->k", G, X, Y(p))
        assert np.allclose(core.frame_to_coord(p, got, tau), coord, atol=1e-8)


@pytest.mark.parametrize("tau", [0.0, 0.5, 2.0, 0.25, 1.0])
def test_bundle_curvature_is_tau(tau):
    assert core.bundle_curvature(tau) == tau
