import numpy as np
import pytest

TAUS = (0.0, 0.25, 0.5, 1.0)


def christoffel_fd(p, tau, h=1e-5):
    """Gamma^k_ij from central differences of the coordinate metric."""
    from nil3.core import metric_at

    p = np.asarray(p, float)
    dg = np.zeros((3, 3, 3))  # dg[l, i, j] = d_l g_ij
    for l in range(3):
        e = np.zeros(3)
        e[l] = h
        dg[l] = (metric_at(p + e, tau) - metric_at(p - e, tau)) / (2 * h)
    ginv = np.linalg.inv(metric_at(p, tau))
    # Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)
    # term[i, j, l]
    term = dg + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0)
    return 0.5 * np.einsum("kl,ijl->kij", ginv, term)


def polarized_metric(p, tau):
    """Metric matrix recovered from the quadratic form ds^2 by polarization."""
    x = p[0]

    def Q(w):
        return w[0] ** 2 + w[1] ** 2 + (2 * tau * x * w[1] - w[2]) ** 2

    I = np.eye(3)
    return np.array([[0.25 * (Q(I[i] + I[j]) - Q(I[i] - I[j])) for j in range(3)] for i in range(3)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in test_acceptance.RESULTS.values():
        terminalreporter.write_line(line)
