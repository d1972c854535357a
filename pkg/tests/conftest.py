import numpy as np
import pytest

ACCEPTANCE_LINES = []


def random_skew(rng, n, scale=1.0):
    B = rng.standard_normal((n, n)) * scale
    return B - B.T


def random_normal_antisymmetric(rng, n, complex_=True):
    """Q diag-blocks(lam_i [[0,1],[-1,0]]) Q^T with Q real orthogonal.

    Every normal antisymmetric matrix has this form: its real and imaginary
    parts are commuting real skew matrices.
    """
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    m = n // 2
    lam = rng.standard_normal(m)
    if complex_:
        lam = lam + 1j * rng.standard_normal(m)
    B = np.zeros((n, n), dtype=complex if complex_ else float)
    idx = 2 * np.arange(m)
    B[idx, idx + 1] = lam
    B[idx + 1, idx] = -lam
    return Q @ B @ Q.T


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
