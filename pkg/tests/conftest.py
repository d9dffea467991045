import sys
import numpy as np
import pytest

from parawave.laurent import LaurentMatrix, LaurentPoly


def random_poly(rng, lo, hi):
    k = hi - lo + 1
    return LaurentPoly(lo, rng.standard_normal(k) + 1j * rng.standard_normal(k))


def random_matrix(rng, m, lo, hi, cols=None):
    cols = cols or m
    k = hi - lo + 1
    c = rng.standard_normal((k, m, cols)) + 1j * rng.standard_normal((k, m, cols))
    return LaurentMatrix(lo, c)


def random_unitary(rng, m):
    Z = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def unit_vector(rng, m):
    v = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    return v / np.linalg.norm(v)


SQ3 = np.sqrt(3.0)
D4_LOW = np.array([(1 + SQ3) / 4, (3 + SQ3) / 4, (3 - SQ3) / 4, (1 - SQ3) / 4])
D4_ROWS = np.array([D4_LOW, [D4_LOW[3], -D4_LOW[2], D4_LOW[1], -D4_LOW[0]]])
HAAR_ROWS = np.array([[1.0, 1.0], [1.0, -1.0]])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def haar():
    from parawave.wavelet_matrix import WaveletMatrix

    return WaveletMatrix.from_rows(HAAR_ROWS, m=2)


@pytest.fixture
def d4():
    from parawave.wavelet_matrix import WaveletMatrix

    return WaveletMatrix.from_rows(D4_ROWS, m=2)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: s[6:9]):
            terminalreporter.write_line(line)
