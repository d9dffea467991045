import numpy as np
import pytest

from conftest import D4_ROWS, HAAR_ROWS, random_unitary, unit_vector
from parawave.errors import NegativePowers, NotParaunitary, NotUnitary
from parawave.laurent import LaurentMatrix, lm_unitarity_residual
from parawave.primitive import PrimitiveFactor, PrimitiveFactorization, synthesize
from parawave.wavelet_matrix import (
    WaveletMatrix,
    apply_left_unitary,
    linear_residual_polyphase,
    polyphase_to_wm,
    quadratic_residual,
    quadratic_residual_polyphase,
    unitary_prefix,
    wm_degree,
    wm_to_polyphase,
    wm_validate,
)


def brute_quadratic(W):
    # literal Eq-(2)-style quadruple loop over r, s, l, n
    m, G = W.m, W.genus
    a = W.coeffs
    N = m * G

    def entry(r, j):
        return a[r, j] if 0 <= j < N else 0

    worst = 0.0
    for r in range(m):
        for s in range(m):
            for l in range(-G, G + 1):
                for n in range(-G, G + 1):
                    tot = sum(
                        entry(r, j + m * l) * np.conj(entry(s, j + m * n))
                        for j in range(-2 * N, 2 * N)
                    )
                    want = m if (r == s and n == l) else 0
                    worst = max(worst, abs(tot - want))
    return worst


def test_haar_valid(haar):
    rep = wm_validate(haar)
    assert rep.quad_residual == 0 and rep.linear_residual == 0
    assert rep.degree == 0 and abs(rep.det_const + 2) < 1e-12
    assert rep.passed


def test_d4_valid(d4):
    rep = wm_validate(d4)
    assert rep.quad_residual <= 1e-14 and rep.linear_residual <= 1e-14
    assert rep.degree == 1
    assert brute_quadratic(d4) <= 1e-14


def test_perturbed_haar():
    rows = HAAR_ROWS.copy()
    rows[0, 1] += 0.01
    W = WaveletMatrix.from_rows(rows)
    rep = wm_validate(W)
    assert rep.quad_residual >= 0.01
    assert abs(rep.quad_residual - brute_quadratic(W)) <= 1e-14
    assert not rep.passed


def test_two_paths_agree(rng):
    for trial in range(200):
        m = int(rng.integers(2, 5))
        G = int(rng.integers(1, 5))
        if trial % 2:
            c = rng.standard_normal((m, m * G)) + 1j * rng.standard_normal((m, m * G))
            W = WaveletMatrix(m, G, c)
        else:
            f = PrimitiveFactorization(
                [PrimitiveFactor(unit_vector(rng, m)) for _ in range(G - 1)],
                random_unitary(rng, m),
            )
            A = np.sqrt(m) * synthesize(f)
            A = unitary_prefix(A, m) @ A
            W = polyphase_to_wm(A, m, genus=G)
        q1, q2 = quadratic_residual(W), quadratic_residual_polyphase(W)
        assert abs(q1 - q2) <= 1e-12 * max(1, q1)
        rep = wm_validate(W)
        assert abs(rep.linear_residual - linear_residual_polyphase(W)) <= 1e-12 * max(
            1, rep.linear_residual
        )


def test_polyphase_layout(haar, d4):
    A = wm_to_polyphase(haar)
    assert A.lo == 0 and A.hi == 0
    assert np.array_equal(A.coeff(0), HAAR_ROWS)
    A = wm_to_polyphase(d4)
    a0, a1 = D4_ROWS
    assert np.array_equal(A.coeff(0), [[a0[0], a0[1]], [a1[0], a1[1]]])
    assert np.array_equal(A.coeff(1), [[a0[2], a0[3]], [a1[2], a1[3]]])
    for W in (haar, d4):
        assert polyphase_to_wm(wm_to_polyphase(W)).distance(W) == 0


def test_polyphase_round_trip_random(rng):
    c = rng.standard_normal((3, 12)) + 1j * rng.standard_normal((3, 12))
    W = WaveletMatrix(3, 4, c)
    back = polyphase_to_wm(wm_to_polyphase(W), 3, genus=4)
    assert np.array_equal(back.coeffs, W.coeffs)
    # oracle: direct index bookkeeping a^r_{km+s} = A_k[r, s]
    A = wm_to_polyphase(W)
    for k in range(4):
        for r in range(3):
            for s in range(3):
                assert A.coeff(k)[r, s] == c[r, 3 * k + s]


def test_negative_powers():
    A = LaurentMatrix(-1, np.eye(2)[None])
    with pytest.raises(NegativePowers):
        polyphase_to_wm(A, 2)


def test_degree(haar, d4):
    assert wm_degree(haar) == 0
    assert wm_degree(d4) == 1


def test_polyphase_unitarity_bound(d4, haar):
    for W in (d4, haar):
        rep = wm_validate(W)
        assert lm_unitarity_residual(wm_to_polyphase(W), W.m) <= 10 * max(rep.quad_residual, 1e-15)


def test_prefix_identity_case(haar):
    U = unitary_prefix(wm_to_polyphase(haar), 2)
    assert np.allclose(U, np.eye(2), atol=1e-15)


def test_prefix_sqrt2_identity():
    A = LaurentMatrix.constant(np.sqrt(2) * np.eye(2))
    U = unitary_prefix(A, 2)
    want = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert np.max(np.abs(U - want)) <= 1e-15
    assert np.max(np.abs((U @ A).coeff(0) - HAAR_ROWS)) <= 1e-15


def test_prefix_random_paraunitary(rng):
    for m in (2, 3, 5):
        f = PrimitiveFactorization(
            [PrimitiveFactor(unit_vector(rng, m)) for _ in range(3)], random_unitary(rng, m)
        )
        A = np.sqrt(m) * synthesize(f)
        U = unitary_prefix(A, m)
        assert np.max(np.abs(U @ U.conj().T - np.eye(m))) <= 1e-12
        sums = (U @ A)(1.0).sum(axis=1)
        want = np.zeros(m)
        want[0] = m
        assert np.max(np.abs(sums - want)) <= 1e-10
        # second application is the identity
        U2 = unitary_prefix(U @ A, m)
        assert np.max(np.abs(U2 - np.eye(m))) <= 1e-12


def test_prefix_rejects_non_paraunitary():
    with pytest.raises(NotParaunitary):
        unitary_prefix(LaurentMatrix.constant(np.eye(2)), 2)


def test_apply_left_unitary(haar, d4, rng):
    assert apply_left_unitary(np.eye(2), haar).distance(haar) == 0
    flipped = apply_left_unitary(np.diag([1, -1]), haar)
    assert np.array_equal(flipped.coeffs, [[1, 1], [-1, 1]])
    assert wm_validate(flipped).quad_residual == 0
    U = random_unitary(rng, 2)
    W = apply_left_unitary(U, d4)
    assert quadratic_residual(W) <= 1e-12
    assert wm_degree(W) == 1
    assert wm_to_polyphase(W).distance(U @ wm_to_polyphase(d4)) <= 1e-15
    with pytest.raises(NotUnitary):
        apply_left_unitary(np.array([[1, 0], [0, 2]]), d4)
