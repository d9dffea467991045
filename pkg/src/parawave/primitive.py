"""Products of primitive paraunitary factors ``V(z) = I - vv* + vv* z``.

``extract_factors`` peels one factor per step: any unit vector ``v`` in the
range of the top coefficient satisfies ``v* A_0 = 0`` (paraunitarity), so
``(I - vv* + vv* z^-1) A(z)`` stays polynomial and its determinant degree
drops by one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegreeStuck, NotUnit, NotUnitary
from .laurent import LaurentMatrix, lm_det_monomial, lm_mul


@dataclass(frozen=True)
class PrimitiveFactor:
    v: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, dtype=complex).reshape(-1)
        if abs(np.linalg.norm(v) - 1) > 1e-10:
            raise NotUnit(f"|v| = {np.linalg.norm(v):.15g}")
        object.__setattr__(self, "v", v)

    def matrix(self):
        return make_primitive(self.v)


@dataclass(frozen=True)
class PrimitiveFactorization:
    factors: list
    tail_unitary: np.ndarray
    residual: float = field(default=float("nan"), compare=False)

    @property
    def m(self):
        return self.tail_unitary.shape[0]

    @property
    def degree(self):
        return len(self.factors)

    def to_dict(self):
        pair = lambda c: [float(c.real), float(c.imag)]  # noqa: E731
        return {
            "m": self.m,
            "factors": [[pair(c) for c in f.v] for f in self.factors],
            "tail_unitary": [[pair(c) for c in row] for row in self.tail_unitary],
            "resynthesis_residual": self.residual,
        }


def make_primitive(v):
    v = np.asarray(v, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(v) - 1) > 1e-10:
        raise NotUnit(f"|v| = {np.linalg.norm(v):.15g}")
    P = np.outer(v, v.conj())
    return LaurentMatrix(0, np.stack([np.eye(v.size) - P, P]))


def _inverse_primitive(v):
    P = np.outer(v, v.conj())
    return LaurentMatrix(-1, np.stack([P, np.eye(v.size) - P]))


def synthesize(f):
    U = np.asarray(f.tail_unitary, dtype=complex)
    if np.max(np.abs(U @ U.conj().T - np.eye(U.shape[0]))) > 1e-10:
        raise NotUnitary("tail matrix is not unitary")
    A = LaurentMatrix.constant(U)
    for fac in reversed(f.factors):
        A = lm_mul(make_primitive(fac.v), A)
    return A


def _phase_fix(v):
    # make the largest-modulus component real positive (ties: lowest index)
    mags = np.abs(v)
    k = int(np.flatnonzero(mags >= mags.max() * (1 - 1e-12))[0])
    return v * (abs(v[k]) / v[k])


def extract_factors(A, tol=1e-9):
    """Factor a paraunitary polynomial ``A`` (``A A* = I``) into primitives."""
    if A.lo < 0:
        raise DegreeStuck("input has negative powers")
    scale = max(1.0, A.max_abs())
    try:
        start_degree = lm_det_monomial(A, tol=max(tol, 1e-8))[1]
    except Exception as exc:
        raise DegreeStuck(f"determinant is not a monomial: {exc}") from exc
    factors = []
    cur = A
    for _ in range(start_degree):
        top = cur.coeff(cur.hi)
        u, s, _vh = np.linalg.svd(top)
        if s[0] <= tol * scale:
            raise DegreeStuck("top coefficient vanished before the degree did")
        v = _phase_fix(u[:, 0])
        nxt = lm_mul(_inverse_primitive(v), cur)
        leak = np.max(np.abs(nxt.coeff(-1))) if nxt.lo < 0 else 0.0
        if leak > 10 * tol * scale:
            raise DegreeStuck(f"negative-power leak {leak:.3e} after removing a factor")
        nxt = nxt.project(0, nxt.hi)
        # drop rounding-level top blocks so the next top coefficient is genuine
        while nxt.hi > 0 and np.max(np.abs(nxt.coeff(nxt.hi))) <= 10 * tol * scale:
            nxt = nxt.project(0, nxt.hi - 1)
        factors.append(PrimitiveFactor(v))
        cur = nxt
    if cur.hi > 0 and np.max(np.abs(cur.window(1, cur.hi))) > 10 * tol * scale:
        raise DegreeStuck("remaining matrix is not constant")
    tail = cur.coeff(0)
    fac = PrimitiveFactorization(factors, tail)
    resid = _resynthesis_error(fac, A)
    return PrimitiveFactorization(factors, tail, resid)


def _resynthesis_error(f, A):
    # no unitarity gate on the tail: it carries the same rounding as A
    B = LaurentMatrix.constant(f.tail_unitary)
    for fac in reversed(f.factors):
        B = lm_mul(make_primitive(fac.v), B)
    return (B - A).max_abs()


def random_factorization(rng, m, d):
    """Random unit vectors and a random tail unitary (complex Gaussian / QR)."""
    factors = []
    for _ in range(d):
        v = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        factors.append(PrimitiveFactor(v / np.linalg.norm(v)))
    Z = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    Q, R = np.linalg.qr(Z)
    return PrimitiveFactorization(factors, Q * (np.diag(R) / np.abs(np.diag(R))))


def factor_wavelet_matrix(W, tol=1e-9):
    """Primitive factorization of ``A(z) / sqrt(m)`` for a wavelet matrix ``W``."""
    from .wavelet_matrix import wm_to_polyphase

    return extract_factors(wm_to_polyphase(W) * (1 / np.sqrt(W.m)), tol=tol)
