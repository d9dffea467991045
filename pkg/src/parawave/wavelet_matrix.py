"""Compact wavelet matrices and their polyphase matrix functions.

A wavelet matrix of rank ``m`` and genus ``G`` is stored as an ``m x mG``
complex array whose column ``j`` holds ``a^r_j`` for ``j = 0..mG-1``.  The
polyphase function is ``A(z) = sum_k A_k z**k`` with ``A_k[r, s] = a^r_{km+s}``.

Translating a wavelet matrix by ``m`` columns multiplies its polyphase
function by ``z``; only the translate with support starting at ``j = 0`` is
represented here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    NegativePowers,
    NotMonomial,
    NotParaunitary,
    NotUnitary,
    SingularInput,
)
from .laurent import LaurentMatrix, lm_adjoint, lm_det_monomial, lm_mul


@dataclass(frozen=True, eq=False)
class WaveletMatrix:
    m: int
    genus: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if self.m < 2:
            raise ValueError("rank must be at least 2")
        if self.genus < 1:
            raise ValueError("genus must be at least 1")
        if c.shape != (self.m, self.m * self.genus):
            raise ValueError(
                f"expected coefficients of shape {(self.m, self.m * self.genus)}, got {c.shape}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_rows(cls, rows, m=None):
        """Build from an ``m x N`` array; ``N`` is zero-padded to a multiple of ``m``."""
        rows = np.atleast_2d(np.asarray(rows, dtype=complex))
        m = m or rows.shape[0]
        if rows.shape[0] != m:
            raise ValueError(f"expected {m} rows, got {rows.shape[0]}")
        G = max(1, -(-rows.shape[1] // m))
        c = np.zeros((m, m * G), dtype=complex)
        c[:, : rows.shape[1]] = rows
        return cls(m, G, c)

    @property
    def scaling_vector(self):
        return self.coeffs[0]

    @property
    def wavelet_vectors(self):
        return self.coeffs[1:]

    def padded(self, genus):
        """Same matrix with trailing zero blocks up to ``genus``."""
        if genus < self.genus:
            raise ValueError("cannot pad to a smaller genus")
        c = np.zeros((self.m, self.m * genus), dtype=complex)
        c[:, : self.coeffs.shape[1]] = self.coeffs
        return WaveletMatrix(self.m, genus, c)

    def distance(self, other):
        G = max(self.genus, other.genus)
        return float(np.max(np.abs(self.padded(G).coeffs - other.padded(G).coeffs)))


@dataclass(frozen=True)
class ValidationReport:
    quad_residual: float
    linear_residual: float
    degree: Optional[int]
    det_const: Optional[complex]
    tol: float = 1e-9

    @property
    def passed(self):
        return self.quad_residual <= self.tol and self.linear_residual <= self.tol

    def to_dict(self):
        c = self.det_const
        return {
            "quad_residual": self.quad_residual,
            "linear_residual": self.linear_residual,
            "degree": self.degree,
            "det_const": None if c is None else [c.real, c.imag],
            "tol": self.tol,
            "passed": self.passed,
        }


def quadratic_residual(W):
    """Max deviation of ``sum_j a^r_{j+mt} conj(a^s_j)`` from ``m d_rs d_t0``.

    Direct summation over all shifts ``t`` with nonzero overlap.
    """
    m, G, a = W.m, W.genus, W.coeffs
    worst = 0.0
    for t in range(G):
        M = a[:, m * t :] @ a[:, : m * (G - t)].conj().T
        if t == 0:
            M = M - m * np.eye(m)
        # shift -t is the adjoint of shift t
        worst = max(worst, float(np.max(np.abs(M))))
    return worst


def quadratic_residual_polyphase(W):
    """Same quantity via the coefficients of ``A(z) A*(1/z) - m I``."""
    A = wm_to_polyphase(W)
    if A.is_zero():
        return float(W.m)
    P = lm_mul(A, lm_adjoint(A)) - LaurentMatrix.constant(W.m * np.eye(W.m))
    return P.max_abs()


def linear_residual(W):
    target = np.zeros(W.m)
    target[0] = W.m
    return float(np.max(np.abs(W.coeffs.sum(axis=1) - target)))


def linear_residual_polyphase(W):
    A = wm_to_polyphase(W)
    target = np.zeros(W.m)
    target[0] = W.m
    return float(np.max(np.abs(A(1.0).sum(axis=1) - target)))


def wm_validate(W, tol=1e-9):
    try:
        c, d = lm_det_monomial(wm_to_polyphase(W), tol=max(tol, 1e-8))
    except (NotMonomial, SingularInput):
        c, d = None, None
    return ValidationReport(
        quad_residual=quadratic_residual(W),
        linear_residual=linear_residual(W),
        degree=d,
        det_const=c,
        tol=tol,
    )


def wm_to_polyphase(W):
    m, G = W.m, W.genus
    blocks = W.coeffs.reshape(m, G, m).transpose(1, 0, 2)
    return LaurentMatrix(0, blocks)


def polyphase_to_wm(A, m=None, genus=None):
    m = m or A.rows
    if A.shape != (m, m):
        raise ValueError(f"expected a {m}x{m} matrix function, got {A.shape}")
    if A.is_zero():
        raise ValueError("zero matrix function has no wavelet matrix")
    if A.lo < 0:
        raise NegativePowers(f"lowest power {A.lo} < 0; shift the support first")
    G = A.hi + 1 if genus is None else genus
    if G < A.hi + 1:
        raise ValueError(f"genus {G} too small for powers up to {A.hi}")
    blocks = A.window(0, G - 1)
    return WaveletMatrix(m, G, blocks.transpose(1, 0, 2).reshape(m, m * G))


def wm_degree(W, tol=1e-8):
    return lm_det_monomial(wm_to_polyphase(W), tol=tol)[1]


def householder_prefix(x, m):
    """Constant unitary ``U`` with ``U @ x = m e_1``, assuming ``|x| = m``.

    Phase-aligned Householder reflector: with ``s = x_1/|x_1|`` the reflector
    maps ``x`` to ``s m e_1`` and the leading ``diag(conj(s), 1, ...)`` removes
    the phase.
    """
    x = np.asarray(x, dtype=complex)
    n = x.shape[0]
    s = x[0] / abs(x[0]) if abs(x[0]) >= 1e-14 else 1.0
    u = x.copy()
    u[0] -= s * m
    uu = np.vdot(u, u).real
    H = np.eye(n, dtype=complex)
    # below ~1e-28 the reflector direction is pure rounding noise
    if uu > 1e-28:
        H -= 2.0 * np.outer(u, u.conj()) / uu
    H[0] *= np.conj(s)
    return H


def unitary_prefix(A, m=None, tol=1e-8):
    m = m or A.rows
    x = A(1.0) @ np.ones(A.cols)
    if abs(np.linalg.norm(x) - m) > tol:
        raise NotParaunitary(f"|A(1) 1| = {np.linalg.norm(x):.12g}, expected {m}")
    return householder_prefix(x, m)


def canonical_prefix(m):
    """Prefix for matrices with ``A(1) 1 = sqrt(m) 1``; depends only on ``m``."""
    return householder_prefix(np.full(m, np.sqrt(m)), m)


def apply_left_unitary(U, W, tol=1e-10):
    U = np.asarray(U, dtype=complex)
    if U.shape != (W.m, W.m):
        raise ValueError(f"expected a {W.m}x{W.m} unitary")
    if np.max(np.abs(U @ U.conj().T - np.eye(W.m))) > tol:
        raise NotUnitary("left factor is not unitary")
    return WaveletMatrix(W.m, W.genus, U @ W.coeffs)


__all__ = [
    "ValidationReport",
    "WaveletMatrix",
    "apply_left_unitary",
    "canonical_prefix",
    "householder_prefix",
    "linear_residual",
    "linear_residual_polyphase",
    "polyphase_to_wm",
    "quadratic_residual",
    "quadratic_residual_polyphase",
    "unitary_prefix",
    "wm_degree",
    "wm_to_polyphase",
    "wm_validate",
]
