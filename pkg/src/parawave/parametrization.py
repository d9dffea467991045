"""Wiener-Hopf coordinates of paraunitary matrix functions.

Forward map (``phi_to_wavelet``)
    Given ``phi_1..phi_{m-1}`` with strictly negative powers down to
    ``z**-g``, let ``F`` be the identity with last row
    ``(phi_1, ..., phi_{m-1}, 1)``.  The unitary ``U`` with ``F U`` analytic
    of degree ``g`` is found from the spectral factor ``P`` of ``S = F F*``:
    ``U = F^{-1} P``.  Rows ``1..m-1`` of ``U`` are those of ``P``; the last
    row is ``row_m(P) - sum_j phi_j row_j(P)``, which lands in ``[-g, 0]``.
    Multiplying the last row by ``z**g``, scaling by ``sqrt(m)`` and applying
    a constant Householder prefix gives a wavelet matrix of rank ``m``,
    genus ``g + 1`` and degree ``g``.

Inverse map (``wavelet_to_phi``)
    Undo prefix and scaling, divide the last row by ``z**d`` and solve the
    linear conditions "negative powers of the last row of ``F U`` vanish"
    for the ``(m-1) d`` coefficients.

The spectral factor is computed by Wilson's Newton iteration on circle
samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .errors import (
    DegenerateDegree,
    Inconsistent,
    NoConvergence,
    StructureViolation,
)
from .laurent import (
    LaurentMatrix,
    LaurentPoly,
    _to_grid,
    grid_max_norm,
    is_power_of_two,
    lm_adjoint,
    lm_det_monomial,
    lm_mul,
    lm_unitarity_residual,
)
from .wavelet_matrix import (
    WaveletMatrix,
    canonical_prefix,
    polyphase_to_wm,
    unitary_prefix,
    wm_degree,
    wm_to_polyphase,
)


@dataclass(frozen=True, eq=False)
class PhiParams:
    """``phi[j, k]`` is the coefficient of ``z**-(k+1)`` in ``phi_{j+1}``."""

    m: int
    g: int
    phi: np.ndarray

    def __post_init__(self):
        if self.m < 2 or self.g < 0:
            raise ValueError("need m >= 2 and g >= 0")
        phi = np.array(self.phi, dtype=complex).reshape(self.m - 1, self.g)
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def zeros(cls, m, g):
        return cls(m, g, np.zeros((m - 1, g)))

    def poly(self, j):
        """``phi_{j+1}`` as a LaurentPoly on powers ``[-g, -1]``."""
        if self.g == 0:
            return LaurentPoly.zero()
        return LaurentPoly(-self.g, self.phi[j, ::-1])

    def polys(self):
        return [self.poly(j) for j in range(self.m - 1)]

    def distance(self, other):
        if (self.m, self.g) != (other.m, other.g):
            return float("inf")
        if self.phi.size == 0:
            return 0.0
        return float(np.max(np.abs(self.phi - other.phi)))


@dataclass(frozen=True, eq=False)
class TriangularFactor:
    """Identity with last row ``(sign*phi_1, ..., sign*phi_{m-1}, 1)``.

    The entries are arbitrary Laurent polynomials so that constant terms can
    be represented; ``build_F`` produces the canonical strictly-negative form.
    """

    m: int
    g: int
    phi: tuple
    sign: int = 1

    def matrix(self):
        m = self.m
        rows = [[1 if i == j else 0 for j in range(m)] for i in range(m - 1)]
        rows.append([self.sign * p for p in self.phi] + [1])
        return LaurentMatrix.from_entries(rows)

    def inverse(self):
        return TriangularFactor(self.m, self.g, self.phi, -self.sign)


@dataclass(frozen=True, eq=False)
class UnitaryFactor:
    U: LaurentMatrix
    g: int
    iterations: int = 0
    factor_residual: float = 0.0
    unitarity_residual: float = 0.0


@dataclass(frozen=True, eq=False)
class WienerHopfCertificate:
    F_minus: TriangularFactor
    plus_part: LaurentMatrix
    residual: float
    negative_leak: float
    high_leak: float


def build_F(p, sign=1):
    return TriangularFactor(p.m, p.g, tuple(p.polys()), sign)


def gram_symbol(p):
    """``S = F F*`` for PhiParams or a TriangularFactor."""
    F = p if isinstance(p, TriangularFactor) else build_F(p)
    Fm = F.matrix()
    return lm_mul(Fm, lm_adjoint(Fm))


def wilson_grid_size(g):
    return 1 << (8 * (g + 1) - 1).bit_length()


def wilson_factor(S, g, tol=1e-10, n=None, maxiter=200, polish=1):
    """Wilson's Newton iteration for ``A A* = S`` with ``A`` in ``L+_g``.

    Each step forms ``X = A^-1 S A^-* + I`` on the grid and updates
    ``A <- A [X]_+``, where ``[.]_+`` keeps positive powers and half of the
    (Hermitian) constant term.  The update is truncated to powers ``0..g``;
    the exact factor has no higher powers, so truncation never increases
    the coefficient error.

    Stops once ``max_t ||A A* - S||_F <= tol * max(1, max_t ||S||_F)`` and
    ``polish`` further steps have been taken.  Returns ``(A, iterations,
    residual)``.
    """
    m = S.rows
    n = n or wilson_grid_size(g)
    if not is_power_of_two(n) or n < 4 * g + 4:
        raise ValueError(f"grid size {n} must be a power of two >= 4g+4")
    if S.lo < -g or S.hi > g:
        raise ValueError(f"symbol powers [{S.lo}, {S.hi}] exceed [-{g}, {g}]")
    Sg = _to_grid(S.window(-g, g), -g, n)
    sscale = max(1.0, float(np.max(np.linalg.norm(Sg, axis=(1, 2)))))
    thresh = tol * sscale
    eye = np.eye(m)
    half = n // 2

    coef = np.zeros((g + 1, m, m), dtype=complex)
    S0 = S.coeff(0)
    coef[0] = np.linalg.cholesky((S0 + S0.conj().T) / 2)

    polished = 0
    it = 0
    while True:
        Ag = _to_grid(coef, 0, n)
        AgH = np.conj(np.transpose(Ag, (0, 2, 1)))
        res = float(np.max(np.linalg.norm(Ag @ AgH - Sg, axis=(1, 2))))
        if res <= thresh:
            if polished >= polish:
                break
            polished += 1
        elif it >= maxiter:
            raise NoConvergence(it, res)
        it += 1
        Ainv = np.linalg.inv(Ag)
        X = Ainv @ Sg @ np.conj(np.transpose(Ainv, (0, 2, 1)))
        X = 0.5 * (X + np.conj(np.transpose(X, (0, 2, 1)))) + eye
        q = sfft.fft(X, axis=0) / n
        yc = np.zeros_like(q)
        yc[0] = 0.5 * q[0]
        yc[1:half] = q[1:half]
        Yg = sfft.ifft(yc, axis=0) * n
        coef = (sfft.fft(Ag @ Yg, axis=0) / n)[: g + 1]
    return LaurentMatrix(0, coef), it, res


def spectral_factor(S, g, tol=1e-10, n=None, maxiter=200):
    return wilson_factor(S, g, tol=tol, n=n, maxiter=maxiter)[0]


def construct_U(p, tol=1e-10, n=None, verify_tol=1e-9, maxiter=200):
    """Unitary ``U`` with ``F U`` in ``L+_g``, canonicalized to ``U(1) = I``.

    ``p`` is a PhiParams or a TriangularFactor with sign +1.
    """
    F = p if isinstance(p, TriangularFactor) else build_F(p)
    m, g = F.m, F.g
    S = gram_symbol(F)
    P, iters, fres = wilson_factor(S, g, tol=tol, n=n, maxiter=maxiter)
    U = lm_mul(F.inverse().matrix(), P)

    scale = max(1.0, P.max_abs())
    last = U.row(m - 1)
    leak = last.project(1, max(last.hi, 1)).max_abs()
    if leak > verify_tol * scale:
        raise StructureViolation(f"last row leaks positive powers ({leak:.3e})")
    low_leak = last.project(min(last.lo, -g - 1), -g - 1).max_abs()
    if low_leak > verify_tol * scale:
        raise StructureViolation(f"last row leaks powers below -g ({low_leak:.3e})")
    # drop the rounding-level leak so the last row sits exactly in [-g, 0]
    coef = U.window(U.lo, U.hi)
    powers = np.arange(U.lo, U.hi + 1)
    coef[(powers > 0) | (powers < -g), m - 1, :] = 0
    U = LaurentMatrix(U.lo, coef)

    U = U @ U(1.0).conj().T
    ures = lm_unitarity_residual(U, 1.0)
    if ures > verify_tol * scale:
        raise StructureViolation(f"U is not unitary on the circle ({ures:.3e})")
    _, d = lm_det_monomial(U, tol=1e-8)
    if d != 0:
        raise StructureViolation(f"det U has degree {d}, expected constant")
    return UnitaryFactor(U, g, iters, fres, ures)


def _shift_last_row(A, k):
    """Multiply the last row by ``z**k``."""
    m = A.rows
    z = [LaurentPoly.constant(1)] * (m - 1) + [LaurentPoly.monomial(k)]
    return lm_mul(LaurentMatrix.diag(z), A)


def phi_to_wavelet(p, tol=1e-10, n=None):
    m, g = p.m, p.g
    Uc = construct_U(p, tol=tol, n=n).U
    A = np.sqrt(m) * _shift_last_row(Uc, g)
    A = A.project(0, g)
    pre = unitary_prefix(A, m)
    return polyphase_to_wm(pre @ A, m, genus=g + 1)


def _normalize_genus(W, d, tol):
    a = W.coeffs
    G = W.genus
    scale = max(1.0, float(np.max(np.abs(a))))
    while G > d + 1 and np.max(np.abs(a[:, W.m * (G - 1) : W.m * G])) <= tol * scale:
        G -= 1
    if G > d + 1:
        raise DegenerateDegree(
            f"genus {W.genus} cannot be trimmed to degree + 1 = {d + 1}"
        )
    if G < W.genus:
        return WaveletMatrix(W.m, G, a[:, : W.m * G])
    if G < d + 1:
        return W.padded(d + 1)
    return W


def unitary_of_wavelet(W, d, undo_prefix=True):
    """``U = diag(1, .., z**-d) A / sqrt(m)``; W must already have genus d+1."""
    m = W.m
    A = wm_to_polyphase(W)
    if undo_prefix:
        A = canonical_prefix(m).conj().T @ A
    return _shift_last_row(A * (1 / np.sqrt(m)), -d)


def coordinate_system(U, m, d):
    """Linear system ``M x = b`` whose solution holds the coordinates.

    Unknown ``(j, k)`` is the coefficient of ``z**-k`` in ``phi_{j+1}``; row
    ``(l, t)`` states that the ``z**-t`` coefficient of the last row of
    ``F U`` vanishes in column ``l``.
    """
    up = U.window(0, d)[:, : m - 1, :]  # up[p, j, l]: z**p coeff of u_{j,l}
    um = U.window(-d, 0)[:, m - 1, :]  # um[i, l]: z**(i-d) coeff of last row
    M = np.zeros((m, d, m - 1, d), dtype=complex)
    for t in range(1, d + 1):
        for k in range(t, d + 1):
            # coefficient phi_j[k] * u_{j,l}[k - t]
            M[:, t - 1, :, k - 1] = up[k - t].T
    b = -um[d - np.arange(1, d + 1)].T  # b[l, t-1] = -(z**-t coeff)
    return M.reshape(m * d, (m - 1) * d), b.reshape(m * d)


def wavelet_to_phi(W, undo_prefix=True, tol=1e-8):
    m = W.m
    d = wm_degree(W)
    W = _normalize_genus(W, d, tol)
    if d == 0:
        return PhiParams.zeros(m, 0)
    U = unitary_of_wavelet(W, d, undo_prefix)
    M, b = coordinate_system(U, m, d)
    # coefficients of U are bounded by 1, so an absolute cutoff is meaningful
    u, s, vh = np.linalg.svd(M, full_matrices=False)
    keep = s > 1e-10
    x = vh[keep].conj().T @ ((u[:, keep].conj().T @ b) / s[keep])
    res = float(np.max(np.abs(M @ x - b)))
    if res > tol:
        raise Inconsistent(res)
    if not keep.all():
        raise Inconsistent(res, "coordinate system is rank deficient (coordinates not unique)")
    return PhiParams(m, d, x.reshape(m - 1, d))


def wiener_hopf_certificate(U, p):
    """Check ``U = F_- (F U)`` with ``F U`` analytic of degree ``g``."""
    Um = U.U if isinstance(U, UnitaryFactor) else U
    F = build_F(p)
    plus = lm_mul(F.matrix(), Um)
    g = p.g
    neg = plus.project(min(plus.lo, -1), -1).max_abs() if plus.lo < 0 else 0.0
    high = plus.project(g + 1, max(plus.hi, g + 1)).max_abs() if plus.hi > g else 0.0
    residual = grid_max_norm(lm_mul(F.inverse().matrix(), plus) - Um)
    return WienerHopfCertificate(F.inverse(), plus, residual, neg, high)


__all__ = [
    "PhiParams",
    "TriangularFactor",
    "UnitaryFactor",
    "WienerHopfCertificate",
    "build_F",
    "construct_U",
    "coordinate_system",
    "gram_symbol",
    "phi_to_wavelet",
    "spectral_factor",
    "wavelet_to_phi",
    "wiener_hopf_certificate",
    "wilson_factor",
    "wilson_grid_size",
]
