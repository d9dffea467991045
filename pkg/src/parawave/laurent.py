"""Scalar and matrix Laurent polynomials.

Coefficients are stored densely over the power window ``[lo, hi]``.  Matrix
polynomials keep a single ``(K, rows, cols)`` array with one common ``lo``,
so products and grid evaluation vectorize over the power axis.

Grid evaluation uses the roots of unity ``z_t = exp(2*pi*i*t/n)`` and goes
through the FFT; coefficient recovery from ``n`` samples is exact whenever
the power span is below ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .errors import DimensionMismatch, GridTooSmall, NotMonomial, SingularInput


def _trim(lo, coeffs, axes):
    # drop exactly-zero power slices from both ends
    nz = np.flatnonzero(np.any(coeffs != 0, axis=axes) if axes else coeffs != 0)
    if nz.size == 0:
        return 0, coeffs[:0]
    return lo + int(nz[0]), coeffs[nz[0] : nz[-1] + 1]


def is_power_of_two(n):
    return n >= 1 and n & (n - 1) == 0


def grid_size(span, minimum=2):
    """Smallest power of two ``n`` with ``n >= 2*span + 2``."""
    need = max(2 * int(span) + 2, minimum)
    return 1 << (need - 1).bit_length()


def circle_points(n):
    return np.exp(2j * np.pi * np.arange(n) / n)


def _to_grid(coeffs, lo, n):
    """Evaluate stacked coefficients (power axis first) at n roots of unity."""
    K = coeffs.shape[0]
    if K > n:
        raise GridTooSmall(f"{K} powers do not fit on a grid of {n} points")
    if K == 0:
        return np.zeros((n,) + coeffs.shape[1:], dtype=complex)
    vals = sfft.ifft(coeffs, n=n, axis=0) * n
    if lo:
        phase = np.exp(2j * np.pi * lo * np.arange(n) / n)
        vals *= phase.reshape((n,) + (1,) * (coeffs.ndim - 1))
    return vals


def _from_grid(values, lo, hi):
    """Recover coefficients of powers lo..hi from samples at n roots of unity."""
    n = values.shape[0]
    if hi - lo + 1 > n:
        raise GridTooSmall(f"span {hi - lo} cannot be recovered from {n} points")
    if lo:
        phase = np.exp(-2j * np.pi * lo * np.arange(n) / n)
        values = values * phase.reshape((n,) + (1,) * (values.ndim - 1))
    return sfft.fft(values, axis=0)[: hi - lo + 1] / n


@dataclass(frozen=True, eq=False)
class LaurentPoly:
    """Scalar Laurent polynomial ``sum_k coeffs[k] z**(lo + k)``."""

    lo: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        lo, c = _trim(int(self.lo), c, None)
        c.setflags(write=False)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls):
        return cls(0, [])

    @classmethod
    def constant(cls, c):
        return cls(0, [c])

    @classmethod
    def monomial(cls, k, c=1.0):
        return cls(k, [c])

    @property
    def hi(self):
        return self.lo + len(self.coeffs) - 1

    @property
    def span(self):
        return max(len(self.coeffs) - 1, 0)

    def is_zero(self):
        return len(self.coeffs) == 0

    def coeff(self, k):
        i = k - self.lo
        if 0 <= i < len(self.coeffs):
            return complex(self.coeffs[i])
        return 0j

    def in_plus(self, g):
        return self.is_zero() or (self.lo >= 0 and self.hi <= g)

    def in_minus(self, g):
        return self.is_zero() or (self.lo >= -g and self.hi <= 0)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.is_zero():
            return np.zeros_like(z)
        # Horner in z, then the z**lo factor
        acc = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc * z**self.lo

    def __add__(self, other):
        other = _as_poly(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        c = np.zeros(hi - lo + 1, dtype=complex)
        c[self.lo - lo : self.hi - lo + 1] += self.coeffs
        c[other.lo - lo : other.hi - lo + 1] += other.coeffs
        return LaurentPoly(lo, c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.lo, -self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return lp_mul(self, other)
        return LaurentPoly(self.lo, self.coeffs * complex(other))

    __rmul__ = __mul__

    def tilde(self):
        return lp_tilde(self)

    def project(self, lo, hi):
        return lp_project(self, lo, hi)

    def max_abs(self):
        return float(np.max(np.abs(self.coeffs))) if len(self.coeffs) else 0.0

    def __repr__(self):
        return f"LaurentPoly(lo={self.lo}, coeffs={self.coeffs.tolist()})"


def _as_poly(x):
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly.constant(complex(x))


def lp_mul(a, b):
    if a.is_zero() or b.is_zero():
        return LaurentPoly.zero()
    return LaurentPoly(a.lo + b.lo, np.convolve(a.coeffs, b.coeffs))


def lp_tilde(a):
    """``a~(z) = conj(a(1/conj(z)))``: conjugate coefficients, reflect powers."""
    if a.is_zero():
        return a
    return LaurentPoly(-a.hi, np.conj(a.coeffs[::-1]))


def lp_project(a, lo, hi):
    if lo > hi:
        raise ValueError("lo must not exceed hi")
    if a.is_zero() or hi < a.lo or lo > a.hi:
        return LaurentPoly.zero()
    s = max(lo, a.lo)
    e = min(hi, a.hi)
    return LaurentPoly(s, a.coeffs[s - a.lo : e - a.lo + 1])


@dataclass(frozen=True, eq=False)
class LaurentMatrix:
    """Matrix Laurent polynomial ``sum_k coeffs[k] z**(lo + k)``.

    ``coeffs`` has shape ``(K, rows, cols)``; slice ``k`` is the matrix
    coefficient of ``z**(lo + k)``.
    """

    lo: int
    coeffs: np.ndarray

    # let ``ndarray @ LaurentMatrix`` reach __rmatmul__
    __array_ufunc__ = None

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 3 or c.shape[1] < 1 or c.shape[2] < 1:
            raise DimensionMismatch(f"expected (K, rows, cols) coefficients, got {c.shape}")
        lo, c = _trim(int(self.lo), c, (1, 2))
        c.setflags(write=False)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "coeffs", c)

    # construction ---------------------------------------------------------

    @classmethod
    def identity(cls, m):
        return cls(0, np.eye(m, dtype=complex)[None])

    @classmethod
    def zeros(cls, rows, cols):
        return cls(0, np.zeros((0, rows, cols), dtype=complex))

    @classmethod
    def constant(cls, M):
        M = np.asarray(M, dtype=complex)
        return cls(0, M[None])

    @classmethod
    def from_entries(cls, entries):
        """Build from a row-major nested list of LaurentPoly (or scalars)."""
        grid = [[_as_poly(e) for e in row] for row in entries]
        rows, cols = len(grid), len(grid[0])
        if any(len(r) != cols for r in grid):
            raise DimensionMismatch("ragged entry grid")
        nz = [e for r in grid for e in r if not e.is_zero()]
        if not nz:
            return cls.zeros(rows, cols)
        lo = min(e.lo for e in nz)
        hi = max(e.hi for e in nz)
        c = np.zeros((hi - lo + 1, rows, cols), dtype=complex)
        for i, r in enumerate(grid):
            for j, e in enumerate(r):
                if not e.is_zero():
                    c[e.lo - lo : e.hi - lo + 1, i, j] = e.coeffs
        return cls(lo, c)

    @classmethod
    def diag(cls, polys):
        m = len(polys)
        return cls.from_entries(
            [[polys[i] if i == j else 0 for j in range(m)] for i in range(m)]
        )

    # shape ----------------------------------------------------------------

    @property
    def rows(self):
        return self.coeffs.shape[1]

    @property
    def cols(self):
        return self.coeffs.shape[2]

    @property
    def shape(self):
        return self.coeffs.shape[1:]

    @property
    def hi(self):
        return self.lo + self.coeffs.shape[0] - 1

    @property
    def span(self):
        return max(self.coeffs.shape[0] - 1, 0)

    def is_zero(self):
        return self.coeffs.shape[0] == 0

    # access ---------------------------------------------------------------

    def coeff(self, k):
        i = k - self.lo
        if 0 <= i < self.coeffs.shape[0]:
            return self.coeffs[i].copy()
        return np.zeros(self.shape, dtype=complex)

    def window(self, lo, hi):
        """Dense coefficient array for powers lo..hi (zero-filled)."""
        out = np.zeros((hi - lo + 1,) + self.shape, dtype=complex)
        if self.is_zero():
            return out
        s, e = max(lo, self.lo), min(hi, self.hi)
        if s <= e:
            out[s - lo : e - lo + 1] = self.coeffs[s - self.lo : e - self.lo + 1]
        return out

    def entry(self, i, j):
        return LaurentPoly(self.lo, self.coeffs[:, i, j])

    def entries(self):
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def row(self, i):
        return LaurentMatrix(self.lo, self.coeffs[:, i : i + 1, :])

    def __call__(self, z):
        """Evaluate at a single complex point."""
        if self.is_zero():
            return np.zeros(self.shape, dtype=complex)
        z = complex(z)
        powers = z ** np.arange(self.lo, self.hi + 1, dtype=float)
        return np.tensordot(powers, self.coeffs, axes=(0, 0))

    # algebra --------------------------------------------------------------

    def __matmul__(self, other):
        if isinstance(other, LaurentMatrix):
            return lm_mul(self, other)
        return LaurentMatrix(self.lo, self.coeffs @ np.asarray(other, dtype=complex))

    def __rmatmul__(self, other):
        return LaurentMatrix(self.lo, np.asarray(other, dtype=complex) @ self.coeffs)

    def __add__(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        return LaurentMatrix(lo, self.window(lo, hi) + other.window(lo, hi))

    def __neg__(self):
        return LaurentMatrix(self.lo, -self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return LaurentMatrix(self.lo, self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def shift(self, k):
        """Multiply by ``z**k``."""
        return LaurentMatrix(self.lo + k, self.coeffs)

    def adjoint(self):
        return lm_adjoint(self)

    def project(self, lo, hi):
        if self.is_zero() or hi < self.lo or lo > self.hi:
            return LaurentMatrix.zeros(*self.shape)
        return LaurentMatrix(max(lo, self.lo), self.window(max(lo, self.lo), min(hi, self.hi)))

    def max_abs(self):
        return float(np.max(np.abs(self.coeffs))) if not self.is_zero() else 0.0

    def distance(self, other):
        """Max coefficient modulus of ``self - other``."""
        return (self - other).max_abs()

    def __repr__(self):
        return f"LaurentMatrix(shape={self.shape}, powers=[{self.lo}, {self.hi}])"


def lm_mul(A, B):
    if A.cols != B.rows:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    if A.is_zero() or B.is_zero():
        return LaurentMatrix.zeros(A.rows, B.cols)
    KA, KB = A.coeffs.shape[0], B.coeffs.shape[0]
    out = np.zeros((KA + KB - 1, A.rows, B.cols), dtype=complex)
    if KA <= KB:
        for i in range(KA):
            out[i : i + KB] += A.coeffs[i] @ B.coeffs
    else:
        for j in range(KB):
            out[j : j + KA] += A.coeffs @ B.coeffs[j]
    return LaurentMatrix(A.lo + B.lo, out)


def lm_adjoint(A):
    """``A*(1/z) = sum_k A_k^H z**(-k)``."""
    if A.is_zero():
        return LaurentMatrix.zeros(A.cols, A.rows)
    c = np.conj(np.transpose(A.coeffs[::-1], (0, 2, 1)))
    return LaurentMatrix(-A.hi, c)


@dataclass(frozen=True)
class CircleGrid:
    """Matrix values at the ``n`` roots of unity, shape ``(n, rows, cols)``."""

    n: int
    values: np.ndarray


def lm_eval_grid(A, n):
    if not is_power_of_two(n):
        raise GridTooSmall(f"grid size {n} is not a power of two")
    if n < 2 * A.span + 2:
        raise GridTooSmall(f"grid size {n} below 2*span+2 = {2 * A.span + 2}")
    return CircleGrid(n, _to_grid(A.coeffs, A.lo, n))


def lm_from_grid(grid, lo, hi):
    return LaurentMatrix(lo, _from_grid(grid.values, lo, hi))


def lm_unitarity_residual(A, scale=1.0, n=None):
    """max_t ||A(z_t) A(z_t)^H - scale * I||_F over a circle grid."""
    if A.rows != A.cols:
        raise DimensionMismatch("unitarity residual needs a square matrix")
    n = n or grid_size(2 * A.span, minimum=64)
    vals = _to_grid(A.coeffs, A.lo, n)
    P = vals @ np.conj(np.transpose(vals, (0, 2, 1)))
    P -= scale * np.eye(A.rows)
    return float(np.max(np.linalg.norm(P, axis=(1, 2))))


def grid_max_norm(A, n=None):
    """max_t ||A(z_t)||_F over a circle grid."""
    if A.is_zero():
        return 0.0
    n = n or grid_size(A.span, minimum=64)
    return float(np.max(np.linalg.norm(_to_grid(A.coeffs, A.lo, n), axis=(1, 2))))


def lm_det_monomial(A, tol=1e-8):
    """Return ``(c, d)`` with ``det A(z) = c z**d``.

    The determinant is sampled on a circle grid large enough to hold its
    full power span and its coefficients are recovered by FFT.
    """
    if A.rows != A.cols:
        raise DimensionMismatch("determinant needs a square matrix")
    m = A.rows
    if A.is_zero():
        raise SingularInput("zero matrix")
    dlo, dhi = m * A.lo, m * A.hi
    n = grid_size(dhi - dlo)
    vals = np.linalg.det(_to_grid(A.coeffs, A.lo, n))
    if np.max(np.abs(vals)) < tol:
        raise SingularInput("determinant vanishes on the circle")
    coeffs = _from_grid(vals, dlo, dhi)
    mags = np.abs(coeffs)
    i = int(np.argmax(mags))
    c = complex(coeffs[i])
    rest = np.delete(mags, i)
    if rest.size and rest.max() > tol * abs(c):
        raise NotMonomial(
            f"second coefficient {rest.max():.3e} exceeds {tol:g} * |c| = {tol * abs(c):.3e}"
        )
    return c, dlo + i
