"""Scaling functions, wavelet functions and truncated frame expansions.

Functions live on the m-adic grid of step ``h = m**-level``.  Entry ``i`` of
``FunctionSamples.values`` is the average of the function over the cell
``[(offset + i) h, (offset + i + 1) h)``.  Working with cell averages makes one
cascade step exact: the refined average of a cell is a fixed combination of
the averages of ``m`` cells one level up, so no interpolation error enters and
the integral ``h * sum(values)`` is carried over unchanged.

Quadrature is the midpoint rule on the same grid.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import DimensionMismatch


@dataclass(frozen=True)
class CascadeInfo:
    iterations: int
    residual: float
    converged: bool
    seconds: float


@dataclass(frozen=True, eq=False)
class FunctionSamples:
    m: int
    level: int
    offset: int
    values: np.ndarray
    info: Optional[CascadeInfo] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=complex).reshape(-1))

    @property
    def step(self):
        return float(self.m) ** -self.level

    @property
    def start(self):
        return Fraction(self.offset, self.m**self.level)

    @property
    def end(self):
        return self.offset + len(self.values)

    def points(self):
        """Cell midpoints."""
        return (self.offset + np.arange(len(self.values)) + 0.5) * self.step

    def window(self, lo, hi):
        out = np.zeros(hi - lo, dtype=complex)
        s, e = max(lo, self.offset), min(hi, self.end)
        if s < e:
            out[s - lo : e - lo] = self.values[s - self.offset : e - self.offset]
        return out

    def integral(self):
        return complex(np.sum(self.values) * self.step)

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.step))

    def inner(self, other):
        """Midpoint-rule ``<self, other>``, conjugate-linear in ``other``."""
        self._check(other)
        lo, hi = max(self.offset, other.offset), min(self.end, other.end)
        if hi <= lo:
            return 0j
        return complex(np.vdot(other.window(lo, hi), self.window(lo, hi)) * self.step)

    def sup_outside(self, a, b):
        """Largest ``|value|`` on cells not contained in ``[a, b]``."""
        M = self.m**self.level
        idx = self.offset + np.arange(len(self.values))
        inside = (idx >= math.floor(a * M)) & (idx + 1 <= math.ceil(b * M))
        out = np.abs(self.values[~inside])
        return float(out.max()) if out.size else 0.0

    def _check(self, other):
        if (self.m, self.level) != (other.m, other.level):
            raise DimensionMismatch("samples live on different grids")


def support_bound(W):
    """Right end of the interval ``[0, X]`` that holds every scaling function."""
    return (W.genus - 1) * W.m / (W.m - 1) + 1


def default_level(W, points=1024):
    X = support_bound(W)
    L = 0
    while X * W.m**L < points:
        L += 1
    return L


def _gi(W, level, pad):
    # global index range covering [-pad, X + pad], aligned to multiples of m
    M = W.m**level
    lo = -pad * M
    hi = math.ceil((support_bound(W) + pad) * M)
    hi += (-hi) % W.m
    return lo, hi


def _refine(base, row, m, level, lo):
    """Cell averages of ``sum_k row[k] f(m x - k)`` on the grid of ``base``."""
    D = m ** (level - 1)
    R = base.reshape(-1, m).sum(axis=1) / m  # block u covers cells m u .. m u + m-1
    ulo = lo // m
    out = np.zeros_like(base)
    n = len(base)
    for k, a in enumerate(row):
        if a == 0:
            continue
        # out[i] += a R[i - k D]  (global indices)
        s = k * D
        src_lo = lo - s - ulo
        i0 = max(0, -src_lo)
        i1 = min(n, len(R) - src_lo)
        if i0 < i1:
            out[i0:i1] += a * R[src_lo + i0 : src_lo + i1]
    return out


def scaling_function(W, L=None, maxiter=50, tol=1e-6, pad=1):
    """Solve ``phi(x) = sum_k a0_k phi(m x - k)`` by fixed-point iteration.

    Parameters
    ----------
    W : WaveletMatrix
    L : int, optional
        Grid level; defaults to the smallest with 1024 cells over the
        support.
    maxiter, tol
        The iteration starts from the indicator of ``[0, 1)`` and stops once
        the sup-norm change of one step is at most ``tol``.
    pad : int
        Whole units of zero grid kept on both sides of ``[0, X]``.

    Returns
    -------
    FunctionSamples
        Carries a ``CascadeInfo``.  Running out of iterations is reported
        there rather than raised.
    """
    m = W.m
    L = default_level(W) if L is None else L
    if L < 1:
        raise ValueError("level must be at least 1")
    t0 = time.perf_counter()
    lo, hi = _gi(W, L, pad)
    M = m**L
    phi = np.zeros(hi - lo, dtype=complex)
    phi[-lo : -lo + M] = 1.0
    row = W.coeffs[0]
    change, it = np.inf, 0
    while it < maxiter:
        new = _refine(phi, row, m, L, lo)
        change = float(np.max(np.abs(new - phi)))
        phi = new
        it += 1
        if change <= tol:
            break
    info = CascadeInfo(it, change, change <= tol, time.perf_counter() - t0)
    return FunctionSamples(m, L, lo, phi, info)


def wavelet_functions(W, ph):
    """``psi^r(x) = sum_k a^r_k phi(m x - k)`` for ``r = 1..m-1``."""
    if ph.m != W.m:
        raise DimensionMismatch("rank of samples and wavelet matrix differ")
    lo, hi = _gi(W, ph.level, 1)
    lo = min(lo, ph.offset - (ph.offset % W.m))
    hi = max(hi, ph.end + (-ph.end) % W.m)
    base = ph.window(lo, hi)
    return [
        FunctionSamples(W.m, ph.level, lo, _refine(base, W.coeffs[r], W.m, ph.level, lo))
        for r in range(1, W.m)
    ]


def _coarsen(fs, j):
    """Averages of ``fs`` over cells of level ``level - j``; offset must align."""
    b = fs.m**j
    lo = fs.offset - (fs.offset % b)
    hi = fs.end + (-fs.end) % b
    return lo // b, fs.window(lo, hi).reshape(-1, b).mean(axis=1)


def dilate(fs, j, k):
    """Samples of ``m**(j/2) f(m**j x - k)`` on the grid of ``fs``."""
    if j > fs.level:
        raise ValueError("dilation finer than the grid")
    qlo, B = _coarsen(fs, j)
    s = fs.m ** (fs.level - j)
    return FunctionSamples(fs.m, fs.level, qlo + k * s, B * fs.m ** (j / 2))


def _expand(f, g, j, coarse=None):
    """Add ``sum_k <f, g_jk> g_jk`` over every ``k`` where ``g_jk`` meets ``f``."""
    m, L = f.m, f.level
    s = m ** (L - j)
    qlo, B = coarse if coarse is not None else _coarsen(g, j)
    B = B * m ** (j / 2)
    h = f.step
    n = len(B)
    # g_jk occupies global indices [qlo + k s, qlo + k s + n)
    kmin = -((qlo + n - 1 - f.offset) // s)
    kmax = (f.end - 1 - qlo) // s
    out = np.zeros(len(f.values), dtype=complex)
    for k in range(kmin, kmax + 1):
        a = qlo + k * s
        lo, hi = max(a, f.offset), min(a + n, f.end)
        if lo >= hi:
            continue
        seg = B[lo - a : hi - a]
        c = np.vdot(seg, f.values[lo - f.offset : hi - f.offset]) * h
        out[lo - f.offset : hi - f.offset] += c * seg
    return out


def frame_reconstruct(f, W, J, phi=None, maxiter=200, tol=1e-13):
    """Truncated expansion over ``phi_0k`` and ``psi^r_jk``, ``0 <= j <= J``.

    Coefficients are midpoint-rule inner products on the grid of ``f``.  The
    sum is restricted to the cells of ``f``; terms are unchanged by this since
    the reconstruction is only compared there.

    Returns
    -------
    (FunctionSamples, float)
        The reconstruction and its relative L2 error (0 for ``f = 0``).
    """
    if f.m != W.m:
        raise DimensionMismatch("rank of samples and wavelet matrix differ")
    if J > f.level:
        raise ValueError("J exceeds the grid level")
    if phi is None:
        phi = scaling_function(W, L=f.level, maxiter=maxiter, tol=tol)
    psis = wavelet_functions(W, phi)
    rec = _expand(f, phi, 0)
    for j in range(J + 1):
        for psi in psis:
            rec = rec + _expand(f, psi, j)
    out = FunctionSamples(f.m, f.level, f.offset, rec)
    nf = f.norm()
    err = float(np.sqrt(np.sum(np.abs(rec - f.values) ** 2) * f.step))
    return out, (err / nf if nf > 0 else err)


def sample_function(fn, m, level, a, b):
    """Midpoint samples of ``fn`` on cells covering ``[a, b]``."""
    M = m**level
    lo, hi = math.floor(a * M), math.ceil(b * M)
    x = (np.arange(lo, hi) + 0.5) / M
    return FunctionSamples(m, level, lo, fn(x))
