"""Wavelet matrix expansion of discrete signals.

Analysis ``c^r_k = (1/m) sum_n f(n) conj(a^r_{mk+n})`` and synthesis
``f(n) = sum_{r,k} c^r_k a^r_{mk+n}``.  Signals are zero outside their stored
window; every sum is finite and no boundary extension is applied.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class Signal:
    offset: int
    samples: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=complex).reshape(-1))

    @property
    def end(self):
        return self.offset + len(self.samples)

    def window(self, lo, hi):
        """Samples for ``n`` in ``[lo, hi)``, zero-filled."""
        out = np.zeros(hi - lo, dtype=complex)
        s, e = max(lo, self.offset), min(hi, self.end)
        if s < e:
            out[s - lo : e - lo] = self.samples[s - self.offset : e - self.offset]
        return out

    def energy(self):
        return float(np.sum(np.abs(self.samples) ** 2))

    def distance(self, other):
        lo = min(self.offset, other.offset)
        hi = max(self.end, other.end)
        if hi <= lo:
            return 0.0
        return float(np.max(np.abs(self.window(lo, hi) - other.window(lo, hi))))

    def shifted(self, k):
        return Signal(self.offset + k, self.samples)


@dataclass(frozen=True, eq=False)
class SubbandCoeffs:
    """Coefficients ``c^r_k``; subband ``r`` starts at ``k = offsets[r]``."""

    m: int
    genus: int
    offsets: tuple
    coeffs: tuple

    def energy(self):
        return float(sum(np.sum(np.abs(c) ** 2) for c in self.coeffs))

    def rows(self):
        for r, (k0, c) in enumerate(zip(self.offsets, self.coeffs)):
            for i, v in enumerate(c):
                yield r, k0 + i, complex(v)


def _k_range(offset, length, m, N):
    # k with some n in [offset, offset+length) and 0 <= mk + n < N
    kmin = -((offset + length - 1) // m)
    kmax = (N - 1 - offset) // m
    return kmin, kmax


def analyze(f, W):
    m, N = W.m, W.coeffs.shape[1]
    if len(f.samples) == 0:
        return SubbandCoeffs(m, W.genus, (0,) * m, tuple(np.zeros((m, 0), dtype=complex)))
    kmin, kmax = _k_range(f.offset, len(f.samples), m, N)
    ks = np.arange(kmin, kmax + 1)
    # F[k, j] = f(j - mk)
    idx = np.arange(N)[None, :] - m * ks[:, None] - f.offset
    ok = (idx >= 0) & (idx < len(f.samples))
    F = np.where(ok, f.samples[np.clip(idx, 0, len(f.samples) - 1)], 0)
    c = (np.conj(W.coeffs) @ F.T) / m
    return SubbandCoeffs(m, W.genus, (kmin,) * m, tuple(c))


def synthesize_signal(c, W):
    m, N = W.m, W.coeffs.shape[1]
    lo = min(k0 for k0 in c.offsets)
    hi = max(k0 + len(cr) for k0, cr in zip(c.offsets, c.coeffs))
    if hi <= lo:
        return Signal(0, [])
    C = np.zeros((m, hi - lo), dtype=complex)
    for r, (k0, cr) in enumerate(zip(c.offsets, c.coeffs)):
        C[r, k0 - lo : k0 - lo + len(cr)] = cr
    contrib = C.T @ W.coeffs  # contrib[k, j] lands at n = j - mk
    ks = np.arange(lo, hi)
    n_lo = -m * (hi - 1)
    n_hi = N - 1 - m * lo
    out = np.zeros(n_hi - n_lo + 1, dtype=complex)
    pos = np.arange(N)[None, :] - m * ks[:, None] - n_lo
    np.add.at(out, pos.ravel(), contrib.ravel())
    return Signal(n_lo, out)
