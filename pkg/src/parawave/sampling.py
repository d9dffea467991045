"""Seeded random Wiener-Hopf coordinates.

The generator is numpy's PCG64 seeded with the given 64-bit integer.  For
``(m-1) x g`` coefficients two arrays of uniform doubles ``u`` then ``v`` are
drawn in C order and each coefficient is ``scale * sqrt(u) * exp(2 pi i v)``,
i.e. uniform on the disk of radius ``scale``.  PCG64 and
``Generator.random`` are bit-exact across platforms.
"""

import numpy as np

from .parametrization import PhiParams


def make_rng(seed):
    return np.random.Generator(np.random.PCG64(int(seed) & (2**64 - 1)))


def random_phi(m, g, seed=0, scale=1.0, rng=None):
    if scale < 0:
        raise ValueError("scale must be non-negative")
    rng = rng if rng is not None else make_rng(seed)
    u = rng.random((m - 1, g))
    v = rng.random((m - 1, g))
    return PhiParams(m, g, scale * np.sqrt(u) * np.exp(2j * np.pi * v))


def task_seeds(seed, count):
    """Independent per-task seeds derived from one root seed."""
    ss = np.random.SeedSequence(int(seed) & (2**64 - 1))
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in ss.spawn(count)]
