"""Bauer's method: spectral factor from the block Toeplitz Cholesky factor.

Used as an independent check of the Wilson iteration.  The block Toeplitz
matrix ``T[i, j] = S_{i-j}`` of a symbol with powers in ``[-g, g]`` is block
banded, so its Cholesky factor is banded too and only the last ``g + 1``
block rows need to be kept.  The last block row of the factor converges to
``(A_g, ..., A_1, A_0)`` with ``A(0)`` lower triangular and positive on the
diagonal.
"""

import numpy as np
import scipy.linalg

from .laurent import LaurentMatrix


def bauer_factor(S, g, nblocks=None):
    m = S.rows
    N = nblocks or 64 * (g + 1)
    Sk = [S.coeff(q) for q in range(g + 1)]  # S_q for q = 0..g
    # history[q] holds block row i-q as an array L[i-q][i-q-r], r = 0..g
    history = []
    row = None
    for i in range(N):
        row = np.zeros((g + 1, m, m), dtype=complex)
        for q in range(min(g, i), 0, -1):
            j = i - q
            prev = history[-q]
            acc = Sk[q].copy()
            for l in range(max(0, i - g), j):
                acc -= row[i - l] @ prev[j - l].conj().T
            # L[i][j] = acc L[j][j]^{-H}
            row[q] = scipy.linalg.solve_triangular(
                prev[0], acc.conj().T, lower=True
            ).conj().T
        acc = Sk[0].copy()
        for r in range(1, min(g, i) + 1):
            acc -= row[r] @ row[r].conj().T
        row[0] = np.linalg.cholesky((acc + acc.conj().T) / 2)
        history.append(row)
        if len(history) > g:
            history.pop(0)
    return LaurentMatrix(0, row)


def align_right(A, B):
    """Return ``A V`` with ``V`` the unitary minimizing ``||A V - B||``.

    Orthogonal Procrustes over all coefficient matrices stacked vertically.
    """
    lo = min(A.lo, B.lo)
    hi = max(A.hi, B.hi)
    a = A.window(lo, hi).reshape(-1, A.cols)
    b = B.window(lo, hi).reshape(-1, B.cols)
    u, _, vh = np.linalg.svd(a.conj().T @ b)
    return A @ (u @ vh)
