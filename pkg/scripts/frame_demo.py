"""Truncated frame expansion of a Gaussian bump, error against J.

Optionally writes the scaling and wavelet function samples as CSV.
"""

import argparse

import numpy as np

from parawave.cascade import frame_reconstruct, sample_function, scaling_function, wavelet_functions
from parawave.io import read_wavelet_matrices, samples_to_csv
from parawave.wavelet_matrix import WaveletMatrix

SQ3 = np.sqrt(3.0)
D4 = np.array([[1 + SQ3, 3 + SQ3, 3 - SQ3, 1 - SQ3], [1 - SQ3, -(3 - SQ3), 3 + SQ3, -(1 + SQ3)]]) / 4


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--wm", help="wavelet matrix JSON (default: D4)")
    ap.add_argument("--level", type=int, default=12)
    ap.add_argument("--J", type=int, default=6)
    ap.add_argument("--width", type=float, default=0.5, help="Gaussian standard deviation")
    ap.add_argument("--csv", help="write phi and psi samples here")
    a = ap.parse_args()
    W = read_wavelet_matrices(a.wm)[0][0] if a.wm else WaveletMatrix.from_rows(D4)
    phi = scaling_function(W, L=a.level, tol=1e-13, maxiter=200)
    print(f"cascade: {phi.info.iterations} iterations, last change {phi.info.residual:.2e}")
    f = sample_function(lambda x: np.exp(-0.5 * (x / a.width) ** 2), W.m, a.level, -6 * a.width, 6 * a.width)
    for J in range(a.J + 1):
        _, err = frame_reconstruct(f, W, J, phi=phi)
        print(f"J={J}: relative L2 error {err:.3e}")
    if a.csv:
        with open(a.csv, "w", encoding="utf-8") as fh:
            fh.write(samples_to_csv(phi, wavelet_functions(W, phi)))


if __name__ == "__main__":
    main()
