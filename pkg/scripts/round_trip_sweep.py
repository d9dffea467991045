"""Coordinates -> wavelet matrix -> coordinates over a grid of sizes.

Prints one row per (m, g): worst coordinate error, worst paraunitarity and
linear residuals, and the wall time per construction.
"""

import argparse
import time

from parawave.laurent import lm_unitarity_residual
from parawave.parametrization import phi_to_wavelet, wavelet_to_phi
from parawave.sampling import random_phi, task_seeds
from parawave.wavelet_matrix import linear_residual, wm_to_polyphase


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, nargs="+", default=[2, 3, 5])
    ap.add_argument("--g", type=int, nargs="+", default=[1, 2, 5])
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--scale", type=float, default=1.0)
    a = ap.parse_args()
    print(f"{'m':>3} {'g':>3} {'coord err':>10} {'paraunit':>10} {'linear':>10} {'ms/build':>9}")
    for m in a.m:
        for g in a.g:
            err = pu = lin = 0.0
            t0 = time.perf_counter()
            for s in task_seeds(a.seed, a.count):
                p = random_phi(m, g, seed=s, scale=a.scale)
                W = phi_to_wavelet(p)
                err = max(err, wavelet_to_phi(W).distance(p))
                pu = max(pu, lm_unitarity_residual(wm_to_polyphase(W), scale=m, n=512))
                lin = max(lin, linear_residual(W))
            ms = 1e3 * (time.perf_counter() - t0) / a.count
            print(f"{m:>3} {g:>3} {err:10.2e} {pu:10.2e} {lin:10.2e} {ms:9.2f}")


if __name__ == "__main__":
    main()
