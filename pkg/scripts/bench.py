"""Time single constructions at a given size and print a summary."""

import argparse
import statistics

from parawave.cli import BENCH_THRESHOLD, run_bench


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=30)
    ap.add_argument("--g", type=int, default=50)
    ap.add_argument("--reps", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    times = run_bench(a.m, a.g, a.reps, a.seed)
    med = statistics.median(times)
    print(f"m={a.m} g={a.g} reps={a.reps}")
    for i, t in enumerate(times):
        print(f"  run {i:2d}: {t:.3f} s")
    print(f"median {med:.3f} s  min {min(times):.3f} s  (gate {BENCH_THRESHOLD:g} s)")


if __name__ == "__main__":
    main()
