"""Command-line interface.

Exit codes: 0 success, 1 a check failed or the computation was refused,
2 malformed input or usage.  Diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import os
import platform
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__
from . import io as pio
from .cascade import scaling_function, support_bound, wavelet_functions
from .errors import ParawaveError
from .parametrization import phi_to_wavelet, wavelet_to_phi
from .primitive import factor_wavelet_matrix
from .sampling import random_phi, task_seeds
from .transform import analyze, synthesize_signal
from .wavelet_matrix import wm_validate

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    m: Optional[int] = None
    g: Optional[int] = None
    seed: Optional[int] = None
    tol: float = 1e-9
    input: Optional[str] = None
    output: Optional[str] = None
    fmt: str = "json"

    def __post_init__(self):
        if self.m is not None and self.m < 2:
            raise pio.MalformedInput("--m must be at least 2")
        if self.g is not None and self.g < 0:
            raise pio.MalformedInput("--g must be non-negative")


def thread_count():
    raw = os.environ.get("PARAWAVE_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise pio.MalformedInput(f"PARAWAVE_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise pio.MalformedInput("PARAWAVE_THREADS must be non-negative")
    return n or (os.cpu_count() or 1)


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _seed(s):
    try:
        v = int(s, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {s!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def _gen_one(args):
    m, g, seed, scale, tol = args
    W = phi_to_wavelet(random_phi(m, g, seed=seed, scale=scale))
    return W, wm_validate(W, tol)


def _gen_record(W, rep, p=None):
    d = pio.wm_to_json(W)
    if p is not None:
        d["phi"] = pio.phi_to_json(p)["phi"]
    d["validation"] = rep.to_dict()
    return d


def cmd_gen(a):
    if a.phi is not None:
        if a.count != 1:
            raise pio.MalformedInput("--count cannot be combined with --phi")
        p = pio.phi_from_json(pio.read_json(a.phi))
        if (a.m is not None and a.m != p.m) or (a.g is not None and a.g != p.g):
            raise pio.MalformedInput("--m/--g disagree with the coordinate file")
        W = phi_to_wavelet(p)
        rep = wm_validate(W, a.tol)
        _write(a.out, pio.dumps(_gen_record(W, rep, p)))
        return EXIT_OK if rep.passed else EXIT_FAIL
    if a.m is None or a.g is None:
        raise pio.MalformedInput("gen needs --m and --g (or --phi)")
    RunConfig("gen", a.m, a.g, a.seed, a.tol)
    if a.count < 1:
        raise pio.MalformedInput("--count must be positive")
    if a.count == 1:
        p = random_phi(a.m, a.g, seed=a.seed, scale=a.scale)
        W = phi_to_wavelet(p)
        rep = wm_validate(W, a.tol)
        _write(a.out, pio.dumps(_gen_record(W, rep, p)))
        return EXIT_OK if rep.passed else EXIT_FAIL
    seeds = task_seeds(a.seed, a.count)
    jobs = [(a.m, a.g, s, a.scale, a.tol) for s in seeds]
    workers = min(thread_count(), a.count)
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_gen_one, jobs))
    else:
        results = [_gen_one(j) for j in jobs]
    recs = []
    for s, (W, rep) in zip(seeds, results):
        d = _gen_record(W, rep, random_phi(a.m, a.g, seed=s, scale=a.scale))
        d["seed"] = s
        recs.append(d)
    _write(a.out, pio.dumps(recs))
    return EXIT_OK if all(rep.passed for _, rep in results) else EXIT_FAIL


def _emit(a, items, was_list):
    _write(a.out, pio.dumps(items if was_list else items[0]))


def cmd_coords(a):
    Ws, was_list = pio.read_wavelet_matrices(a.input)
    items = [pio.phi_to_json(wavelet_to_phi(W, undo_prefix=not a.no_undo_prefix)) for W in Ws]
    _emit(a, items, was_list)
    return EXIT_OK


def cmd_factor(a):
    Ws, was_list = pio.read_wavelet_matrices(a.input)
    items = []
    for W in Ws:
        f = factor_wavelet_matrix(W, tol=a.tol)
        items.append(f.to_dict())
    _emit(a, items, was_list)
    return EXIT_OK


def cmd_verify(a):
    Ws, was_list = pio.read_wavelet_matrices(a.input)
    reps = [wm_validate(W, a.tol) for W in Ws]
    _emit(a, [r.to_dict() for r in reps], was_list)
    return EXIT_OK if all(r.passed for r in reps) else EXIT_FAIL


def _single_wm(path):
    Ws, was_list = pio.read_wavelet_matrices(path)
    if was_list:
        raise pio.MalformedInput(f"{path}: expected a single wavelet matrix")
    return Ws[0]


def cmd_transform(a):
    W = _single_wm(a.wm)
    text = pio._read_text(a.signal)
    if a.direction == "analyze":
        f = pio.signal_from_csv(text, a.signal)
        _write(a.out, pio.coeffs_to_csv(analyze(f, W)))
    else:
        c = pio.coeffs_from_csv(text, W.m, W.genus, a.signal)
        _write(a.out, pio.signal_to_csv(synthesize_signal(c, W)))
    return EXIT_OK


def cmd_cascade(a):
    W = _single_wm(a.wm)
    if a.level is not None and a.level < 1:
        raise pio.MalformedInput("--level must be at least 1")
    ph = scaling_function(W, L=a.level, maxiter=a.maxiter, tol=a.tol)
    psis = wavelet_functions(W, ph) if a.wavelets else []
    _write(a.out, pio.samples_to_csv(ph, psis))
    info = {
        "level": ph.level,
        "iterations": ph.info.iterations,
        "residual": ph.info.residual,
        "converged": ph.info.converged,
        "integral": pio._pair(ph.integral()),
        "support_bound": support_bound(W),
        "leak": ph.sup_outside(0, support_bound(W)),
    }
    sys.stderr.write(pio.dumps(info))
    if not ph.info.converged:
        sys.stderr.write("warning: cascade did not reach the requested tolerance\n")
    return EXIT_OK


BENCH_THRESHOLD = 5.0


def run_bench(m, g, reps, seed=0):
    times = []
    for s in task_seeds(seed, reps):
        p = random_phi(m, g, seed=s)
        t0 = time.perf_counter()
        phi_to_wavelet(p)
        times.append(time.perf_counter() - t0)
    return times


def cmd_bench(a):
    RunConfig("bench", a.m, a.g, a.seed)
    if a.reps < 1:
        raise pio.MalformedInput("--reps must be positive")
    times = run_bench(a.m, a.g, a.reps, a.seed)
    med = statistics.median(times)
    out = {
        "m": a.m,
        "g": a.g,
        "reps": a.reps,
        "median_seconds": med,
        "min_seconds": min(times),
        "max_seconds": max(times),
        "threshold_seconds": BENCH_THRESHOLD,
        "within_threshold": med <= BENCH_THRESHOLD,
        "machine": {
            "platform": platform.platform(),
            "processor": platform.processor() or platform.machine(),
            "python": platform.python_version(),
            "numpy": np.__version__,
            "cpu_count": os.cpu_count(),
        },
    }
    _write(a.out, pio.dumps(out))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser():
    p = _Parser(prog="parawave", description="Compact wavelet matrices from Wiener-Hopf coordinates.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("gen", help="build a wavelet matrix from coordinates")
    s.add_argument("--m", type=int)
    s.add_argument("--g", type=int)
    src = s.add_mutually_exclusive_group()
    src.add_argument("--seed", type=_seed, default=0)
    src.add_argument("--phi", metavar="FILE")
    s.add_argument("--scale", type=float, default=1.0)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--out", metavar="FILE")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("coords", help="coordinates of a wavelet matrix")
    s.add_argument("--in", dest="input", required=True, metavar="FILE")
    s.add_argument("--out", metavar="FILE")
    s.add_argument("--no-undo-prefix", action="store_true")
    s.set_defaults(func=cmd_coords)

    s = sub.add_parser("factor", help="primitive factorization")
    s.add_argument("--in", dest="input", required=True, metavar="FILE")
    s.add_argument("--out", metavar="FILE")
    s.add_argument("--tol", type=float, default=1e-9)
    s.set_defaults(func=cmd_factor)

    s = sub.add_parser("verify", help="check the wavelet matrix conditions")
    s.add_argument("--in", dest="input", required=True, metavar="FILE")
    s.add_argument("--out", metavar="FILE")
    s.add_argument("--tol", type=float, default=1e-9)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("transform", help="expand a signal or resynthesize it")
    s.add_argument("direction", choices=["analyze", "synth"])
    s.add_argument("--wm", required=True, metavar="FILE")
    s.add_argument("--signal", "--coeffs", dest="signal", required=True, metavar="CSV")
    s.add_argument("--out", metavar="CSV")
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("cascade", help="sample the scaling function")
    s.add_argument("--wm", required=True, metavar="FILE")
    s.add_argument("--level", type=int)
    s.add_argument("--maxiter", type=int, default=50)
    s.add_argument("--tol", type=float, default=1e-6)
    s.add_argument("--wavelets", action="store_true")
    s.add_argument("--out", metavar="CSV")
    s.set_defaults(func=cmd_cascade)

    s = sub.add_parser("bench", help="time one construction")
    s.add_argument("--m", type=int, default=30)
    s.add_argument("--g", type=int, default=50)
    s.add_argument("--reps", type=int, default=10)
    s.add_argument("--seed", type=_seed, default=0)
    s.add_argument("--out", metavar="FILE")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return a.func(a)
    except pio.MalformedInput as exc:
        sys.stderr.write(f"parawave: malformed input: {exc}\n")
        return EXIT_USAGE
    except ParawaveError as exc:
        sys.stderr.write(f"parawave: {type(exc).__name__}: {exc}\n")
        return EXIT_FAIL
    except ValueError as exc:
        sys.stderr.write(f"parawave: invalid input: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
