"""Benchmark the compiled kernels against the pure-numpy fallbacks.

Runs the two hot scan loops (weight histogram, exclusion scan) on a
length-24 free Type II source under both values of Z2K_BACKEND, checks
that the results agree, and prints the timings.  Usage::

    python3 -m z2kcodes.bench [--repeat N]
"""

import argparse
import os
import time

import numpy as np

from .backend import ENV_VAR
from .model import GeneratorMatrix, residue_code, standardize
from .rings import Z8
from .search import algorithmC_exclusions
from .weights import weight_distribution

# Same length-24 source the tests scan; 4^12 residue words per pass.
_SOURCE = [[int(c) for c in row] for row in
           """100000000000725015124035
              010000000000757152636472
              001000000000312326307633
              000100000000316607310710
              000010000000110217651003
              000001000000451425361103
              000000100000445502132113
              000000010000563103133222
              000000001000614336113300
              000000000100421033211330
              000000000010363110001121
              000000000001230333200133""".split()]


def _timed(backend: str, fn, repeat: int):
    previous = os.environ.get(ENV_VAR)
    os.environ[ENV_VAR] = backend
    try:
        fn()  # warm-up: first numba call pays compilation
        best, result = None, None
        for _ in range(repeat):
            t0 = time.perf_counter()
            result = fn()
            dt = time.perf_counter() - t0
            best = dt if best is None else min(best, dt)
        return best, result
    finally:
        if previous is None:
            del os.environ[ENV_VAR]
        else:
            os.environ[ENV_VAR] = previous


def run(repeat: int = 1) -> int:
    sf = standardize(GeneratorMatrix(Z8, _SOURCE))
    residue = residue_code(sf, 2)
    rows = []
    checks = []

    def hist():
        return weight_distribution(residue, kind="euclidean")

    def scan():
        return algorithmC_exclusions(sf)

    for label, fn in (("weight histogram (4^12 words)", hist),
                      ("exclusion scan (4^12 words)", scan)):
        t_nb, r_nb = _timed("numba", fn, repeat)
        t_np, r_np = _timed("numpy", fn, repeat)
        if label.startswith("weight"):
            same = r_nb.counts == r_np.counts
        else:
            same = (np.array_equal(r_nb.excluded_masks(), r_np.excluded_masks())
                    and r_nb.n_weight16 == r_np.n_weight16)
        checks.append(same)
        rows.append((label, t_nb, t_np))

    width = max(len(r[0]) for r in rows)
    print("%-*s  %10s  %10s  %8s  %s" % (width, "kernel", "numba [s]",
                                         "numpy [s]", "speedup", "agree"))
    for (label, t_nb, t_np), same in zip(rows, checks):
        print("%-*s  %10.3f  %10.3f  %7.1fx  %s"
              % (width, label, t_nb, t_np, t_np / t_nb, same))
    return 0 if all(checks) else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="z2kcodes.bench",
        description="compare the numba kernels with the numpy fallbacks")
    parser.add_argument("--repeat", type=int, default=1,
                        help="timed repetitions per kernel (best is kept)")
    args = parser.parse_args(argv)
    return run(max(1, args.repeat))


if __name__ == "__main__":
    raise SystemExit(main())
