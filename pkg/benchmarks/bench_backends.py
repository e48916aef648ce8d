"""Time the compiled kernels against their uncompiled sources.

Usage: python3 benchmarks/bench_backends.py [--scan-hi N] [--blocks B]
       [--dense N] [--repeat R]

py_func exposes exactly the code the COLLATZ_LAB_NO_NUMBA=1 fallback
runs, so the "python" column is the fallback's cost; running the whole
script under that flag instead collapses both columns to the fallback.
Defaults are sized so the uncompiled column finishes in seconds.
"""

import argparse
import time

from collatz_lab import _kernels
from collatz_lab._kernels import py_func
from collatz_lab.sieve import build_table


def best_of(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="compare compiled and uncompiled kernel timings"
    )
    parser.add_argument("--scan-hi", type=int, default=400_000,
                        help="upper end of the per-start scan")
    parser.add_argument("--blocks", type=int, default=80,
                        help="width-16 residue blocks to drive")
    parser.add_argument("--dense", type=int, default=200_000,
                        help="starts in the plain-stepping range")
    parser.add_argument("--repeat", type=int, default=3,
                        help="timed repetitions, best kept")
    args = parser.parse_args(argv)

    table = build_table(16)
    floor = 10**6  # dense range sits above its floor, as the high edge does
    cases = [
        ("scan_sigma_peak", _kernels.scan_sigma_peak,
         (args.scan_hi, 10**6)),
        ("verify_dense", _kernels.verify_dense,
         (floor, floor + args.dense, floor, 10**6)),
        ("verify_span", _kernels.verify_span,
         (1, 1 + args.blocks, 16, 1, (1 + args.blocks) << 16, table.survivors,
          table.c, table.s, table.pow3, table.qmax, 10_000)),
    ]

    print("backend chosen at import: %s"
          % ("numba" if _kernels.USING_NUMBA else "python"))
    print("%-18s %12s %12s %9s" % ("kernel", "compiled", "python", "speedup"))
    for name, fn, call in cases:
        plain = py_func(fn)
        fn(*call)  # compile (or warm) outside the timed region
        t_fast = best_of(fn, call, args.repeat)
        t_slow = best_of(plain, call, args.repeat)
        print("%-18s %11.4fs %11.4fs %8.1fx"
              % (name, t_fast, t_slow, t_slow / t_fast))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
