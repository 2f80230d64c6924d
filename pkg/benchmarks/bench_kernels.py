"""Compare the compiled kernel against the pure-numpy fallback.

Runs the batch determinant table on growing sample sizes with both backends,
reports throughput, and cross-checks that the outputs agree bitwise-closely.

Usage: python benchmarks/bench_kernels.py [--sizes 1000,10000,100000] [--repeat 5]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from vsheet import _kernels
from vsheet._kernels import _fallback
from vsheet.freq import sample_hemisphere

try:
    from vsheet._kernels import _core
except ImportError:
    _core = None


def _time(fn, args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="1000,10000,100000")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--v", type=float, default=2.0)
    ap.add_argument("--fsq", type=float, default=1.0)
    ap.add_argument("--c", type=float, default=1.0)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    print(f"active backend: {_kernels.BACKEND}")
    if _core is None:
        print("compiled kernel not available; timing the fallback only")

    for n in sizes:
        g, d, e = sample_hemisphere(n, args.v, seed=0, gamma_min=1e-6)
        t_py = _time(_fallback.elastic_table, (g, d, e, args.v, args.fsq, args.c),
                     args.repeat)
        line = f"n={n:>8d}  numpy {n / t_py / 1e6:7.2f} Msamp/s ({t_py * 1e3:8.2f} ms)"
        if _core is not None:
            t_cy = _time(_core.elastic_table, (g, d, e, args.v, args.fsq, args.c),
                         args.repeat)
            line += (f"  compiled {n / t_cy / 1e6:7.2f} Msamp/s"
                     f" ({t_cy * 1e3:8.2f} ms)  speedup x{t_py / t_cy:5.2f}")
            a = _fallback.elastic_table(g, d, e, args.v, args.fsq, args.c)
            b = _core.elastic_table(g, d, e, args.v, args.fsq, args.c)
            worst = max(
                float(np.max(np.abs(np.asarray(a[k]) - np.asarray(b[k]))))
                for k in a
            )
            line += f"  max|diff|={worst:.2e}"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
