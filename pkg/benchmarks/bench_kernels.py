"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each workload is sized like its use in the acceptance suite. Reports the
best-of-N wall time per backend and the speedup.
"""
import argparse
import math
import timeit

import numpy as np

from cyclophase import _kernels_py as py

try:
    from cyclophase import _kernels as cy
except ImportError:
    cy = None

WORKLOADS = {
    "residue_power_sums q=12 N=1e6": lambda k: k.residue_power_sums(12, 2.0, 10**6),
    "circle_orbit n=1e5": lambda k: k.circle_orbit(0.0, 2 * math.pi * 0.37, np.full(100_000, 0.8)),
    "circle_trace n=2**14": lambda k: k.circle_trace(0.0, math.pi, np.full(2**14, 0.5)),
    "circle_grid 1001 x 1e4": lambda k: k.circle_grid(0.0, 2 * math.pi * np.linspace(0, 1, 1001), 0.8, 10_000),
    "adler_rk4 1e5 steps": lambda k: k.adler_rk4(0.0, 2.0, 1.0, 5e-3, 100_000, 1),
}


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if cy is None:
        print("compiled extension not built; timing the Python fallback only")
    print(f"{'workload':32s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s}")
    for name, work in WORKLOADS.items():
        t_py = best(lambda: work(py), args.repeat)
        if cy is None:
            print(f"{name:32s} {t_py:11.4f} {'-':>11s} {'-':>8s}")
            continue
        t_cy = best(lambda: work(cy), args.repeat)
        print(f"{name:32s} {t_py:11.4f} {t_cy:11.4f} {t_py / t_cy:7.1f}x")


if __name__ == "__main__":
    main()
