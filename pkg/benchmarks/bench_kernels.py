"""Compare the compiled kernels with the NumPy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import math
import timeit

import numpy as np

from snextremes._backend import get_kernels
from snextremes.skew_normal import log_survival


def cases(name):
    kern = get_kernels(name)
    h = np.linspace(0.0, 8.0, 10_000)
    hi = np.full_like(h, math.atan(2.0))
    x = np.linspace(6.0, 40.0, 10_000)
    span = 100.0 / 2.0
    tail_hi = span / (x + np.sqrt(x * x + span))
    grid = np.linspace(-4.0, 30.0, 4096)
    d = 1 / math.sqrt(2)
    return {
        "owen_scaled 1e4 x 32 panels": lambda: kern.owen_scaled(h, hi, 32),
        "tail_scaled 1e4 x 32 panels": lambda: kern.tail_scaled(x, 1.0, tail_hi, 32),
        "log_survival lambda=-1, 4096 pts": lambda: log_survival(-1.0, grid, backend=name),
        "block_max n=1e6": lambda: kern.block_max(np.random.PCG64(1), 10**6, d, d),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = ["python"]
    try:
        get_kernels("compiled")
        backends.append("compiled")
    except ImportError:
        print("compiled extension not built; timing the fallback only")
    results = {b: {k: min(timeit.repeat(f, number=1, repeat=args.repeat))
                   for k, f in cases(b).items()} for b in backends}
    names = list(results["python"])
    print(f"{'case':36s} {'python ms':>10s} {'compiled ms':>12s} {'speedup':>8s}")
    for k in names:
        py = results["python"][k] * 1e3
        if "compiled" in results:
            c = results["compiled"][k] * 1e3
            print(f"{k:36s} {py:10.2f} {c:12.2f} {py / c:8.1f}")
        else:
            print(f"{k:36s} {py:10.2f}")


if __name__ == "__main__":
    main()
