"""Time the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from cmclab import _kernels_py, kernels

try:
    from cmclab import _kernels as compiled
except ImportError:
    compiled = None


def inputs(n, seed=0):
    rng = np.random.default_rng(seed)
    s = rng.uniform(0.01, 0.1, n)
    Ps = -0.5 + 0.01 * rng.standard_normal(n)
    Pss = 0.01 * rng.standard_normal(n)
    grad = 0.1 * rng.standard_normal((n, 2))
    grad_s = 0.1 * rng.standard_normal((n, 2))
    hess = 0.1 * rng.standard_normal((n, 2, 2))
    hess = 0.5 * (hess + hess.transpose(0, 2, 1))
    return s, 1.0, Ps, Pss, grad, grad_s, hess


def bench(label, fn, repeat):
    t = min(timeit.repeat(fn, number=1, repeat=repeat))
    print(f"  {label:<10s} {t * 1e3:9.3f} ms")
    return t


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"active backend: {kernels.BACKEND}")
    if compiled is None:
        print("compiled extension not built; only the fallback is timed")
    x = np.cos(np.linspace(0.1, 3.0, 2000))
    for lmax in (16, 48):
        print(f"legendre_table, {x.size} points, l_max={lmax}")
        tp = bench("python", lambda: _kernels_py.legendre_table(x, lmax), args.repeat)
        if compiled is not None:
            tc = bench("compiled", lambda: compiled.legendre_table(x, lmax), args.repeat)
            print(f"  speedup    {tp / tc:9.2f}x")
    for n in (2000, 50000):
        a = inputs(n)
        print(f"null_frame_geometry, {n} nodes")
        tp = bench("python", lambda: _kernels_py.null_frame_geometry(*a), args.repeat)
        if compiled is not None:
            tc = bench("compiled", lambda: compiled.null_frame_geometry(*a), args.repeat)
            print(f"  speedup    {tp / tc:9.2f}x")


if __name__ == "__main__":
    main()
