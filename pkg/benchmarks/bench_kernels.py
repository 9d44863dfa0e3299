"""Compare the compiled and numpy polynomial kernels.

Usage: ``python benchmarks/bench_kernels.py [--points 4096] [--repeat 5]``
"""
import argparse
import timeit

import numpy as np

from projcurv.kernels import available_backends
from projcurv.polynomial import random_polynomial

CASES = [(3, 3), (5, 3), (8, 3), (3, 4), (5, 4)]


def bench(mod, F, Z, repeat):
    e, c = F.exponents, F.coefficients
    W = Z.copy()
    calls = {
        "eval": lambda: mod.poly_eval(e, c, Z),
        "grad": lambda: mod.poly_grad(e, c, Z),
        "hess": lambda: mod.poly_hess(e, c, Z),
        "fiber": lambda: mod.fiber_coeffs(e, c, W, 0, F.degree),
    }
    for f in calls.values():
        f()  # warm up
    return {k: min(timeit.repeat(f, number=1, repeat=repeat)) for k, f in calls.items()}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=4096)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = available_backends()
    if "cython" not in backends:
        print("compiled backend not built; timing the numpy fallback only")
    rng = np.random.default_rng(0)
    print(f"{'degree':>6} {'vars':>4} {'kernel':>6} " + " ".join(f"{b:>12}" for b in backends)
          + ("  speedup" if len(backends) > 1 else ""))
    for d, n in CASES:
        F = random_polynomial(d, n, d)
        Z = rng.normal(size=(args.points, n)) + 1j * rng.normal(size=(args.points, n))
        times = {b: bench(m, F, Z, args.repeat) for b, m in backends.items()}
        for k in ("eval", "grad", "hess", "fiber"):
            row = f"{d:>6} {n:>4} {k:>6} " + " ".join(f"{times[b][k] * 1e3:>10.3f}ms" for b in backends)
            if len(backends) > 1:
                row += f"  {times['python'][k] / times['cython'][k]:>6.1f}x"
            print(row)


if __name__ == "__main__":
    main()
