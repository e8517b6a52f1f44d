"""Time the numba and numpy kernel backends on the two hot loops.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--threads k]

Both backends must return identical arrays; the script checks this before
reporting timings.
"""
from __future__ import annotations

import argparse
import itertools
import time

import numpy as np

from eulerian_dmod import _kernels
from eulerian_dmod.frob import operators_below
from eulerian_dmod.scalars import CharSpec, binom_table


def euler_case(radius: int, n: int, r_max: int, p: int):
    exps = np.array(list(itertools.product(range(-radius, radius + 1), repeat=n)), dtype=np.int64)
    tab = binom_table(-radius, radius, r_max, CharSpec(p))
    return lambda: _kernels.euler_coeffs(exps, tab, radius, r_max, p), len(exps)


def battery_case(radius: int, p: int, e: int):
    n, q = 3, p**e
    exps = np.array(list(itertools.product(range(-radius, radius + 1), repeat=n)), dtype=np.int64)
    alphas = np.array(list(itertools.product(range(2), repeat=n)), dtype=np.int64)
    betas = np.array(operators_below(n, q), dtype=np.int64)
    tab = binom_table(-radius, max(radius, q - 1), q - 1, CharSpec(p))
    rules = np.array([_kernels.RULE_ALLINT, _kernels.RULE_NONNEG, _kernels.RULE_ALLINT], dtype=np.int64)
    fn = lambda: _kernels.frob_battery(exps, rules, alphas, betas, tab, radius, p, q)  # noqa: E731
    return fn, len(exps) * len(alphas) * len(betas)


def timeit(fn, repeat):
    fn()  # warm-up (numba compile or cache load)
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--threads", type=int, default=0)
    args = ap.parse_args()
    if args.threads:
        _kernels.set_threads(args.threads)

    cases = {
        "euler_coeffs n=3 box [-12,12]^3 r<=25 p=5": euler_case(12, 3, 25, 5),
        "euler_coeffs n=4 box [-6,6]^4 r<=9 p=3": euler_case(6, 4, 9, 3),
        "frob_battery p=3 e=2 box [-4,4]^3": battery_case(4, 3, 2),
        "frob_battery p=5 e=2 box [-4,4]^3": battery_case(4, 5, 2),
    }
    print(f"{'case':45s} {'size':>10s} {'numpy s':>10s} {'numba s':>10s} {'speedup':>8s}")
    for name, (fn, size) in cases.items():
        times, outs = {}, {}
        for backend in ("numpy", "numba"):
            prev = _kernels.set_backend(backend)
            try:
                outs[backend] = fn()
                times[backend] = timeit(fn, args.repeat)
            finally:
                _kernels.set_backend(prev)
        a, b = outs["numpy"], outs["numba"]
        same = np.array_equal(a, b) if isinstance(a, np.ndarray) else a == b
        if not same:
            raise SystemExit(f"backends disagree on {name}")
        print(f"{name:45s} {size:10d} {times['numpy']:10.4f} {times['numba']:10.4f} "
              f"{times['numpy'] / times['numba']:7.1f}x")


if __name__ == "__main__":
    main()
