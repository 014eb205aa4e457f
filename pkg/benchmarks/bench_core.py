#!/usr/bin/env python3
"""Benchmark the compiled quadrature core against the numpy fallback.

The cumulative rules and the split operator evaluation are the hot path:
every solver iteration is one operator application, and the verification
suite applies operators hundreds of times.  Run after building the
extension (``pip install -e . --no-build-isolation``):

    python benchmarks/bench_core.py [--sizes 512,2048,8192,32768] [--repeat 200]
"""

import argparse
import math
import time

import numpy as np

from mngap._core import _backend_np

try:
    from mngap._core import _core_cy
except ImportError:
    _core_cy = None


def bench(fn, args, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def solve_benchmark(backend, n, repeat):
    """Time a full fixed-point solve using the given backend's core."""
    from mngap import ModelParams, SolveConfig, solve_A
    from mngap import _core as core_mod

    saved = core_mod.operator_core
    core_mod.operator_core = backend.operator_core
    try:
        params = ModelParams(3.0, 1.0, 100.0)
        best = math.inf
        for _ in range(repeat):
            t0 = time.perf_counter()
            rep = solve_A(params, SolveConfig(tol=1e-10, grid_n=n))
            assert rep.converged
            best = min(best, time.perf_counter() - t0)
        return best
    finally:
        core_mod.operator_core = saved
        ops_mod._core.operator_core = saved


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="512,2048,8192,32768")
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if _core_cy is None:
        print("compiled core not available; showing numpy fallback only")
    backends = [("python", _backend_np)] + ([("cython", _core_cy)] if _core_cy else [])

    rng = np.random.default_rng(0)
    print(f"{'kernel':<18} {'n':>7} " + "".join(f"{name:>12}" for name, _ in backends)
          + ("{:>10}".format("speedup") if _core_cy else ""))
    for n in sizes:
        x = np.geomspace(1.0, 100.0, n)
        x[0], x[-1] = 1.0, 100.0
        g = rng.uniform(0.0, 1.0, n)
        for label, call in (
            ("cum_trapezoid", lambda b: bench(b.cum_trapezoid, (x, g), args.repeat)),
            ("cum_parabolic", lambda b: bench(b.cum_parabolic, (x, g), args.repeat)),
            ("operator_core", lambda b: bench(b.operator_core, (x, g, True), args.repeat)),
        ):
            times = [call(b) for _, b in backends]
            row = f"{label:<18} {n:>7} " + "".join(f"{t * 1e6:>10.1f}us" for t in times)
            if len(times) == 2:
                row += f"{times[0] / times[1]:>9.1f}x"
            print(row)

    repeat = max(3, args.repeat // 40)
    print(f"\nend-to-end solve (lam=3, eps=1, Lambda=100, tol=1e-10, best of {repeat}):")
    for n in sizes:
        times = [solve_benchmark(b, n, repeat) for _, b in backends]
        row = f"{'solve_A':<18} {n:>7} " + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
