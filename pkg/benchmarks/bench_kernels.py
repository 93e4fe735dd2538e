"""Compare the compiled and numpy forward-Euler steppers.

    python3 benchmarks/bench_kernels.py [--steps1d N] [--steps2d N]

Prints time per step for each available backend and whether the two backends
produce bit-identical fields.
"""

import argparse
import time

import numpy as np

from hollingtanner import kernels

PARAMS = (0.15, 0.28, 0.575, 0.26, 5.0)  # A, C, Q, S, d


def _initial(shape, seed=0):
    rng = np.random.default_rng(seed)
    return 0.226 + 0.01 * rng.random(shape), 0.506 + 0.01 * rng.random(shape)


def _time(fn, u0, v0, steps, dt, h):
    u, v = u0.copy(), v0.copy()
    t0 = time.perf_counter()
    status = fn(u, v, steps, dt, h, *PARAMS)
    elapsed = time.perf_counter() - t0
    if status[0] != kernels.OK:
        raise RuntimeError(f"stepper failed: {status}")
    return elapsed / steps, u, v


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n1d", type=int, default=1500)
    ap.add_argument("--steps1d", type=int, default=20000)
    ap.add_argument("--n2d", type=int, default=200)
    ap.add_argument("--steps2d", type=int, default=500)
    args = ap.parse_args()

    h1 = 200.0 / (args.n1d - 1)
    dt1 = 0.9 * h1 * h1 / (2.0 * PARAMS[-1])
    dt2 = 0.9 / (4.0 * PARAMS[-1])
    u1, v1 = _initial(args.n1d)
    u2, v2 = _initial((args.n2d, args.n2d), seed=1)

    results = {}
    print(f"{'backend':<10} {'1D us/step':>12} {'2D ms/step':>12}")
    for name, (e1, e2) in kernels.backends().items():
        t1, a1, b1 = _time(e1, u1, v1, args.steps1d, dt1, h1)
        t2, a2, b2 = _time(e2, u2, v2, args.steps2d, dt2, 1.0)
        results[name] = (t1, t2, a1, b1, a2, b2)
        print(f"{name:<10} {t1 * 1e6:12.2f} {t2 * 1e3:12.3f}")

    if "compiled" in results:
        py, cc = results["python"], results["compiled"]
        print(f"speedup    {py[0] / cc[0]:12.1f}x {py[1] / cc[1]:11.1f}x")
        same = all(np.array_equal(x, y) for x, y in zip(py[2:], cc[2:]))
        print(f"bit-identical fields: {same}")
    else:
        print("compiled backend unavailable; only the numpy stepper was timed")


if __name__ == "__main__":
    main()
