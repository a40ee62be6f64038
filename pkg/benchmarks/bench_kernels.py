"""Compare the compiled and pure-Python RK4 kernels.

    python benchmarks/bench_kernels.py [--steps 10000] [--repeat 3]
"""

import argparse
import time

import numpy as np

from modeltone import kernels


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=10_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    n = args.steps
    R = 2.0
    t = np.linspace(0.0, R, 2 * n + 1)
    G_half = np.ascontiguousarray(np.cos(t) - 0.5)
    q = np.zeros_like(t)
    q[2:] = 1.0 / np.tanh(t[2:])
    h = R / n

    rows = []
    for name, mod in kernels.backends().items():
        def coef():
            g = np.zeros(n + 1)
            gp = np.ones(n + 1)
            g[1] = h
            mod.rk4_coefficient(G_half, h, g, gp, 1)

        def radial():
            mod.rk4_radial(q, h, 2.0, 3.0, 1.0, 0.0, 1, n)

        rows.append((name, _time(coef, args.repeat), _time(radial, args.repeat)))

    print(f"{'backend':<8} {'coefficient':>12} {'radial':>12}   ({n} steps, best of {args.repeat})")
    for name, c, r in rows:
        print(f"{name:<8} {c * 1e3:>10.2f}ms {r * 1e3:>10.2f}ms")
    if len(rows) == 2:
        (_, cc, cr), (_, pc, pr) = rows
        print(f"speedup  {pc / cc:>11.1f}x {pr / cr:>11.1f}x")


if __name__ == "__main__":
    main()
