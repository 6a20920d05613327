"""Compare the compiled kernels with the NumPy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Prints the best-of-N wall time of each kernel on both backends and the
speed-up. Skips the compiled column when the extension is not built.
"""

import argparse
import timeit

import numpy as np

from delayosc import Kind, Problem, build_fundamental, solve
from delayosc import _purepy, kernels
from delayosc.cauchy import evaluate


def _cases(rng):
    sym = build_fundamental(Kind.X1, 1.3, 0.9, 0.7, 16, evaluation="symbolic")
    P, Q, R = sym._tables[2]
    n = 200_000
    idx = rng.integers(0, P.shape[0], n)
    u = rng.uniform(0, 0.7, n)

    tay = build_fundamental(Kind.X1, 0.05, 2.0, 1.1, 16, evaluation="taylor")
    C = tay.taylor.orders[0]
    tidx = rng.integers(0, C.shape[0], n)
    v = rng.uniform(0, tay.taylor.h, n)

    m, K, h = 1000, 10, 1e-3
    steps = m * K
    f = np.cos(np.arange(2 * steps + 1) * h)
    phi = np.sin(-1 + np.arange(2 * m + 1) * h / 2)

    return {
        f"eval_packed ({n} points)": lambda mod: mod.eval_packed(P, Q, R, sym.omega1, idx, u),
        f"eval_poly_packed ({n} points)": lambda mod: mod.eval_poly_packed(C, tidx, v),
        f"rk4_march ({steps} steps)": lambda mod: mod.rk4_march(1.0, 0.25, h, m, steps, 0.0, 1.0, f, phi),
    }


def _best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    compiled = None
    if kernels.compiled_available():
        from delayosc import _kernels as compiled

    rng = np.random.default_rng(0)
    print(f"{'kernel':38s} {'numpy [ms]':>11s} {'cython [ms]':>12s} {'speed-up':>9s}")
    for name, run in _cases(rng).items():
        t_py = _best(lambda: run(_purepy), args.repeat) * 1e3
        if compiled is None:
            print(f"{name:38s} {t_py:11.2f} {'n/a':>12s} {'n/a':>9s}")
            continue
        t_cy = _best(lambda: run(compiled), args.repeat) * 1e3
        print(f"{name:38s} {t_py:11.2f} {t_cy:12.2f} {t_py / t_cy:8.1f}x")

    # end to end, with whichever backend is active
    p = Problem(1.0, 0.5, 1.0, 10, "sin(t)", "cos(2*t)")
    t = np.linspace(0, 9.99, 2000)
    t_solve = _best(lambda: evaluate(solve(p), t), args.repeat) * 1e3
    print(f"\nsolve + evaluate 2000 points ({kernels.BACKEND} backend): {t_solve:.1f} ms")


if __name__ == "__main__":
    main()
