"""Compare the compiled and NumPy spline kernels on clip-shaped workloads.

    python benchmarks/bench_kernels.py [--repeat 20]

Each case fits 399 tracks (133 joints x 3 coordinates) over n knots and
evaluates them at a 24 fps grid, like reconstructing one stitched sentence.
"""

import argparse
import time

import numpy as np

from signpipe.motion import _backend


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def coefficients(t, y, M):
    h = np.diff(t)[:, None]
    slopes = np.diff(y, axis=0) / h
    return np.ascontiguousarray(np.stack([
        y[:-1],
        slopes - h * (2 * M[:-1] + M[1:]) / 6,
        M[:-1] / 2,
        (M[1:] - M[:-1]) / (6 * h),
    ]))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=20)
    parser.add_argument("--knots", type=int, nargs="+", default=[12, 48, 200, 1000])
    args = parser.parse_args()

    kernels = _backend.available()
    if "cython" not in kernels:
        print("compiled kernels are not built; only the NumPy fallback is available")
    rng = np.random.default_rng(0)
    header = f"{'knots':>6} {'frames':>7} " + " ".join(
        f"{name + ' fit':>12} {name + ' eval':>12}" for name in kernels)
    print(header)
    for n in args.knots:
        t = np.cumsum(rng.uniform(1 / 24, 4 / 24, n))
        y = np.ascontiguousarray(rng.normal(size=(n, 399)))
        h = np.ascontiguousarray(np.diff(t))
        grid = np.arange(0, t[-1], 1 / 24)
        row = f"{n:>6} {grid.size:>7} "
        results = {}
        for name, k in kernels.items():
            M = np.asarray(k.natural_second_derivatives(h, y))
            coef = coefficients(t, y, M)
            fit = best_of(lambda: k.natural_second_derivatives(h, y), args.repeat)
            ev = best_of(lambda: k.evaluate(t, coef, grid, 0), args.repeat)
            results[name] = np.asarray(k.evaluate(t, coef, grid, 0))
            row += f"{fit * 1e3:>10.3f}ms {ev * 1e3:>10.3f}ms "
        print(row)
        if len(results) == 2:
            diff = np.abs(results["cython"] - results["python"]).max()
            assert diff <= 1e-12, diff


if __name__ == "__main__":
    main()
