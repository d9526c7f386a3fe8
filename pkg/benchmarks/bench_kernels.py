#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python reference.

Times the SVM dual solver and the temperature hold scan on synthetic inputs
of increasing size, then a small cross-validated grid search end to end.
Both backends produce bit-identical results; this script measures the speed
gap that justifies the extension.

    python benchmarks/bench_kernels.py [--sizes 100,300,900] [--repeats 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from moodwear._kernels import _pyref

try:
    from moodwear._kernels import _fastpath
except ImportError:
    _fastpath = None


def _problem(rng, n):
    x = rng.standard_normal((n, 24))
    y = np.where(rng.random(n) > 0.5, 1.0, -1.0)
    if abs(y.sum()) == n:
        y[0] = -y[0]
    d2 = np.sum(x**2, 1)[:, None] + np.sum(x**2, 1)[None, :] - 2 * x @ x.T
    return np.exp(-0.05 * np.maximum(d2, 0)), y


def _time(fn, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_smo(sizes, repeats):
    rng = np.random.default_rng(0)
    print(f"{'n':>6} {'python (s)':>12} {'cython (s)':>12} {'speedup':>9}  identical")
    for n in sizes:
        kernel, y = _problem(rng, n)
        t_py, res_py = _time(lambda: _pyref.smo_solve(kernel, y, 10.0, 1e-3, 400_000), repeats)
        if _fastpath is None:
            print(f"{n:>6} {t_py:>12.4f} {'-':>12} {'-':>9}")
            continue
        t_cy, res_cy = _time(lambda: _fastpath.smo_solve(kernel, y, 10.0, 1e-3, 400_000), repeats)
        same = np.array_equal(res_py[0], res_cy[0]) and res_py[1] == res_cy[1]
        print(f"{n:>6} {t_py:>12.4f} {t_cy:>12.4f} {t_py / t_cy:>8.1f}x  {same}")


def bench_temp_scan(repeats):
    rng = np.random.default_rng(1)
    x = 32.0 + np.cumsum(rng.standard_normal(4 * 3600 * 8) * 0.8)  # one 8 h day @ 4 Hz
    t_py, res_py = _time(lambda: _pyref.temp_hold_scan(x, 2.0), repeats)
    line = f"temp scan ({x.size} samples): python {t_py:.4f}s"
    if _fastpath is not None:
        t_cy, res_cy = _time(lambda: _fastpath.temp_hold_scan(x, 2.0), repeats)
        same = np.array_equal(res_py[0], res_cy[0]) and res_py[1] == res_cy[1]
        line += f", cython {t_cy:.4f}s, speedup {t_py / t_cy:.1f}x, identical {same}"
    print(line)


def bench_grid_search(repeats):
    import os

    from moodwear.svm import fit_scaler, grid_search

    rng = np.random.default_rng(2)
    n_per = 120
    x = np.vstack([
        rng.normal(0, 1.0, (n_per, 203)),
        rng.normal(1.5, 1.0, (n_per, 203)),
        rng.normal(-1.5, 1.0, (n_per, 203)),
    ])
    y = np.asarray(["a"] * n_per + ["b"] * n_per + ["c"] * n_per, dtype=object)
    xs = fit_scaler(x).transform(x)
    kwargs = dict(c_grid=(0.5, 8.0, 128.0), gamma_grid=(2.0**-9, 2.0**-5, 0.5),
                  folds=5, seed=0)
    backend = "cython" if (_fastpath is not None and
                           os.environ.get("MOODWEAR_PURE_PYTHON", "") == "") else "python"
    t, result = _time(lambda: grid_search(xs, y, **kwargs), repeats)
    print(f"grid search 3x3x5 folds, n={3 * n_per} (active backend: {backend}): "
          f"{t:.3f}s -> C={result[0]:g} gamma={result[1]:g} acc={result[2]:.3f}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="100,300,900")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if _fastpath is None:
        print("compiled extension not available; timing the reference only\n")
    print("== SVM dual solver ==")
    bench_smo(sizes, args.repeats)
    print("\n== temperature hold scan ==")
    bench_temp_scan(args.repeats)
    print("\n== end-to-end grid search ==")
    bench_grid_search(max(1, args.repeats - 1))


if __name__ == "__main__":
    main()
