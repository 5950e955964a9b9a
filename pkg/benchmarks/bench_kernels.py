"""Compare the compiled and pure-Python tensor kernels.

Run from the repository root after an editable install::

    python benchmarks/bench_kernels.py --dims 2 3 4 6 8 --repeat 5

Each row reports the best-of-``repeat`` time per call in microseconds for
both backends and their ratio.
"""

from __future__ import annotations

import argparse
import sys
import timeit

import numpy as np

from thermogeom import _pykernels

try:
    from thermogeom import _ckernels
except ImportError:  # pragma: no cover - depends on the build
    _ckernels = None


def random_problem(k: int, rng):
    """A well-conditioned SPD metric, its inverse and a fully symmetric third-derivative tensor."""
    a = rng.normal(size=(k, k))
    g = a @ a.T + k * np.eye(k)
    ginv = np.linalg.inv(g)
    t = rng.normal(size=(k, k, k))
    dg = sum(t.transpose(p) for p in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))) / 6
    return g, ginv, np.ascontiguousarray(dg)


def cases(mod, g, ginv, dg):
    riem = np.asarray(mod.hessian_riemann(ginv, dg))
    return {
        "det": lambda: mod.det(g),
        "inv": lambda: mod.inv(g),
        "eig": lambda: mod.jacobi_eigenvalues(g),
        "christoffel": lambda: mod.hessian_christoffel(ginv, dg),
        "riemann": lambda: mod.hessian_riemann(ginv, dg),
        "scalar": lambda: mod.ricci_scalar(riem, ginv),
    }


def best_time(fn, repeat: int) -> float:
    timer = timeit.Timer(fn)
    n, _ = timer.autorange()
    return min(timer.repeat(repeat, n)) / n


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4, 6, 8])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels are not built; nothing to compare", file=sys.stderr)
        return 1
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<12} {'k':>2} {'python_us':>11} {'cython_us':>11} {'speedup':>8}")
    for k in args.dims:
        g, ginv, dg = random_problem(k, rng)
        py, cy = cases(_pykernels, g, ginv, dg), cases(_ckernels, g, ginv, dg)
        for name in py:
            tp = best_time(py[name], args.repeat) * 1e6
            tc = best_time(cy[name], args.repeat) * 1e6
            print(f"{name:<12} {k:>2} {tp:>11.2f} {tc:>11.2f} {tp / tc:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
