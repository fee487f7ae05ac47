"""Compare the numba and pure-numpy kernel paths.

Run ``python3 benchmarks/bench_kernels.py [--n 200000] [--repeat 5]``.  Both
paths are imported side by side (the ``HSG_DISABLE_NUMBA`` flag only picks
the default dispatch), checked for agreement and timed; the first numba call
is excluded as compilation.
"""
import argparse
import time

import numpy as np

from hsgap import _kernels
from hsgap._accel import HAVE_NUMBA
from hsgap.specfun import ellip_complete


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(n, rng):
    a, b, adot = 1.3, 1.0, 0.7
    K, E = ellip_complete(b * b / (a * a))
    X = rng.uniform(0.0, 3.0, n)
    Y = rng.uniform(0.0, 3.0, n)
    phi = rng.uniform(-6.0, 6.0, n)
    k = rng.uniform(0.0, 0.99, n)
    x, y, z = (rng.uniform(0.0, 4.0, n) for _ in range(3))
    return [
        ("carlson_rf", lambda m: getattr(_kernels, f"rf_{m}")(x, y, z)),
        ("carlson_rd", lambda m: getattr(_kernels, f"rd_{m}")(x, y, z)),
        ("ellip_incomplete", lambda m: getattr(_kernels, f"ellipfe_{m}")(phi, k)),
        ("cassini_pressure", lambda m: getattr(_kernels, f"cassini_reduced_pressure_{m}")(X, Y, a, b, adot, K, E)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(12345)
    print(f"n = {args.n}, best of {args.repeat}, numba available: {HAVE_NUMBA}")
    print(f"{'kernel':<18} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8} {'max rel diff':>13}")
    for name, run in cases(args.n, rng):
        ref = np.asarray(run("numpy"))
        t_np = _time(lambda: run("numpy"), args.repeat)
        if HAVE_NUMBA:
            out = np.asarray(run("numba"))  # compile
            diff = float(np.max(np.abs(out - ref) / np.maximum(np.abs(ref), 1.0)))
            t_nb = _time(lambda: run("numba"), args.repeat)
            print(f"{name:<18} {1e3 * t_np:11.2f} {1e3 * t_nb:11.2f} {t_np / t_nb:8.1f} {diff:13.2e}")
        else:
            print(f"{name:<18} {1e3 * t_np:11.2f} {'-':>11} {'-':>8} {'-':>13}")


if __name__ == "__main__":
    main()
