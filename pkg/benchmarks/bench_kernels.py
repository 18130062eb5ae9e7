"""Compare the numba and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat N]

Each kernel is called once untimed (numba compiles or loads its cache on
first call), then timed over ``--repeat`` calls; the best time is reported.
"""

import argparse
import time

import numpy as np

from greencell import kernels
from greencell._accel import HAVE_NUMBA


def best_time(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    g = rng.uniform(0.1, 1.5, size=(4, 400))
    target = rng.uniform(0.5, 2.0, size=400)
    lam = rng.uniform(0.1, 1.0, size=4)
    yield "split_powers (4 BS x 400 sub-bands)", "split_powers", (g, target, lam)
    yield "bs_load (4 BS x 400 sub-bands)", "bs_load", (g, target, lam, 1)

    m = 14
    ga = rng.uniform(0.1, 1.5, size=(2, m))
    args = (ga, np.array([6.0, 6.0]), rng.uniform(0.5, 1.5, m), 1.0, np.array([4.0, 1.0]), 1.0)
    assoc = rng.integers(0, 2, m).astype(np.int64)
    yield f"association_cost (2 BS x {m} MTs)", "association_cost", (assoc,) + args
    yield f"exhaustive_association (2^{m} candidates)", "exhaustive_association", args + (np.inf,)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':45s}" + "".join(f"{b:>12s}" for b in backends) + "     speedup")
    for label, name, call_args in cases(rng):
        t = {b: best_time(lambda b=b: kernels.BACKENDS[b][name](*call_args), args.repeat)
             for b in backends}
        row = f"{label:45s}" + "".join(f"{t[b] * 1e3:10.3f}ms" for b in backends)
        if "numba" in t:
            row += f"  {t['numpy'] / t['numba']:9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
