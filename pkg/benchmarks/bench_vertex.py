"""Compare the compiled and numpy vertex-enumeration kernels.

    python benchmarks/bench_vertex.py [--repeat N]

Two workloads: one max-min power-split search (thousands of small LPs
sharing coefficients) and a batch of random 4-variable LPs solved one at
a time. Results of both kernels are checked for equality first.
"""
import argparse
import time

import numpy as np

from dcsit_gdof import lp
from dcsit_gdof.achievability import maximin_search
from dcsit_gdof.core import AlphaPair


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def random_lps(count, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = 4
        A = np.vstack([rng.normal(size=(6, n)), np.eye(n), -np.eye(n)])
        b = np.concatenate([rng.uniform(0, 2, 6), np.ones(n), np.ones(n)])
        out.append(lp.LinearProgram.from_arrays([f"x{i}" for i in range(n)], A, b, rng.normal(size=n)))
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if "compiled" not in lp.BACKENDS:
        raise SystemExit("compiled kernel not built; reinstall with Cython available")

    pair = AlphaPair(1.5, 0.5)
    progs = random_lps(300)
    workloads = {
        "maximin (1.5, 0.5), step 0.005": lambda b: maximin_search(pair, 0.005, b),
        "300 random LPs, 4 vars x 14 rows": lambda b: [lp.solve(p, b) for p in progs],
    }
    for name, run in workloads.items():
        assert run("compiled") == run("python"), f"kernels disagree on {name}"
        fast = best_of(lambda: run("compiled"), args.repeat)
        slow = best_of(lambda: run("python"), args.repeat)
        print(f"{name:36s} compiled {fast * 1e3:8.1f} ms  python {slow * 1e3:8.1f} ms  "
              f"speedup {slow / fast:5.1f}x")


if __name__ == "__main__":
    main()
