"""Benchmark the numeric kernels on the jit path vs the interpreted path.

Usage:
    python benchmarks/bench_kernels.py            # time the current path
    python benchmarks/bench_kernels.py --compare  # run both paths and compare

The path is selected the same way the package selects it: the
FINGERTAP_NO_NUMBA environment variable forces the interpreted fallback.
"""

import itertools
import os
import subprocess
import sys
import time

import numpy as np


def bench_levenshtein():
    from fingertap.metrics import min_string_distance

    strings = ["".join(t) for t in itertools.product("abc", repeat=5)]
    min_string_distance("warm", "up")  # trigger compilation outside the clock
    start = time.perf_counter()
    total = 0
    for a in strings:
        for b in strings:
            total += min_string_distance(a, b)
    elapsed = time.perf_counter() - start
    return elapsed, f"{len(strings)**2} pairs, checksum {total}"

def bench_incomplete_beta():
    from fingertap.stats import regularized_incomplete_beta

    regularized_incomplete_beta(0.5, 2.0, 3.0)
    xs = np.linspace(0.001, 0.999, 400)
    shapes = [(0.5, 0.5), (2.0, 3.0), (10.0, 2.0), (30.0, 30.0)]
    start = time.perf_counter()
    acc = 0.0
    for a, b in shapes:
        for x in xs:
            acc += regularized_incomplete_beta(float(x), a, b)
    elapsed = time.perf_counter() - start
    return elapsed, f"{len(xs) * len(shapes)} evaluations, checksum {acc:.6f}"

def bench_mann_whitney():
    from fingertap.stats import mann_whitney

    mann_whitney([1.0, 2.0], [3.0])
    rng = np.random.default_rng(0)
    a = rng.normal(0, 1, 10).tolist()
    b = rng.normal(0.5, 1, 10).tolist()  # C(20,10) = 184756 assignments
    start = time.perf_counter()
    result = mann_whitney(a, b)
    elapsed = time.perf_counter() - start
    return elapsed, f"exact p = {result.p_value:.6f} over 184756 assignments"


def run_all():
    from fingertap.kernels import NUMBA_ENABLED

    label = "numba jit" if NUMBA_ENABLED else "interpreted"
    print(f"path: {label}")
    for name, fn in [
        ("levenshtein sweep", bench_levenshtein),
        ("incomplete beta grid", bench_incomplete_beta),
        ("mann-whitney exact", bench_mann_whitney),
    ]:
        elapsed, note = fn()
        print(f"  {name:22s} {elapsed:8.3f}s   ({note})")


def compare():
    here = os.path.abspath(__file__)
    for label, flag in [("jit path", None), ("pure path", "1")]:
        print(f"--- {label} ---", flush=True)
        env = dict(os.environ)
        env.pop("FINGERTAP_NO_NUMBA", None)
        if flag:
            env["FINGERTAP_NO_NUMBA"] = flag
        subprocess.run([sys.executable, here], env=env, check=True)


if __name__ == "__main__":
    if "--compare" in sys.argv:
        compare()
    else:
        run_all()
