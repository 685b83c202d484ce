#!/usr/bin/env python3
"""Time the numba kernels against the pure-numpy fallback.

The backend is fixed at import time, so each one runs in its own
interpreter with ``FREEBVP_DISABLE_NUMBA`` set accordingly.

    python benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
from freebvp import BACKEND
from freebvp.convergence import run_study
from freebvp.problems import make_dynamical, make_na_variant, make_reactor, make_string
from freebvp.solver import SolverConfig, solve_scalar

repeat = int(sys.argv[1])
t0 = time.perf_counter()
solve_scalar(make_string(), SolverConfig(dx=-0.1))
warmup = time.perf_counter() - t0
timings = {}
for mk in (make_string, make_dynamical, make_na_variant, make_reactor):
    p = mk()
    solve_scalar(p, SolverConfig(dx=-0.1))
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        sol = solve_scalar(p, SolverConfig(dx=-0.0001953125))
        best = min(best, time.perf_counter() - t0)
    timings[p.name] = (best, len(sol.x), sol.s)
t0 = time.perf_counter()
run_study(make_reactor(), -0.1, 10, "self")
study = time.perf_counter() - t0
print(json.dumps({"backend": BACKEND, "warmup": warmup, "solves": timings, "study": study}))
"""


def run(disable, repeat):
    env = os.environ.copy()
    env["FREEBVP_DISABLE_NUMBA"] = "1" if disable else "0"
    proc = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                          capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    fast = run(False, args.repeat)
    slow = run(True, args.repeat)
    print(f"first solve incl. import/JIT load: numba {fast['warmup']:.3f}s, "
          f"numpy {slow['warmup']:.3f}s")
    print(f"{'problem':>12}  {'steps':>6}  {'numba [s]':>10}  {'numpy [s]':>10}  {'speedup':>8}  agree")
    for name, (t_fast, steps, s_fast) in fast["solves"].items():
        t_slow, _, s_slow = slow["solves"][name]
        agree = abs(s_fast - s_slow) <= 1e-13 * abs(s_slow)
        print(f"{name:>12}  {steps:>6}  {t_fast:>10.4f}  {t_slow:>10.4f}  "
              f"{t_slow / t_fast:>7.1f}x  {agree}")
    print(f"{'reactor study':>12}  {'10 lv':>6}  {fast['study']:>10.4f}  {slow['study']:>10.4f}  "
          f"{slow['study'] / fast['study']:>7.1f}x")


if __name__ == "__main__":
    main()
