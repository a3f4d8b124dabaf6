"""Time the compiled and NumPy LLF kernels on the same Riemann problems.

    python benchmarks/bench_llf.py --cells 2000 8000 --steps 500
"""
import argparse
import time

import numpy as np

from kkriemann.model import State, SystemParams
from kkriemann.scenario import Scenario
from kkriemann.solver import Grid, get_kernels, simulate


def per_step(kernels, n_cells, steps, a):
    sc = Scenario(SystemParams(a, 5.0), State(3.0, -3.0), State(2.0, -5.0),
                  t_end=1e9, n_cells=n_cells)
    grid = Grid.centered(n_cells)
    # warm-up plus a fixed number of steps; t_end is never reached
    from kkriemann.solver.core import Field, llf_step
    field = Field.riemann(grid, sc.left, sc.right)
    field, _ = llf_step(field, sc.params, kernels=kernels)
    t0 = time.perf_counter()
    for _ in range(steps):
        field, _ = llf_step(field, sc.params, kernels=kernels)
    return (time.perf_counter() - t0) / steps, field


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cells", type=int, nargs="+", default=[1000, 4000, 16000])
    ap.add_argument("--steps", type=int, default=300)
    ap.add_argument("--a", type=float, nargs="+", default=[-1.5, 0.5, -0.3])
    args = ap.parse_args(argv)
    try:
        fast = get_kernels("cython")
    except ImportError:
        print("compiled kernels not built; nothing to compare")
        return 1
    slow = get_kernels("python")
    print(f"{'a':>6} {'cells':>7} {'python us/step':>15} {'cython us/step':>15} {'speedup':>8} {'max diff':>10}")
    for a in args.a:
        for n in args.cells:
            tp, fp = per_step(slow, n, args.steps, a)
            tc, fc = per_step(fast, n, args.steps, a)
            diff = max(np.max(np.abs(fp.rho - fc.rho)), np.max(np.abs(fp.m - fc.m)))
            print(f"{a:6.2f} {n:7d} {tp * 1e6:15.1f} {tc * 1e6:15.1f} {tp / tc:8.1f} {diff:10.2e}")
    # end-to-end run of a catalog-sized problem
    sc = Scenario(SystemParams(-1.5, 5.0), State(3.0, 3.0), State(9.0, -8.0), t_end=100.0, n_cells=4000)
    for name, k in (("python", slow), ("cython", fast)):
        t0 = time.perf_counter()
        res = simulate(sc, kernels=k)
        print(f"full run ({name}): {time.perf_counter() - t0:.2f} s, {res.steps} steps")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
