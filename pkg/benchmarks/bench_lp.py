"""Compiled vs pure-Python LP kernel.

Records every LP issued while censusing a few gadget networks, replays the
recorded instances through both kernels (checking they agree), then times
whole censuses under each backend.

    python benchmarks/bench_lp.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

from reluregions import lp
from reluregions._simplex import solve as python_solve
from reluregions.census import count_regions
from reluregions.gadgets import build_fig2, build_N_phi_star, build_T_eps, build_zanotti, parse_dimacs

PHI = parse_dimacs("p cnf 3 3\n1 -2 0\n2 3 0\n1 -3 0\n")

WORKLOADS = {
    "T_eps(2)": lambda: build_T_eps(2),
    "zanotti": build_zanotti,
    "fig2": build_fig2,
    "N_phi_star(3 vars)": lambda: build_N_phi_star(PHI),
}


def record_instances():
    captured = []
    inner = lp._solve

    def spy(A, b, eq, c):
        captured.append(([list(r) for r in A], list(b), list(eq), list(c)))
        return inner(A, b, eq, c)

    lp._solve = spy
    try:
        for build in WORKLOADS.values():
            count_regions(build())
    finally:
        lp._solve = inner
    return captured


def replay(solve, instances, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        for A, b, eq, c in instances:
            solve(A, b, eq, c)
        best = min(best, time.perf_counter() - t)
    return best


def census_time(backend, repeat):
    lp.use_backend(backend)
    rows = {}
    for name, build in WORKLOADS.items():
        best = float("inf")
        for _ in range(repeat):
            t = time.perf_counter()
            count_regions(build())
            best = min(best, time.perf_counter() - t)
        rows[name] = best
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if lp._kernel is None:
        raise SystemExit("compiled kernel not built; run `pip install -e . --no-build-isolation` first")
    start_backend = lp.BACKEND
    instances = record_instances()
    for A, b, eq, c in instances:
        assert lp._kernel.solve(A, b, eq, c) == python_solve(A, b, eq, c)
    t_c = replay(lp._kernel.solve, instances, args.repeat)
    t_p = replay(python_solve, instances, args.repeat)
    print(f"{len(instances)} recorded LPs, kernels agree on all of them")
    print(f"{'kernel only':<22}{'compiled':>10}{'python':>10}{'speedup':>9}")
    print(f"{'replay':<22}{t_c:>9.3f}s{t_p:>9.3f}s{t_p / t_c:>8.1f}x")
    compiled = census_time("compiled", args.repeat)
    pure = census_time("python", args.repeat)
    lp.use_backend(start_backend)
    print(f"\n{'full census':<22}{'compiled':>10}{'python':>10}{'speedup':>9}")
    for name in WORKLOADS:
        print(f"{name:<22}{compiled[name]:>9.3f}s{pure[name]:>9.3f}s{pure[name] / compiled[name]:>8.1f}x")


if __name__ == "__main__":
    main()
