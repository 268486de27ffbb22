#!/usr/bin/env python3
"""Benchmark the compiled DPLL core against the pure-Python fallback.

Runs pigeonhole instances, seeded random 3-SAT, and a real ground problem
from the ontological-theory bundle, verifying along the way that both
backends return identical results.

    python benchmarks/bench_solver.py
"""

import random
import time

from homlkit.grounder import ground
from homlkit.semantics import Scope
from homlkit.solver.pure import solve_cnf as solve_pure

try:
    from homlkit.solver._core import solve_cnf as solve_compiled
except ImportError:
    solve_compiled = None


def pigeonhole(holes):
    pigeons = holes + 1
    var = lambda p, h: p * holes + h + 1
    clauses = [[var(p, h) for h in range(holes)] for p in range(pigeons)]
    for h in range(holes):
        for p1 in range(pigeons):
            for p2 in range(p1 + 1, pigeons):
                clauses.append([-var(p1, h), -var(p2, h)])
    return pigeons * holes, clauses


def random_3sat(num_vars, num_clauses, seed):
    rng = random.Random(seed)
    clauses = []
    for _ in range(num_clauses):
        lits = rng.sample(range(1, num_vars + 1), 3)
        clauses.append([l if rng.random() < 0.5 else -l for l in lits])
    return num_vars, clauses


def goedel_refutation():
    from homlkit.theories import load_bundle

    bundle = load_bundle("goedel")
    problem = ground(bundle.theory, Scope(2, 2), negated_goal=bundle.theory.goals[0])
    return problem.num_vars, problem.clauses


def bench(name, num_vars, clauses, repeat=3):
    rows = []
    reference = None
    for label, solver in (("pure", solve_pure), ("compiled", solve_compiled)):
        if solver is None:
            rows.append((label, None, "unavailable"))
            continue
        best = None
        result = None
        for _ in range(repeat):
            start = time.perf_counter()
            result = solver(num_vars, [list(c) for c in clauses])
            elapsed = time.perf_counter() - start
            best = elapsed if best is None else min(best, elapsed)
        if reference is None:
            reference = result
        elif result != reference:
            raise SystemExit(f"{name}: backend results differ")
        status = {10: "SAT", 20: "UNSAT", 0: "UNKNOWN"}[result[0]]
        rows.append((label, best, status))
    print(f"\n{name}  ({num_vars} vars, {len(clauses)} clauses)")
    pure_time = next((t for l, t, _ in rows if l == "pure" and t), None)
    for label, elapsed, status in rows:
        if elapsed is None:
            print(f"  {label:9s}  {status}")
            continue
        speedup = ""
        if label == "compiled" and pure_time:
            speedup = f"  ({pure_time / elapsed:.1f}x)"
        print(f"  {label:9s}  {elapsed * 1000:9.2f} ms  {status}{speedup}")


def main():
    print("solver backend benchmark")
    if solve_compiled is None:
        print("note: compiled extension not built; showing pure backend only")
    bench("pigeonhole(6)", *pigeonhole(6))
    bench("pigeonhole(7)", *pigeonhole(7), repeat=1)
    bench("random 3-SAT n=60 m=240", *random_3sat(60, 240, seed=42))
    bench("random 3-SAT n=80 m=340", *random_3sat(80, 340, seed=7), repeat=1)
    bench("goedel refutation at (2,2)", *goedel_refutation())


if __name__ == "__main__":
    main()
