"""Compare the compiled and pure-Python CDCL backends on random 3-CNF.

    python benchmarks/bench_sat.py --vars 80 --count 40 --seed 7
"""
import argparse
import random
import time

from symsmt.sat import SatSolver, available_backends


def random_3cnf(rng, n, ratio):
    m = int(round(n * ratio))
    return [[rng.choice((-1, 1)) * v for v in rng.sample(range(1, n + 1), 3)] for _ in range(m)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--vars", type=int, default=80)
    ap.add_argument("--ratio", type=float, default=4.26)
    ap.add_argument("--count", type=int, default=40)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    instances = [random_3cnf(rng, args.vars, args.ratio) for _ in range(args.count)]
    results = {}
    for backend in available_backends():
        t0 = time.perf_counter()
        outcomes = []
        conflicts = 0
        for clauses in instances:
            s = SatSolver(args.vars, clauses, backend=backend)
            r = s.solve()
            outcomes.append((r.outcome, tuple(r.model) if r.model else None))
            conflicts += r.stats["conflicts"]
        results[backend] = (time.perf_counter() - t0, outcomes, conflicts)
        print(f"{backend:<8} {results[backend][0]:8.3f}s  conflicts {conflicts}")
    if len(results) == 2:
        (tp, op, _), (tc, oc, _) = results["python"], results["cython"]
        print(f"identical results: {op == oc}   speedup {tp / tc:.1f}x")
    else:
        print("compiled backend not built; only the Python fallback was timed")


if __name__ == "__main__":
    main()
