"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""
import itertools
import random
import statistics
import sys
import time
from pathlib import Path

import pytest

from symsmt.ast import conjoin
from symsmt.bench import run_bench
from symsmt.generate import generate_corpus, generate_pure_theory
from symsmt.oracle import (
    apply_to_assignment, brute_force, enumerate_models_direct, enumerate_skeleton_models,
    evaluate, lex_leq, orbit_coverage,
)
from symsmt.sat import SatSolver, available_backends
from symsmt.sbp import build_theory_sbp, order_variables
from symsmt.skeleton import extract_skeleton, to_cnf
from symsmt.solver import Mode, SolveConfig, Status, add_symmetry_breaking, solve
from symsmt.symgraph import ColoredGraph, detect_symmetries, find_automorphism_generators

sys.path.insert(0, str(Path(__file__).resolve().parent))
from _util import brute_automorphisms, closure, cyclic, intro, table1  # noqa: E402

B = 8
MIXED_COUNT = 500


def _outcome(status: Status) -> bool | None:
    return {Status.SAT: True, Status.UNSAT: False}.get(status)


@pytest.fixture(scope="session")
def mixed():
    return generate_corpus(2024, MIXED_COUNT, "mixed", B)


@pytest.fixture(scope="session")
def plain_outcomes(mixed):
    return [_outcome(solve(i.script, SolveConfig(mode=Mode.PLAIN, bound=B)).status) for i in mixed]


def _equisat_mismatches(corpus, plain, **cfg):
    bad = []
    for inst, p in zip(corpus, plain):
        sym = _outcome(solve(inst.script, SolveConfig(mode=Mode.SYM, bound=B, **cfg)).status)
        hyb = _outcome(solve(inst.script, SolveConfig(mode=Mode.HYBRID, bound=B, **cfg)).status)
        if not (p == sym == hyb == inst.sat):
            bad.append((inst.name, inst.sat, p, sym, hyb))
    return bad


def _skeleton_setup(script, k=16):
    psi, phi = extract_skeleton(script)
    base = to_cnf(psi, len(phi))
    cnf = base.copy()
    det, ordering, sbps = add_symmetry_breaking(script, psi, phi, cnf, SolveConfig(bound=B, k=k))
    return base, cnf, det, ordering, sbps


def test_criterion_1_table1_golden(record_criterion):
    t0 = time.perf_counter()
    s = table1()
    psi, phi = extract_skeleton(s)
    cnf = to_cnf(psi, len(phi))
    det = detect_symmetries(s, psi, phi)
    labels = phi.labels()
    perms = [t.cycles(labels) for t in det.accepted]
    aug = cnf.copy()
    _, _, sbps = add_symmetry_breaking(s, psi, phi, aug, SolveConfig())
    sbp_clauses = [c for sbp in sbps for c in sbp.clauses]
    results = {m: solve(s, SolveConfig(mode=m)) for m in (Mode.PLAIN, Mode.SYM)}
    elapsed = time.perf_counter() - t0
    ok = (len(phi) == 5 and cnf.num_vars == 5 and len(cnf.clauses) == 3
          and perms == ["(Q R)(x y)"]
          and sbp_clauses == [[-2, 3]]
          and all(r.status is Status.SAT and evaluate(s.assertion, r.model) for r in results.values())
          and elapsed < 1.0)
    record_criterion(1, ok, f"skeleton={len(phi)} vars/{len(cnf.clauses)} clauses, theta={perms}, "
                            f"sbp={sbp_clauses}, {elapsed:.3f}s")
    assert ok


def test_criterion_2_equisatisfiability(mixed, plain_outcomes, record_criterion):
    t0 = time.perf_counter()
    assert all(len(i.script.declarations) <= 4 for i in mixed)
    bad = _equisat_mismatches(mixed, plain_outcomes)
    sat = sum(i.sat for i in mixed)
    ok = not bad and len(mixed) >= 500
    record_criterion(2, ok, f"{len(mixed)} instances ({sat} sat), {len(bad)} mismatches, "
                            f"{time.perf_counter() - t0:.1f}s")
    assert ok, bad[:5]


def test_criterion_3_orbit_coverage(mixed, record_criterion):
    extra = generate_corpus(7, 100, "symmetric-sat", B)
    checked = violations = pruned = 0
    for inst in list(mixed) + extra:
        base, cnf, det, _, sbps = _skeleton_setup(inst.script)
        if not sbps or base.num_skeleton > 12:
            continue
        gens = [sbp.source.skel for sbp in sbps]
        psi_models = enumerate_skeleton_models(base)
        sbp_models = enumerate_skeleton_models(cnf)
        rep = orbit_coverage(psi_models, sbp_models, gens)
        checked += 1
        pruned += rep.pruned
        if not rep.ok or not sbp_models <= psi_models:
            violations += 1
    ok = checked >= 200 and violations == 0
    record_criterion(3, ok, f"{checked} instances, {violations} violations, {pruned} models pruned")
    assert ok


def test_criterion_4_lex_min(mixed, record_criterion):
    extra = generate_corpus(11, 100, "symmetric-sat", B)
    checked = violations = 0
    for inst in list(mixed) + extra:
        base, cnf, det, ordering, sbps = _skeleton_setup(inst.script)
        if len(det.accepted) != 1 or len(sbps) != 1:
            continue
        theta = sbps[0].source.skel
        if len(theta) > 16 or any(theta[theta[v]] != v for v in theta):
            continue  # truncated, or the orbit is not 2-element
        psi_models = enumerate_skeleton_models(base)
        survivors = enumerate_skeleton_models(cnf)
        expected = {x for x in psi_models if lex_leq(x, apply_to_assignment(theta, x), ordering.order)}
        checked += 1
        if survivors != expected:
            violations += 1
    ok = checked >= 50 and violations == 0
    record_criterion(4, ok, f"{checked} single-involution instances, {violations} violations")
    assert ok


def test_criterion_5_pruning(record_criterion):
    corpus = generate_corpus(5, 60, "symmetric-unsat", B)
    plain, sym = [], []
    for inst in corpus:
        rp = solve(inst.script, SolveConfig(mode=Mode.PLAIN, bound=B))
        rs = solve(inst.script, SolveConfig(mode=Mode.SYM, bound=B))
        assert rp.status is Status.UNSAT and rs.status is Status.UNSAT
        plain.append(rp.stats["skeleton_models_tried"])
        sym.append(rs.stats["skeleton_models_tried"])
    fewer = sum(s < p for s, p in zip(sym, plain))
    frac = fewer / len(corpus)
    mp, ms = statistics.median(plain), statistics.median(sym)
    ok = len(corpus) >= 50 and ms <= mp and frac >= 0.30
    record_criterion(5, ok, f"{len(corpus)} instances, median tried sym={ms} plain={mp}, "
                            f"strictly fewer on {frac:.0%}")
    assert ok


def test_criterion_6_hybrid_dominance(record_criterion):
    corpus = generate_corpus(6, 100, "mixed", B)
    report = run_bench([(i.name, i.script) for i in corpus], ("plain", "sym", "hybrid"), 5.0,
                       SolveConfig(bound=B))
    solved = report.solved()
    ok = solved["hybrid"] >= max(solved["plain"], solved["sym"]) - 1
    record_criterion(6, ok, f"solved {solved}, timeouts {report.timeouts()}")
    assert ok


def _random_cnf(rng):
    n = rng.randint(1, 12)
    m = rng.randint(0, 5 * n)
    clauses = []
    for _ in range(m):
        vs = rng.sample(range(1, n + 1), rng.randint(1, min(4, n)))
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return n, clauses


def test_criterion_7_sat_core(record_criterion):
    t0 = time.perf_counter()
    rng = random.Random(77)
    backends = available_backends()
    cases = mismatches = 0
    for _ in range(1000):
        n, clauses = _random_cnf(rng)
        truth = bool(enumerate_models_direct(n, clauses))
        for b in backends:
            r = SatSolver(n, clauses, backend=b).solve()
            good = r.is_sat == truth
            if good and r.is_sat:
                good = all(any(r.model[abs(l) - 1] == (l > 0) for l in c) for c in clauses)
            mismatches += not good
            cases += 1
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 60
    record_criterion(7, ok, f"{cases} solves over backends {backends}, {mismatches} mismatches, {elapsed:.1f}s")
    assert ok


def _graph(n, edges, colors):
    adj = [set() for _ in range(n)]
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    names = sorted(set(colors))
    dense = [names.index(c) for c in colors]
    return ColoredGraph(n, adj, dense, ["operator"] * n, [str(c) for c in names])


def _graph_test_set():
    rng = random.Random(88)
    out = []
    for n in range(1, 9):
        ring = [(i, (i + 1) % n) for i in range(n)] if n > 2 else []
        out.append(_graph(n, [], [0] * n))
        out.append(_graph(n, ring, [0] * n))
        out.append(_graph(n, list(itertools.combinations(range(n), 2)), [0] * n))
    for _ in range(300):
        n = rng.randint(1, 8)
        p = rng.random()
        edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
        colors = [rng.randrange(rng.randint(1, 3)) for _ in range(n)]
        out.append(_graph(n, edges, colors))
    return out


def test_criterion_8_automorphisms(record_criterion):
    graphs = _graph_test_set()
    mismatches = 0
    for g in graphs:
        res = find_automorphism_generators(g, limit=None)
        if not res.complete or closure(res.generators, g.num_vertices) != brute_automorphisms(g):
            mismatches += 1
    ok = mismatches == 0
    record_criterion(8, ok, f"{len(graphs)} graphs with <= 8 vertices, {mismatches} mismatches")
    assert ok


def test_criterion_9_heuristics(mixed, plain_outcomes, record_criterion):
    with_units = structural_bad = 0
    for inst in mixed:
        psi, phi = extract_skeleton(inst.script)
        cnf = to_cnf(psi, len(phi))
        units = {c[0] - 1 for c in cnf.clauses if len(c) == 1 and 0 < c[0] <= len(phi)}
        if not units:
            continue
        with_units += 1
        order = order_variables(cnf, "heuristic").order
        if set(order[:len(units)]) != units:
            structural_bad += 1
    failures = {}
    for ordering, k in itertools.product(("heuristic", "index"), (1, 4, 16)):
        bad = _equisat_mismatches(mixed, plain_outcomes, ordering_mode=ordering, k=k)
        if bad:
            failures[(ordering, k)] = len(bad)
    ok = with_units > 0 and structural_bad == 0 and not failures
    record_criterion(9, ok, f"units-first on {with_units} instances ({structural_bad} bad), "
                            f"6 ordering/k configs, mismatching configs {failures or 'none'}")
    assert ok


def test_criterion_10_theory_sbp(record_criterion):
    named = [("intro", intro()), ("cyclic", cyclic())]
    named += [(i.name, i.script) for i in generate_pure_theory(10, 50, B)]
    checked = mismatches = 0
    for name, s in named:
        psi, phi = extract_skeleton(s)
        det = detect_symmetries(s, psi, phi)
        order = [n for n, _ in s.declarations]
        parts = [build_theory_sbp(t, s.sorts, order) for t in det.accepted if t.theory]
        if not parts:
            continue
        before = brute_force(s, B, cap=0)
        after = brute_force(s, B, cap=0, formula=conjoin([s.assertion] + parts))
        checked += 1
        if before.sat != after.sat or after.count > before.count:
            mismatches += 1
    ok = checked >= 51 and mismatches == 0
    record_criterion(10, ok, f"{checked} instances (intro, cyclic, pure-theory), {mismatches} mismatches")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
