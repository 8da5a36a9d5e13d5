"""Lazy SMT loops: plain, with skeleton symmetry breaking, and the two-phase hybrid."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Dict, List, Optional

from .ast import Script, Sort
from .oracle import evaluate
from .sat import Outcome as SatOutcome
from .sat import SatSolver
from .sbp import DEFAULT_K, OrderingMode, build_restricted_sbp, order_variables
from .skeleton import Cnf, assignment_to_literal_conjunction, extract_skeleton, to_cnf
from .symgraph import DEFAULT_GENERATOR_LIMIT, DEFAULT_NODE_BUDGET, detect_symmetries
from .theory import DEFAULT_BOUND, Consistency, DomainBound, check_consistency, conflict_clause

SCHEMA_VERSION = 1


class Mode(str, Enum):
    PLAIN = "plain"
    SYM = "sym"
    HYBRID = "hybrid"


class HybridOrder(str, Enum):
    SYM_FIRST = "sym-first"
    PLAIN_FIRST = "plain-first"


class Status(str, Enum):
    SAT = "sat"
    UNSAT = "unsat(bounded)"
    UNKNOWN = "unknown"


@dataclass
class SolveConfig:
    mode: Mode = Mode.SYM
    bound: int = DEFAULT_BOUND
    k: int = DEFAULT_K
    ordering_mode: OrderingMode = OrderingMode.HEURISTIC
    generator_limit: int = DEFAULT_GENERATOR_LIMIT
    node_budget: int = DEFAULT_NODE_BUDGET
    hybrid_budget_t: Optional[float] = None  # seconds; default 25% of total_deadline
    hybrid_order: HybridOrder = HybridOrder.SYM_FIRST
    total_deadline: Optional[float] = 60.0  # seconds
    carry_conflicts: bool = False
    shrink_core: bool = False
    restart_base: int = 0
    sat_backend: Optional[str] = None

    def __post_init__(self):
        self.mode = Mode(self.mode)
        self.ordering_mode = OrderingMode(self.ordering_mode)
        self.hybrid_order = HybridOrder(self.hybrid_order)
        DomainBound(self.bound)
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if (self.mode is Mode.HYBRID and self.hybrid_budget_t is not None
                and self.total_deadline is not None and self.hybrid_budget_t >= self.total_deadline):
            raise ValueError("hybrid budget must be smaller than the total deadline")

    def phase_budget(self) -> Optional[float]:
        if self.hybrid_budget_t is not None:
            return self.hybrid_budget_t
        if self.total_deadline is None:
            return None
        return 0.25 * self.total_deadline

    def echo(self) -> Dict[str, object]:
        d = asdict(self)
        for key, val in d.items():
            if isinstance(val, Enum):
                d[key] = val.value
        return d


@dataclass
class SolveResult:
    status: Status
    model: Optional[Dict[str, object]] = None
    stats: Dict[str, object] = field(default_factory=dict)
    reason: Optional[str] = None
    conflicts: List[List[int]] = field(default_factory=list, repr=False)

    @property
    def decided(self) -> bool:
        return self.status is not Status.UNKNOWN

    def to_json(self, config: SolveConfig | None = None) -> Dict[str, object]:
        out: Dict[str, object] = {
            "schema": SCHEMA_VERSION,
            "status": self.status.value,
            "model": self.model or {},
            "stats": self.stats,
        }
        if self.reason:
            out["reason"] = self.reason
        if config is not None:
            out["config_echo"] = config.echo()
        return out


def _deadline(config: SolveConfig, start: float) -> Optional[float]:
    return None if config.total_deadline is None else start + config.total_deadline


def _expired(deadline: Optional[float]) -> bool:
    return deadline is not None and time.monotonic() >= deadline


def _complete_model(script: Script, theory_model: Dict[str, object]) -> Dict[str, object]:
    out: Dict[str, object] = {}
    for name, sort in script.declarations:
        if name in theory_model:
            out[name] = theory_model[name]
        else:
            out[name] = False if sort is Sort.BOOL else 0
    return out


def _lazy_loop(script: Script, phi, cnf: Cnf, config: SolveConfig, deadline, stats,
               extra_clauses=()) -> SolveResult:
    """Skeleton model -> theory check -> conflict clause, until a model or exhaustion."""
    k = len(phi)
    solver = SatSolver(cnf.num_vars, cnf.clauses, restart_base=config.restart_base,
                       backend=config.sat_backend)
    for c in extra_clauses:
        solver.add_clause(c)
    stats.setdefault("skeleton_models_tried", 0)
    stats.setdefault("conflict_clauses", 0)
    learned: List[List[int]] = []
    int_vars = script.int_vars()
    t_sat = t_theory = 0.0
    result = None
    while result is None:
        if _expired(deadline):
            result = SolveResult(Status.UNKNOWN, reason="timeout")
            break
        t0 = time.perf_counter()
        r = solver.solve(deadline)
        t_sat += time.perf_counter() - t0
        if r.outcome is SatOutcome.CANCELLED:
            result = SolveResult(Status.UNKNOWN, reason="timeout")
            break
        if r.outcome is SatOutcome.UNSAT:
            result = SolveResult(Status.UNSAT)
            break
        x = r.model[:k]
        stats["skeleton_models_tried"] += 1
        lits = assignment_to_literal_conjunction(x, phi)
        t0 = time.perf_counter()
        cr = check_consistency(lits, config.bound, deadline, variables=int_vars,
                               shrink_core=config.shrink_core)
        t_theory += time.perf_counter() - t0
        if cr.outcome is Consistency.CONSISTENT:
            model = _complete_model(script, cr.model)
            if not evaluate(script.assertion, model):
                raise RuntimeError("internal error: theory model does not satisfy the assertion")
            result = SolveResult(Status.SAT, model)
        elif cr.outcome is Consistency.CANCELLED:
            result = SolveResult(Status.UNKNOWN, reason="timeout")
        else:
            clause = conflict_clause(x, cr.core)
            learned.append(clause)
            solver.add_clause(clause)
            stats["conflict_clauses"] += 1
    stats["sat_seconds"] = round(stats.get("sat_seconds", 0.0) + t_sat, 6)
    stats["theory_seconds"] = round(stats.get("theory_seconds", 0.0) + t_theory, 6)
    stats["sat"] = solver.stats()
    result.stats = stats
    result.conflicts = learned
    return result


def _prepare(script: Script):
    # ids follow the source text, so extraction gets the script as written
    psi, phi = extract_skeleton(script)
    cnf = to_cnf(psi, len(phi))
    return script, psi, phi, cnf


def solve_plain(script: Script, config: SolveConfig | None = None, *, deadline=None, extra_clauses=()) -> SolveResult:
    config = config or SolveConfig(mode=Mode.PLAIN)
    start = time.monotonic()
    deadline = _deadline(config, start) if deadline is None else deadline
    script, psi, phi, cnf = _prepare(script)
    stats: Dict[str, object] = {"mode": "plain", "skeleton_vars": len(phi), "skeleton_clauses": len(cnf.clauses)}
    res = _lazy_loop(script, phi, cnf, config, deadline, stats, extra_clauses)
    stats["wall_seconds"] = round(time.monotonic() - start, 6)
    return res


def add_symmetry_breaking(script: Script, psi, phi, cnf: Cnf, config: SolveConfig, deadline=None):
    """Detect symmetries and conjoin their restricted SBPs to ``cnf`` in place.

    Returns ``(detection, ordering, sbps)``.
    """
    detection = detect_symmetries(script, psi, phi, config.generator_limit, config.node_budget, deadline)
    ordering = order_variables(cnf, config.ordering_mode)
    sbps = []
    for theta in detection.accepted:
        if not theta.skeleton_support():
            continue
        sbp = build_restricted_sbp(theta, ordering, config.k, cnf)
        for c in sbp.clauses:
            cnf.add(c)
        sbps.append(sbp)
    return detection, ordering, sbps


def solve_sym(script: Script, config: SolveConfig | None = None, *, deadline=None, extra_clauses=()) -> SolveResult:
    config = config or SolveConfig(mode=Mode.SYM)
    start = time.monotonic()
    deadline = _deadline(config, start) if deadline is None else deadline
    script, psi, phi, cnf = _prepare(script)
    stats: Dict[str, object] = {"mode": "sym", "skeleton_vars": len(phi), "skeleton_clauses": len(cnf.clauses)}
    t0 = time.perf_counter()
    detection, ordering, sbps = add_symmetry_breaking(script, psi, phi, cnf, config, deadline)
    labels = phi.labels()
    stats["symmetry"] = detection.summary()
    stats["symmetries_found"] = detection.generators_found
    stats["symmetries_accepted"] = len(detection.accepted)
    stats["permutations"] = [t.cycles(labels) for t in detection.accepted]
    stats["sbp_clauses"] = sum(len(s.clauses) for s in sbps)
    stats["sbp_aux_vars"] = sum(len(s.new_aux_vars) for s in sbps)
    stats["ordering"] = [labels[v] for v in ordering.order]
    stats["detection_seconds"] = round(time.perf_counter() - t0, 6)
    res = _lazy_loop(script, phi, cnf, config, deadline, stats, extra_clauses)
    stats["wall_seconds"] = round(time.monotonic() - start, 6)
    return res


def solve_hybrid(script: Script, config: SolveConfig | None = None) -> SolveResult:
    """Run one mode under the phase budget, then fall back to the other with the rest."""
    config = config or SolveConfig(mode=Mode.HYBRID)
    start = time.monotonic()
    deadline = _deadline(config, start)
    budget = config.phase_budget()
    phase1_deadline = None if budget is None else start + budget
    if deadline is not None and phase1_deadline is not None:
        phase1_deadline = min(phase1_deadline, deadline)
    first, second = (solve_sym, solve_plain) if config.hybrid_order is HybridOrder.SYM_FIRST else (solve_plain, solve_sym)
    r1 = first(script, config, deadline=phase1_deadline)
    stats: Dict[str, object] = {"mode": "hybrid", "hybrid_order": config.hybrid_order.value,
                                "phase1": r1.stats, "phase_budget_seconds": budget}
    if r1.decided:
        stats["answered_in_phase"] = 1
        stats["wall_seconds"] = round(time.monotonic() - start, 6)
        r1.stats = stats
        return r1
    carry = r1.conflicts if config.carry_conflicts else ()
    r2 = second(script, config, deadline=deadline, extra_clauses=carry)
    stats["phase2"] = r2.stats
    stats["answered_in_phase"] = 2 if r2.decided else None
    stats["wall_seconds"] = round(time.monotonic() - start, 6)
    r2.stats = stats
    return r2


def solve(script: Script, config: SolveConfig | None = None) -> SolveResult:
    config = config or SolveConfig()
    if config.mode is Mode.PLAIN:
        return solve_plain(script, config)
    if config.mode is Mode.SYM:
        return solve_sym(script, config)
    return solve_hybrid(script, config)
