"""Independent brute-force decision procedures used to check the solver.

Nothing here goes through the skeleton, symmetry or SAT machinery except
:func:`enumerate_skeleton_models`, which is itself cross-checked against
direct truth-table evaluation (:func:`enumerate_models_direct`).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Sequence, Set, Tuple

import numpy as np

from .ast import (
    Add, And, Atom, BoolConst, BoolVar, Formula, Implies, IntConst, Mul, Neg, Node,
    Not, Or, Rel, Script, Sort, Sub, Var,
)
from .errors import ResourceExceeded
from .skeleton import Cnf

GRID_CAP = 10 ** 7
MODEL_CAP = 10 ** 5
_CHUNK = 1 << 18


# ------------------------------------------------------------ exact evaluator


def eval_term(t, model: Mapping[str, int]) -> int:
    if isinstance(t, IntConst):
        return t.value
    if isinstance(t, Var):
        return model[t.name]
    if isinstance(t, Add):
        return sum(eval_term(a, model) for a in t.args)
    if isinstance(t, Mul):
        out = 1
        for a in t.args:
            out *= eval_term(a, model)
        return out
    if isinstance(t, Sub):
        return eval_term(t.lhs, model) - eval_term(t.rhs, model)
    if isinstance(t, Neg):
        return -eval_term(t.arg, model)
    raise TypeError(f"not a term: {t!r}")


_REL = {
    Rel.LT: lambda a, b: a < b,
    Rel.LE: lambda a, b: a <= b,
    Rel.GT: lambda a, b: a > b,
    Rel.GE: lambda a, b: a >= b,
    Rel.EQ: lambda a, b: a == b,
    Rel.NEQ: lambda a, b: a != b,
}


def evaluate(f: Formula, model: Mapping[str, object]) -> bool:
    """Truth value of ``f`` under a total model, with exact integer arithmetic."""
    if isinstance(f, BoolConst):
        return f.value
    if isinstance(f, BoolVar):
        return bool(model[f.name])
    if isinstance(f, Atom):
        return _REL[f.rel](eval_term(f.lhs, model), eval_term(f.rhs, model))
    if isinstance(f, And):
        return all(evaluate(a, model) for a in f.args)
    if isinstance(f, Or):
        return any(evaluate(a, model) for a in f.args)
    if isinstance(f, Not):
        return not evaluate(f.arg, model)
    if isinstance(f, Implies):
        return (not evaluate(f.lhs, model)) or evaluate(f.rhs, model)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------- grid brute force


def _magnitude(t, B: int) -> int:
    if isinstance(t, IntConst):
        return abs(t.value)
    if isinstance(t, Var):
        return B
    if isinstance(t, Add):
        return sum(_magnitude(a, B) for a in t.args)
    if isinstance(t, Mul):
        out = 1
        for a in t.args:
            out *= _magnitude(a, B)
        return out
    if isinstance(t, Sub):
        return _magnitude(t.lhs, B) + _magnitude(t.rhs, B)
    if isinstance(t, Neg):
        return _magnitude(t.arg, B)
    return 0


def _max_magnitude(f: Node, B: int) -> int:
    if isinstance(f, Atom):
        return _magnitude(f.lhs, B) + _magnitude(f.rhs, B)
    if isinstance(f, (And, Or)):
        return max((_max_magnitude(a, B) for a in f.args), default=0)
    if isinstance(f, Not):
        return _max_magnitude(f.arg, B)
    if isinstance(f, Implies):
        return max(_max_magnitude(f.lhs, B), _max_magnitude(f.rhs, B))
    return 0


def _vec_term(t, env, n):
    if isinstance(t, IntConst):
        return t.value
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Add):
        out = 0
        for a in t.args:
            out = out + _vec_term(a, env, n)
        return out
    if isinstance(t, Mul):
        out = 1
        for a in t.args:
            out = out * _vec_term(a, env, n)
        return out
    if isinstance(t, Sub):
        return _vec_term(t.lhs, env, n) - _vec_term(t.rhs, env, n)
    if isinstance(t, Neg):
        return -_vec_term(t.arg, env, n)
    raise TypeError(f"not a term: {t!r}")


_VREL = {
    Rel.LT: np.less, Rel.LE: np.less_equal, Rel.GT: np.greater,
    Rel.GE: np.greater_equal, Rel.EQ: np.equal, Rel.NEQ: np.not_equal,
}


def _vec_formula(f, env, n):
    if isinstance(f, BoolConst):
        return np.full(n, f.value)
    if isinstance(f, BoolVar):
        return env[f.name].astype(bool)
    if isinstance(f, Atom):
        a, b = _vec_term(f.lhs, env, n), _vec_term(f.rhs, env, n)
        return np.broadcast_to(_VREL[f.rel](a, b), (n,))
    if isinstance(f, And):
        out = np.ones(n, dtype=bool)
        for a in f.args:
            out &= _vec_formula(a, env, n)
        return out
    if isinstance(f, Or):
        out = np.zeros(n, dtype=bool)
        for a in f.args:
            out |= _vec_formula(a, env, n)
        return out
    if isinstance(f, Not):
        return ~_vec_formula(f.arg, env, n)
    if isinstance(f, Implies):
        return ~_vec_formula(f.lhs, env, n) | _vec_formula(f.rhs, env, n)
    raise TypeError(f"not a formula: {f!r}")


@dataclass
class OracleResult:
    sat: bool
    count: int
    models: List[Dict[str, object]] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "sat" if self.sat else "unsat(bounded)"


def brute_force(script: Script, bound, cap: int = MODEL_CAP, grid_cap: int = GRID_CAP,
                formula: Formula | None = None) -> OracleResult:
    """Evaluate the assertion at every point of ``[-B, B]^n``.

    Returns the exact model count and the first ``cap`` models in grid order.
    ``formula`` overrides the script's assertion (declarations are kept).
    """
    B = getattr(bound, "B", bound)
    f = script.assertion if formula is None else formula
    names = [n for n, _ in script.declarations]
    bases = [2 * B + 1 if s is Sort.INT else 2 for _, s in script.declarations]
    offsets = [B if s is Sort.INT else 0 for _, s in script.declarations]
    total = 1
    for b in bases:
        total *= b
    if total > grid_cap:
        raise ResourceExceeded(f"grid of {total} points exceeds cap {grid_cap}")
    dtype = object if _max_magnitude(f, B) >= 2 ** 62 else np.int64
    count = 0
    models: List[Dict[str, object]] = []
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        n = len(idx)
        env = {}
        rem = idx
        for name, base, off in reversed(list(zip(names, bases, offsets))):
            env[name] = (rem % base - off).astype(dtype)
            rem = rem // base
        mask = _vec_formula(f, env, n)
        hits = np.flatnonzero(mask)
        count += len(hits)
        for h in hits[: max(0, cap - len(models))]:
            models.append({k: (bool(env[k][h]) if sort is Sort.BOOL else int(env[k][h]))
                           for k, sort in script.declarations})
    return OracleResult(count > 0, count, models)


# ------------------------------------------------------------ skeleton models


def enumerate_skeleton_models(cnf: Cnf, cap: int = 1 << 20, **solver_kw) -> Set[Tuple[bool, ...]]:
    """All models projected onto the skeleton variables, via blocking clauses."""
    from .sat import SatSolver

    k = cnf.num_skeleton
    if k > 20:
        raise ResourceExceeded(f"{k} skeleton variables exceeds the enumeration limit")
    solver = SatSolver(cnf.num_vars, cnf.clauses, **solver_kw)
    out: Set[Tuple[bool, ...]] = set()
    while True:
        res = solver.solve()
        if not res.is_sat:
            return out
        proj = tuple(res.model[:k])
        out.add(proj)
        if len(out) > cap:
            raise ResourceExceeded("model cap exceeded")
        if k == 0:
            return out
        solver.add_clause([-(v + 1) if proj[v] else (v + 1) for v in range(k)])


def enumerate_models_direct(num_vars: int, clauses: Sequence[Sequence[int]], project: int | None = None) -> Set[Tuple[bool, ...]]:
    """Truth-table enumeration of a CNF (vectorized), projected onto the first ``project`` vars."""
    if num_vars > 22:
        raise ResourceExceeded("too many variables for direct enumeration")
    project = num_vars if project is None else project
    n = 1 << num_vars
    idx = np.arange(n, dtype=np.int64)
    bits = [((idx >> v) & 1).astype(bool) for v in range(num_vars)]
    ok = np.ones(n, dtype=bool)
    for clause in clauses:
        sat = np.zeros(n, dtype=bool)
        for lit in clause:
            sat |= bits[abs(lit) - 1] if lit > 0 else ~bits[abs(lit) - 1]
        ok &= sat
    out = set()
    for h in np.flatnonzero(ok):
        out.add(tuple(bool((h >> v) & 1) for v in range(project)))
    return out


# ---------------------------------------------------------------- orbits


def apply_to_assignment(skel_map: Mapping[int, int], x: Sequence[bool]) -> Tuple[bool, ...]:
    """``y(v) = x(theta(v))`` -- the assignment compared against ``x`` by the lex-leader SBP."""
    return tuple(x[skel_map.get(v, v)] for v in range(len(x)))


def lex_leq(a: Sequence[bool], b: Sequence[bool], order: Sequence[int]) -> bool:
    """Lexicographic ``a <= b`` along ``order`` with false < true."""
    for v in order:
        if a[v] != b[v]:
            return not a[v]
    return True


@dataclass
class OrbitReport:
    orbits: int
    survivors: int
    pruned: int
    empty_orbits: List[List[Tuple[bool, ...]]]

    @property
    def ok(self) -> bool:
        return not self.empty_orbits


def orbits(models: Iterable[Tuple[bool, ...]], generators: Sequence[Mapping[int, int]]) -> List[List[Tuple[bool, ...]]]:
    todo = sorted(set(models))
    seen: Set[Tuple[bool, ...]] = set()
    out = []
    for m in todo:
        if m in seen:
            continue
        orbit = [m]
        seen.add(m)
        frontier = [m]
        while frontier:
            cur = frontier.pop()
            for g in generators:
                nxt = apply_to_assignment(g, cur)
                if nxt not in seen:
                    seen.add(nxt)
                    orbit.append(nxt)
                    frontier.append(nxt)
        out.append(sorted(orbit))
    return out


def orbit_coverage(psi_models, sbp_models, generators: Sequence[Mapping[int, int]]) -> OrbitReport:
    """Check that every orbit of ``psi_models`` keeps at least one survivor in ``sbp_models``."""
    psi_models, sbp_models = set(psi_models), set(sbp_models)
    orbs = orbits(psi_models, generators)
    empty = [o for o in orbs if not any(m in sbp_models for m in o)]
    survivors = len(psi_models & sbp_models)
    return OrbitReport(len(orbs), survivors, len(psi_models) - survivors, empty)
