"""Bounded-domain consistency check for conjunctions of integer literals.

Every theory variable ranges over ``[-B, B]``.  A literal set is reduced to
polynomial constraints ``p <= 0``, ``p == 0`` or ``p != 0``; interval
propagation shrinks the box using the linear occurrences, then a depth-first
enumeration with the same propagation at every node decides the rest.
"""
from __future__ import annotations

import time
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .ast import (
    Add, Atom, BoolVar, Formula, IntConst, Mul, Neg, Not, NEGATED_REL, Rel, Sub,
    Term, Var, walk,
)

Monomial = Tuple[Tuple[int, int], ...]  # ((var index, exponent), ...)
Poly = Dict[Monomial, int]

DEFAULT_BOUND = 32


@dataclass(frozen=True)
class DomainBound:
    B: int = DEFAULT_BOUND

    def __post_init__(self):
        if self.B < 1:
            raise ValueError("domain bound must be >= 1")


class Consistency(Enum):
    CONSISTENT = "consistent"
    INCONSISTENT = "inconsistent"
    CANCELLED = "cancelled"


@dataclass
class ConsistencyResult:
    outcome: Consistency
    model: Optional[Dict[str, object]] = None
    core: Optional[List[int]] = None  # indices into the queried literal list
    nodes: int = 0


# ------------------------------------------------------------- polynomials


def term_poly(t: Term, index: Mapping[str, int]) -> Poly:
    if isinstance(t, IntConst):
        return {(): t.value} if t.value else {}
    if isinstance(t, Var):
        return {((index[t.name], 1),): 1}
    if isinstance(t, Neg):
        return {m: -c for m, c in term_poly(t.arg, index).items()}
    if isinstance(t, Sub):
        return _padd(term_poly(t.lhs, index), {m: -c for m, c in term_poly(t.rhs, index).items()})
    if isinstance(t, Add):
        out: Poly = {}
        for a in t.args:
            out = _padd(out, term_poly(a, index))
        return out
    if isinstance(t, Mul):
        out = {(): 1}
        for a in t.args:
            out = _pmul(out, term_poly(a, index))
        return out
    raise TypeError(f"not a term: {t!r}")


def _padd(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for m, c in q.items():
        v = out.get(m, 0) + c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    cnt = Counter(dict(a))
    for v, e in b:
        cnt[v] += e
    return tuple(sorted(cnt.items()))


def _pmul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for ma, ca in p.items():
        for mb, cb in q.items():
            m = _mono_mul(ma, mb)
            v = out.get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


# ---------------------------------------------------------------- intervals


def _pow_iv(lo: int, hi: int, e: int) -> Tuple[int, int]:
    if e == 1:
        return lo, hi
    a, b = lo ** e, hi ** e
    if e % 2:
        return a, b
    if lo >= 0:
        return a, b
    if hi <= 0:
        return b, a
    return 0, max(a, b)


def _mono_iv(m: Monomial, box) -> Tuple[int, int]:
    lo, hi = 1, 1
    for v, e in m:
        a, b = _pow_iv(box[v][0], box[v][1], e)
        cands = (lo * a, lo * b, hi * a, hi * b)
        lo, hi = min(cands), max(cands)
    return lo, hi


class _Constraint:
    __slots__ = ("kind", "terms", "const", "vars", "linear")

    def __init__(self, kind: str, poly: Poly):
        self.kind = kind  # "le" | "eq" | "ne"
        self.const = poly.get((), 0)
        self.terms = [(c, m) for m, c in sorted(poly.items()) if m]
        occ = Counter(v for _, m in self.terms for v, _ in m)
        self.vars = sorted(occ)
        # variables occurring exactly once, with exponent 1, alone in their monomial
        self.linear = {m[0][0]: c for c, m in self.terms
                       if len(m) == 1 and m[0][1] == 1 and occ[m[0][0]] == 1}

    def range(self, box) -> Tuple[int, int]:
        lo = hi = self.const
        for c, m in self.terms:
            a, b = _mono_iv(m, box)
            if c > 0:
                lo += c * a
                hi += c * b
            else:
                lo += c * b
                hi += c * a
        return lo, hi


def _literal_constraint(lit: Formula, index) -> Tuple[str, Poly]:
    positive = True
    while isinstance(lit, Not):
        positive = not positive
        lit = lit.arg
    if not isinstance(lit, Atom):
        raise TypeError(f"not an arithmetic literal: {lit!r}")
    rel = lit.rel if positive else NEGATED_REL[lit.rel]
    a, b = term_poly(lit.lhs, index), term_poly(lit.rhs, index)
    neg = lambda p: {m: -c for m, c in p.items()}
    if rel is Rel.LT:
        return "le", _padd(_padd(a, neg(b)), {(): 1})
    if rel is Rel.LE:
        return "le", _padd(a, neg(b))
    if rel is Rel.GT:
        return "le", _padd(_padd(b, neg(a)), {(): 1})
    if rel is Rel.GE:
        return "le", _padd(b, neg(a))
    if rel is Rel.EQ:
        return "eq", _padd(a, neg(b))
    return "ne", _padd(a, neg(b))


def _bool_literal(lit: Formula) -> Tuple[str, bool] | None:
    positive = True
    while isinstance(lit, Not):
        positive = not positive
        lit = lit.arg
    if isinstance(lit, BoolVar):
        return lit.name, positive
    return None


class _Cancelled(Exception):
    pass


class _Search:
    def __init__(self, cons: List[_Constraint], nvars: int, B: int, deadline):
        self.cons = cons
        self.B = B
        self.deadline = deadline
        self.nodes = 0
        self.watch = defaultdict(list)
        for ci, c in enumerate(cons):
            for v in c.vars:
                self.watch[v].append(ci)
        self.nvars = nvars

    def propagate(self, box, dirty) -> bool:
        """Shrink ``box`` in place to a fixpoint; False on wipe-out."""
        cons, watch = self.cons, self.watch
        queue = list(dict.fromkeys(dirty))
        queued = set(queue)
        while queue:
            ci = queue.pop()
            queued.discard(ci)
            c = cons[ci]
            lo, hi = c.range(box)
            if c.kind == "le":
                if lo > 0:
                    return False
                if hi <= 0:
                    continue
                sides = ((1, lo),)
            elif c.kind == "eq":
                if lo > 0 or hi < 0:
                    return False
                if lo == hi == 0:
                    continue
                sides = ((1, lo), (-1, -hi))
            else:
                if lo == hi == 0:
                    return False
                continue
            for sgn, smin in sides:
                # sgn * p <= 0, smin = min(sgn * p) over the box
                for v, coef in c.linear.items():
                    k = sgn * coef
                    vlo, vhi = box[v]
                    # min of the rest = smin - min(k * x)
                    rest_min = smin - (k * vlo if k > 0 else k * vhi)
                    rhs = -rest_min
                    if k > 0:
                        nhi = rhs // k
                        if nhi < vhi:
                            if nhi < vlo:
                                return False
                            box[v] = (vlo, nhi)
                            self._requeue(v, ci, queue, queued)
                    else:
                        nlo = -(rhs // -k)
                        if nlo > vlo:
                            if nlo > vhi:
                                return False
                            box[v] = (nlo, vhi)
                            self._requeue(v, ci, queue, queued)
                    smin = self._smin(c, sgn, box)
        return True

    def _smin(self, c, sgn, box):
        lo, hi = c.range(box)
        return lo if sgn > 0 else -hi

    def _requeue(self, v, ci, queue, queued):
        for cj in self.watch[v]:
            if cj not in queued:
                queued.add(cj)
                queue.append(cj)
        if ci not in queued:
            queued.add(ci)
            queue.append(ci)

    def dfs(self, box, dirty):
        self.nodes += 1
        if self.deadline is not None and self.nodes % 64 == 0 and time.monotonic() >= self.deadline:
            raise _Cancelled
        if not self.propagate(box, dirty):
            return None
        pick, width = -1, None
        for v in range(self.nvars):
            lo, hi = box[v]
            if lo != hi and self.watch[v] and (width is None or hi - lo < width):
                pick, width = v, hi - lo
        if pick < 0:
            vals = [box[v][0] if self.watch[v] else _near_zero(box[v]) for v in range(self.nvars)]
            for c in self.cons:
                lo, hi = c.range([(x, x) for x in vals])
                if not _holds(c.kind, lo):
                    return None
            return vals
        lo, hi = box[pick]
        for val in range(lo, hi + 1):
            child = list(box)
            child[pick] = (val, val)
            found = self.dfs(child, self.watch[pick])
            if found is not None:
                return found
        return None


def _near_zero(iv):
    lo, hi = iv
    return min(max(0, lo), hi)


def _holds(kind: str, value: int) -> bool:
    if kind == "le":
        return value <= 0
    if kind == "eq":
        return value == 0
    return value != 0


def _decide(lits: Sequence[Formula], variables: Sequence[str], B: int, deadline):
    """Core decision; returns (outcome, model or None, nodes)."""
    bools: Dict[str, bool] = {}
    arith = []
    for lit in lits:
        b = _bool_literal(lit)
        if b is not None:
            name, val = b
            if bools.setdefault(name, val) != val:
                return Consistency.INCONSISTENT, None, 0
        else:
            arith.append(lit)
    index = {name: i for i, name in enumerate(variables)}
    cons = [_Constraint(*_literal_constraint(l, index)) for l in arith]
    search = _Search(cons, len(variables), B, deadline)
    box = [(-B, B)] * len(variables)
    try:
        vals = search.dfs(box, range(len(cons)))
    except _Cancelled:
        return Consistency.CANCELLED, None, search.nodes
    if vals is None:
        return Consistency.INCONSISTENT, None, search.nodes
    model: Dict[str, object] = dict(zip(variables, vals))
    model.update(bools)
    return Consistency.CONSISTENT, model, search.nodes


def _int_vars_of(lits) -> List[str]:
    names: Dict[str, None] = {}
    for lit in lits:
        for n in walk(lit):
            if isinstance(n, Var):
                names.setdefault(n.name, None)
    return list(names)


def check_consistency(
    literals: Sequence[Formula],
    bound: DomainBound | int = DEFAULT_BOUND,
    deadline: float | None = None,
    variables: Sequence[str] | None = None,
    shrink_core: bool = False,
) -> ConsistencyResult:
    """Decide whether some point of ``[-B, B]^n`` satisfies every literal.

    ``variables`` lists the Int variables to value in the model (declaration
    order); it defaults to those occurring in the literals.  The core of an
    inconsistent answer is the whole literal set unless ``shrink_core``.
    """
    B = bound.B if isinstance(bound, DomainBound) else int(bound)
    occurring = _int_vars_of(literals)
    if variables is None:
        variables = occurring
    else:
        variables = list(variables) + [v for v in occurring if v not in set(variables)]
    outcome, model, nodes = _decide(literals, variables, B, deadline)
    if outcome is Consistency.CONSISTENT:
        return ConsistencyResult(outcome, model, None, nodes)
    if outcome is Consistency.CANCELLED:
        return ConsistencyResult(outcome, None, None, nodes)
    core = list(range(len(literals)))
    if shrink_core:
        i = 0
        while i < len(core):
            trial = core[:i] + core[i + 1:]
            sub = [literals[j] for j in trial]
            res, _, n = _decide(sub, _int_vars_of(sub), B, deadline)
            nodes += n
            if res is Consistency.CANCELLED:
                break
            if res is Consistency.INCONSISTENT:
                core = trial
            else:
                i += 1
    return ConsistencyResult(outcome, None, core, nodes)


def conflict_clause(x: Sequence[bool] | Mapping[int, bool], core_vars: Sequence[int]) -> List[int]:
    """DIMACS clause blocking every assignment that agrees with ``x`` on ``core_vars``."""
    return [-(v + 1) if x[v] else (v + 1) for v in core_vars]
