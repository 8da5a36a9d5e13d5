"""Symmetry breaking predicates.

The restricted (skeleton-only) predicate for a symmetry ``theta`` under a
variable ordering ``Y1 < Y2 < ...`` is the lex-leader chain

    AND_i ( AND_{j<i} Yj = theta(Yj) )  =>  ( Yi => theta(Yi) )

with false < true.  It is encoded in CNF with one chain variable per
non-trivial step.  Steps whose equality is already implied by the prefix
(e.g. the second half of a transposition) are skipped, so ``(Q R)`` yields the
single clause ``-Q | R``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence

from .ast import TRUE, And, Atom, BoolVar, Formula, Implies, Rel, Sort, Var, conjoin
from .errors import SortMismatch
from .skeleton import Cnf
from .symgraph import Permutation

DEFAULT_K = 16


class OrderingMode(str, Enum):
    HEURISTIC = "heuristic"
    INDEX = "index"


@dataclass(frozen=True)
class VariableOrdering:
    order: tuple  # skeleton ids, earliest first

    @property
    def rank(self) -> Dict[int, int]:
        return {v: r for r, v in enumerate(self.order)}


def order_variables(cnf: Cnf, mode: OrderingMode | str = OrderingMode.HEURISTIC) -> VariableOrdering:
    """Positive unit skeleton variables first (by id), then the rest by id."""
    n = cnf.num_skeleton
    if OrderingMode(mode) is OrderingMode.INDEX:
        return VariableOrdering(tuple(range(n)))
    units = sorted({c[0] - 1 for c in cnf.clauses if len(c) == 1 and 0 < c[0] <= n})
    rest = [v for v in range(n) if v not in set(units)]
    return VariableOrdering(tuple(units + rest))


def truncate_support(theta: Permutation, ordering: VariableOrdering, k: int = DEFAULT_K) -> List[int]:
    """Skeleton support of ``theta`` in ordering order, cut to its first ``k`` elements."""
    if k < 1:
        raise ValueError("k must be >= 1")
    rank = ordering.rank
    return sorted(theta.skeleton_support(), key=rank.__getitem__)[:k]


@dataclass
class SbpClauses:
    clauses: List[List[int]]
    new_aux_vars: List[int]
    source: Optional[Permutation] = None
    truncation_k: int = DEFAULT_K
    support: List[int] = field(default_factory=list)


class _UnionFind:
    def __init__(self):
        self.parent: Dict[int, int] = {}

    def find(self, a: int) -> int:
        p = self.parent.setdefault(a, a)
        if p != a:
            p = self.parent[a] = self.find(p)
        return p

    def union(self, a: int, b: int) -> None:
        self.parent[self.find(a)] = self.find(b)


def build_restricted_sbp(theta: Permutation, ordering: VariableOrdering, k: int = DEFAULT_K,
                         fresh_var_source: Cnf | None = None) -> SbpClauses:
    """CNF for the lex-leader constraint over the (truncated) skeleton support of ``theta``.

    Chain variables are allocated from ``fresh_var_source`` (a Cnf whose
    ``new_var`` is called); clauses are returned, not added.
    """
    support = truncate_support(theta, ordering, k)
    out = SbpClauses([], [], theta, k, support)
    if not support:
        return out
    tmap = theta.skel
    uf = _UnionFind()
    steps = []
    for y in support:
        ty = tmap[y]
        if uf.find(y) != uf.find(ty):
            steps.append((y, ty))
        uf.union(y, ty)

    prev: Optional[int] = None  # chain literal; None means "true"
    for idx, (y, ty) in enumerate(steps):
        Y, TY = y + 1, ty + 1
        guard = [] if prev is None else [-prev]
        out.clauses.append(guard + [-Y, TY])
        if idx == len(steps) - 1:
            break
        if fresh_var_source is None:
            raise ValueError("a fresh variable source is needed for multi-step predicates")
        e = fresh_var_source.new_var()
        out.new_aux_vars.append(e - 1)
        # e <-> prev & (Y <-> TY)
        if prev is not None:
            out.clauses.append([-e, prev])
        out.clauses.append([-e, -Y, TY])
        out.clauses.append([-e, Y, -TY])
        out.clauses.append(guard + [-Y, -TY, e])
        out.clauses.append(guard + [Y, TY, e])
        prev = e
    return out


def eval_restricted_sbp(theta: Permutation, order: Sequence[int], x: Sequence[bool]) -> bool:
    """Direct evaluation of the lex-leader formula over ``order`` (test oracle)."""
    tmap = theta.skel
    for i, y in enumerate(order):
        prefix_equal = all(x[z] == x[tmap.get(z, z)] for z in order[:i])
        if prefix_equal and x[y] and not x[tmap.get(y, y)]:
            return False
    return True


def build_theory_sbp(theta: Permutation, sorts: Dict[str, Sort], declaration_order: Sequence[str]) -> Formula:
    """Lex-leader constraint over theory variables, integer order (false < true for Bool).

    Returns an ordinary formula; prefix equalities are emitted unsimplified.
    """
    tmap = theta.theory
    for a, b in tmap.items():
        if sorts[a] is not sorts[b]:
            raise SortMismatch(f"{a} ({sorts[a].value}) mapped to {b} ({sorts[b].value})")
    support = [v for v in declaration_order if v in tmap]
    if not support:
        return TRUE

    def ref(name):
        return BoolVar(name) if sorts[name] is Sort.BOOL else Var(name, Sort.INT)

    def leq(a, b) -> Formula:
        if sorts[a] is Sort.BOOL:
            return Implies(ref(a), ref(b))
        return Atom(Rel.LE, ref(a), ref(b))

    def eq(a, b) -> Formula:
        if sorts[a] is Sort.BOOL:
            return And((Implies(ref(a), ref(b)), Implies(ref(b), ref(a))))
        return Atom(Rel.EQ, ref(a), ref(b))

    parts = []
    for i, y in enumerate(support):
        body = leq(y, tmap[y])
        if i == 0:
            parts.append(body)
        else:
            parts.append(Implies(conjoin(eq(z, tmap[z]) for z in support[:i]), body))
    return conjoin(parts)
