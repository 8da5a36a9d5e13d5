"""Boolean skeleton extraction and structural CNF conversion.

Literals in a :class:`Cnf` use the DIMACS convention: skeleton variable ``i``
(0-based id) is the integer ``i + 1`` and its negation ``-(i + 1)``.
"""
from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence, Tuple, Union

from .ast import (
    FALSE, TRUE, NEGATED_REL, And, Atom, BoolConst, BoolVar, Formula, Implies,
    Not, Or, Script, SkelVar, walk,
)
from .normalize import normalize
from .printer import pretty

Entry = Union[Atom, BoolVar]
Clause = List[int]

_LETTERS = string.ascii_uppercase[15:]  # P..Z


@dataclass(frozen=True)
class AtomMap:
    """Bijection between skeleton ids (list positions) and normalized atoms."""

    entries: Tuple[Entry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> Entry:
        return self.entries[i]

    def index(self) -> Dict[Entry, int]:
        return {a: i for i, a in enumerate(self.entries)}

    def labels(self) -> List[str]:
        n = len(self.entries)
        if n <= len(_LETTERS):
            return list(_LETTERS[:n])
        return [f"b{i}" for i in range(n)]

    def describe(self) -> List[str]:
        return [f"{lab} <-> {pretty(a)}" for lab, a in zip(self.labels(), self.entries)]


@dataclass
class Cnf:
    num_vars: int
    clauses: List[Clause]
    num_skeleton: int
    aux: List[int] = field(default_factory=list)

    def copy(self) -> "Cnf":
        return Cnf(self.num_vars, [list(c) for c in self.clauses], self.num_skeleton, list(self.aux))

    def new_var(self) -> int:
        """Allocate an auxiliary variable; returns its DIMACS index."""
        self.num_vars += 1
        self.aux.append(self.num_vars - 1)
        return self.num_vars

    def add(self, clause: Sequence[int]) -> None:
        c = clean_clause(clause)
        if c is not None:
            self.clauses.append(c)


def clean_clause(clause: Sequence[int]) -> Clause | None:
    """Drop duplicate literals; ``None`` for a tautology."""
    seen: Dict[int, None] = {}
    for lit in clause:
        if -lit in seen:
            return None
        seen[lit] = None
    return list(seen)


def extract_skeleton(script: Script) -> Tuple[Formula, AtomMap]:
    """Replace every distinct atom of the normalized assertion by a skeleton variable.

    Ids follow the first occurrence of each (normalized) atom in the assertion
    as written, so labels track the source text.
    """
    omega = normalize(script.assertion)
    present = {n for n in walk(omega) if isinstance(n, (Atom, BoolVar))}
    ids: Dict[Entry, int] = {}
    for n in walk(script.assertion):
        if isinstance(n, (Atom, BoolVar)):
            e = normalize(n)
            if e in present and e not in ids:
                ids[e] = len(ids)

    def sub(f: Formula) -> Formula:
        if isinstance(f, (Atom, BoolVar)):
            return SkelVar(ids[f])
        if isinstance(f, BoolConst):
            return f
        if isinstance(f, And):
            return And(tuple(sub(a) for a in f.args))
        if isinstance(f, Or):
            return Or(tuple(sub(a) for a in f.args))
        if isinstance(f, Not):
            return Not(sub(f.arg))
        if isinstance(f, Implies):
            lhs = sub(f.lhs)
            return Implies(lhs, sub(f.rhs))
        raise TypeError(f"unexpected node in assertion: {f!r}")

    psi = sub(omega)
    return psi, AtomMap(tuple(ids))


def _literal(f: Formula) -> int | None:
    if isinstance(f, SkelVar):
        return f.id + 1
    if isinstance(f, Not) and isinstance(f.arg, SkelVar):
        return -(f.arg.id + 1)
    return None


def _clause_shape(f: Formula) -> Clause | None:
    lit = _literal(f)
    if lit is not None:
        return [lit]
    if isinstance(f, Or):
        lits = [_literal(a) for a in f.args]
        if all(l is not None for l in lits):
            return lits
    return None


def to_cnf(psi: Formula, num_skeleton: int) -> Cnf:
    """Structural (Tseitin) CNF with full biconditional definitions.

    Conjunctions of clause-shaped parts are emitted directly, without
    auxiliaries.
    """
    cnf = Cnf(num_skeleton, [], num_skeleton)
    memo: Dict[Formula, int] = {}

    def enc(f: Formula) -> int:
        lit = _literal(f)
        if lit is not None:
            return lit
        if f in memo:
            return memo[f]
        if isinstance(f, Not):
            out = -enc(f.arg)
        elif isinstance(f, BoolConst):
            t = cnf.new_var()
            cnf.add([t])
            out = t if f.value else -t
        elif isinstance(f, Implies):
            out = enc(Or((Not(f.lhs), f.rhs)))
        elif isinstance(f, (And, Or)):
            kids = [enc(a) for a in f.args]
            a = cnf.new_var()
            sign = 1 if isinstance(f, And) else -1
            # And: a -> k_i, (k_1 & .. & k_n) -> a ; Or is the dual
            for k in kids:
                cnf.add([-sign * a, sign * k])
            cnf.add([sign * a] + [-sign * k for k in kids])
            out = a
        else:
            raise TypeError(f"unexpected node in skeleton: {f!r}")
        memo[f] = out
        return out

    if psi == TRUE:
        return cnf
    if psi == FALSE:
        cnf.clauses.append([])
        return cnf
    for part in (psi.args if isinstance(psi, And) else (psi,)):
        shape = _clause_shape(part)
        if shape is not None:
            cnf.add(shape)
        elif isinstance(part, Or):
            cnf.add([enc(a) for a in part.args])
        else:
            cnf.add([enc(part)])
    return cnf


def negate_entry(e: Entry) -> Formula:
    if isinstance(e, Atom):
        return Atom(NEGATED_REL[e.rel], e.lhs, e.rhs)
    return Not(e)


def assignment_to_literal_conjunction(x: Mapping[int, bool] | Sequence[bool], phi: AtomMap) -> List[Formula]:
    """Signed atoms for a skeleton assignment; false atoms get the complemented relation."""
    return [phi[i] if x[i] else negate_entry(phi[i]) for i in range(len(phi))]
