"""Canonical form for terms and formulas.

Two formulas that differ only by argument order of commutative operators,
by nesting of associative ones, or by ``>``/``>=`` versus swapped ``<``/``<=``
normalize to the same tree.  Symmetry verification compares normalized trees
for exact equality, so this function must be deterministic and idempotent.
"""
from __future__ import annotations

from functools import lru_cache

from .ast import (
    FALSE, TRUE, Add, And, Atom, BoolConst, BoolVar, Formula, Implies, IntConst,
    Mul, Neg, Node, Not, Or, Rel, Script, SkelVar, Sub, Term, Var,
)
from .printer import key

_SWAP = {Rel.GT: Rel.LT, Rel.GE: Rel.LE}
_GROUND = {
    Rel.LT: lambda a, b: a < b,
    Rel.LE: lambda a, b: a <= b,
    Rel.EQ: lambda a, b: a == b,
    Rel.NEQ: lambda a, b: a != b,
}


@lru_cache(maxsize=1 << 16)
def normalize_term(t: Term) -> Term:
    if isinstance(t, (IntConst, Var)):
        return t
    if isinstance(t, Sub):
        return normalize_term(Add((t.lhs, Neg(t.rhs))))
    if isinstance(t, Neg):
        a = normalize_term(t.arg)
        if isinstance(a, IntConst):
            return IntConst(-a.value)
        if isinstance(a, Neg):
            return a.arg
        return Neg(a)
    if isinstance(t, Add):
        const, rest = 0, []
        for a in _flatten(Add, (normalize_term(x) for x in t.args)):
            if isinstance(a, IntConst):
                const += a.value
            else:
                rest.append(a)
        if const != 0 or not rest:
            rest.append(IntConst(const))
        return rest[0] if len(rest) == 1 else Add(tuple(sorted(rest, key=key)))
    if isinstance(t, Mul):
        const, rest = 1, []
        for a in _flatten(Mul, (normalize_term(x) for x in t.args)):
            if isinstance(a, IntConst):
                const *= a.value
            else:
                rest.append(a)
        if const == 0:
            return IntConst(0)
        if const != 1 or not rest:
            rest.append(IntConst(const))
        return rest[0] if len(rest) == 1 else Mul(tuple(sorted(rest, key=key)))
    raise TypeError(f"not a term: {t!r}")


def _flatten(cls, items):
    for a in items:
        if isinstance(a, cls):
            yield from a.args
        else:
            yield a


def normalize_atom(a: Atom) -> Formula:
    lhs, rhs = normalize_term(a.lhs), normalize_term(a.rhs)
    rel = a.rel
    if rel in _SWAP:
        rel, lhs, rhs = _SWAP[rel], rhs, lhs
    elif rel in (Rel.EQ, Rel.NEQ) and key(rhs) < key(lhs):
        lhs, rhs = rhs, lhs
    if isinstance(lhs, IntConst) and isinstance(rhs, IntConst):
        return BoolConst(_GROUND[rel](lhs.value, rhs.value))
    return Atom(rel, lhs, rhs)


@lru_cache(maxsize=1 << 16)
def normalize(f: Node) -> Node:
    """Return the canonical form of a formula (or term)."""
    if isinstance(f, Term):
        return normalize_term(f)
    if isinstance(f, (BoolConst, BoolVar, SkelVar)):
        return f
    if isinstance(f, Atom):
        return normalize_atom(f)
    if isinstance(f, Not):
        a = normalize(f.arg)
        if isinstance(a, BoolConst):
            return BoolConst(not a.value)
        if isinstance(a, Not):
            return a.arg
        return Not(a)
    if isinstance(f, Implies):
        lhs, rhs = normalize(f.lhs), normalize(f.rhs)
        if lhs == FALSE or rhs == TRUE:
            return TRUE
        if lhs == TRUE:
            return rhs
        if rhs == FALSE:
            return normalize(Not(lhs))
        return Implies(lhs, rhs)
    if isinstance(f, (And, Or)):
        cls = type(f)
        unit, zero = (TRUE, FALSE) if cls is And else (FALSE, TRUE)
        seen = {}
        for a in _flatten(cls, (normalize(x) for x in f.args)):
            if a == zero:
                return zero
            if a != unit:
                seen.setdefault(key(a), a)
        if not seen:
            return unit
        if len(seen) == 1:
            return next(iter(seen.values()))
        return cls(tuple(seen[k] for k in sorted(seen)))
    raise TypeError(f"not a formula: {f!r}")


def normalize_script(s: Script) -> Script:
    return Script(s.declarations, normalize(s.assertion), s.logic, s.info, s.source)
