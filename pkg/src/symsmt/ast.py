"""Immutable expression trees for the QF integer-arithmetic fragment.

Terms are integer-valued; formulas are Boolean.  Atoms sit between the two:
an ``Atom`` is a formula whose children are terms.  All nodes are frozen
dataclasses with tuple children, so they hash structurally and can be used
as dictionary keys (atom deduplication relies on this).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, Mapping, Tuple, Union


class Sort(Enum):
    BOOL = "Bool"
    INT = "Int"


class Rel(Enum):
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    EQ = "="
    NEQ = "distinct"


# complement under Boolean negation, sides kept in place
NEGATED_REL = {
    Rel.LT: Rel.GE,
    Rel.LE: Rel.GT,
    Rel.GT: Rel.LE,
    Rel.GE: Rel.LT,
    Rel.EQ: Rel.NEQ,
    Rel.NEQ: Rel.EQ,
}


# --------------------------------------------------------------------- terms


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class IntConst(Term):
    value: int


@dataclass(frozen=True)
class Var(Term):
    name: str
    sort: Sort = Sort.INT


@dataclass(frozen=True)
class Add(Term):
    args: Tuple[Term, ...]


@dataclass(frozen=True)
class Sub(Term):
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Neg(Term):
    arg: Term


@dataclass(frozen=True)
class Mul(Term):
    args: Tuple[Term, ...]


# ------------------------------------------------------------------ formulas


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class BoolConst(Formula):
    value: bool


@dataclass(frozen=True)
class BoolVar(Formula):
    """A declared Bool constant used directly as a proposition."""

    name: str


@dataclass(frozen=True)
class SkelVar(Formula):
    """Reference to a Boolean skeleton variable by dense id."""

    id: int


@dataclass(frozen=True)
class Atom(Formula):
    rel: Rel
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class And(Formula):
    args: Tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    args: Tuple[Formula, ...]


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


TRUE = BoolConst(True)
FALSE = BoolConst(False)

Node = Union[Term, Formula]


@dataclass(frozen=True)
class Script:
    declarations: Tuple[Tuple[str, Sort], ...]
    assertion: Formula
    logic: str | None = None
    info: Tuple[Tuple[str, str], ...] = ()
    source: str | None = field(default=None, compare=False)

    @property
    def sorts(self) -> Dict[str, Sort]:
        return dict(self.declarations)

    def int_vars(self) -> list[str]:
        return [n for n, s in self.declarations if s is Sort.INT]


# ----------------------------------------------------------------- utilities


def children(node: Node) -> Tuple[Node, ...]:
    if isinstance(node, (Add, Mul, And, Or)):
        return node.args
    if isinstance(node, (Sub, Atom)):
        return (node.lhs, node.rhs)
    if isinstance(node, Implies):
        return (node.lhs, node.rhs)
    if isinstance(node, (Neg, Not)):
        return (node.arg,)
    return ()


def walk(node: Node) -> Iterator[Node]:
    """Preorder traversal."""
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(children(n)))


def theory_vars(node: Node) -> set[str]:
    out = set()
    for n in walk(node):
        if isinstance(n, Var):
            out.add(n.name)
        elif isinstance(n, BoolVar):
            out.add(n.name)
    return out


def atoms(node: Node) -> list[Atom]:
    return [n for n in walk(node) if isinstance(n, Atom)]


def rename(node: Node, var_map: Mapping[str, str] = {}, skel_map: Mapping[int, int] = {}) -> Node:
    """Simultaneously substitute theory-variable names and skeleton ids."""
    if isinstance(node, Var):
        return Var(var_map.get(node.name, node.name), node.sort)
    if isinstance(node, BoolVar):
        return BoolVar(var_map.get(node.name, node.name))
    if isinstance(node, SkelVar):
        return SkelVar(skel_map.get(node.id, node.id))
    if isinstance(node, (IntConst, BoolConst)):
        return node
    if isinstance(node, Add):
        return Add(tuple(rename(a, var_map, skel_map) for a in node.args))
    if isinstance(node, Mul):
        return Mul(tuple(rename(a, var_map, skel_map) for a in node.args))
    if isinstance(node, And):
        return And(tuple(rename(a, var_map, skel_map) for a in node.args))
    if isinstance(node, Or):
        return Or(tuple(rename(a, var_map, skel_map) for a in node.args))
    if isinstance(node, Sub):
        return Sub(rename(node.lhs, var_map, skel_map), rename(node.rhs, var_map, skel_map))
    if isinstance(node, Neg):
        return Neg(rename(node.arg, var_map, skel_map))
    if isinstance(node, Not):
        return Not(rename(node.arg, var_map, skel_map))
    if isinstance(node, Implies):
        return Implies(rename(node.lhs, var_map, skel_map), rename(node.rhs, var_map, skel_map))
    if isinstance(node, Atom):
        return Atom(node.rel, rename(node.lhs, var_map, skel_map), rename(node.rhs, var_map, skel_map))
    raise TypeError(f"unexpected node {node!r}")


def conjoin(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return And(tuple(parts))
