"""SMT-LIB rendering of terms, formulas and scripts."""
from __future__ import annotations

from functools import lru_cache
from typing import Callable, Mapping

from .ast import (
    Add, And, Atom, BoolConst, BoolVar, Formula, Implies, IntConst, Mul, Neg,
    Node, Not, Or, Rel, Script, SkelVar, Sub, Var,
)


def _default_skel_name(i: int) -> str:
    return f"b{i}"


def to_sexpr(node: Node, skel_name: Callable[[int], str] = _default_skel_name) -> str:
    if isinstance(node, IntConst):
        return str(node.value) if node.value >= 0 else f"(- {-node.value})"
    if isinstance(node, (Var, BoolVar)):
        return _quote(node.name)
    if isinstance(node, SkelVar):
        return skel_name(node.id)
    if isinstance(node, BoolConst):
        return "true" if node.value else "false"
    if isinstance(node, Add):
        return "(+ " + " ".join(to_sexpr(a, skel_name) for a in node.args) + ")"
    if isinstance(node, Mul):
        return "(* " + " ".join(to_sexpr(a, skel_name) for a in node.args) + ")"
    if isinstance(node, Sub):
        return f"(- {to_sexpr(node.lhs, skel_name)} {to_sexpr(node.rhs, skel_name)})"
    if isinstance(node, Neg):
        return f"(- {to_sexpr(node.arg, skel_name)})"
    if isinstance(node, Atom):
        return f"({node.rel.value} {to_sexpr(node.lhs, skel_name)} {to_sexpr(node.rhs, skel_name)})"
    if isinstance(node, And):
        return "(and " + " ".join(to_sexpr(a, skel_name) for a in node.args) + ")"
    if isinstance(node, Or):
        return "(or " + " ".join(to_sexpr(a, skel_name) for a in node.args) + ")"
    if isinstance(node, Not):
        return f"(not {to_sexpr(node.arg, skel_name)})"
    if isinstance(node, Implies):
        return f"(=> {to_sexpr(node.lhs, skel_name)} {to_sexpr(node.rhs, skel_name)})"
    raise TypeError(f"cannot render {node!r}")


@lru_cache(maxsize=1 << 16)
def key(node: Node) -> str:
    """Deterministic serialization used as the canonical ordering key."""
    return to_sexpr(node, _key_skel_name)


def _key_skel_name(i: int) -> str:
    return f"#{i}"


def _quote(name: str) -> str:
    if name and all(c.isalnum() or c in "~!@$%^&*_-+=<>.?/" for c in name) and not name[0].isdigit():
        return name
    return f"|{name}|"


def serialize(obj, skel_name: Callable[[int], str] = _default_skel_name) -> str:
    """Render a Script as SMT-LIB text (one command per line) or a node as an s-expression."""
    if not isinstance(obj, Script):
        return to_sexpr(obj, skel_name)
    lines = []
    if obj.logic:
        lines.append(f"(set-logic {obj.logic})")
    for k, v in obj.info:
        lines.append(f"(set-info {k} {v})" if v else f"(set-info {k})")
    for name, sort in obj.declarations:
        lines.append(f"(declare-const {_quote(name)} {sort.value})")
    a = obj.assertion
    # a one-argument conjunction has to stay wrapped or it would re-parse as its argument
    conjuncts = a.args if isinstance(a, And) and len(a.args) > 1 else (a,)
    for c in conjuncts:
        lines.append(f"(assert {to_sexpr(c)})")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


def pretty(node: Node, labels: Mapping[int, str] | None = None) -> str:
    """Infix rendering for logs and CLI output."""
    name = (lambda i: labels[i]) if labels else _default_skel_name
    if isinstance(node, Atom):
        op = {Rel.NEQ: "!=", Rel.EQ: "="}.get(node.rel, node.rel.value)
        return f"({pretty(node.lhs)} {op} {pretty(node.rhs)})"
    if isinstance(node, Add):
        return "(" + " + ".join(pretty(a) for a in node.args) + ")"
    if isinstance(node, Mul):
        return "*".join(pretty(a) for a in node.args)
    if isinstance(node, Sub):
        return f"({pretty(node.lhs)} - {pretty(node.rhs)})"
    if isinstance(node, Neg):
        return f"-{pretty(node.arg)}"
    if isinstance(node, IntConst):
        return str(node.value)
    if isinstance(node, (Var, BoolVar)):
        return node.name
    if isinstance(node, SkelVar):
        return name(node.id)
    if isinstance(node, BoolConst):
        return "true" if node.value else "false"
    if isinstance(node, And):
        return "(" + " & ".join(pretty(a, labels) for a in node.args) + ")"
    if isinstance(node, Or):
        return "(" + " | ".join(pretty(a, labels) for a in node.args) + ")"
    if isinstance(node, Not):
        return "~" + pretty(node.arg, labels)
    if isinstance(node, Implies):
        return f"({pretty(node.lhs, labels)} -> {pretty(node.rhs, labels)})"
    raise TypeError(f"cannot render {node!r}")
