"""DIMACS CNF import/export."""
from __future__ import annotations

from typing import Iterable, List, Sequence, Tuple

from .skeleton import AtomMap, Cnf
from .printer import to_sexpr


def dumps(cnf: Cnf, phi: AtomMap | None = None, comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    if phi is not None:
        for i, (label, atom) in enumerate(zip(phi.labels(), phi.entries)):
            lines.append(f"c var {i + 1} {label} {to_sexpr(atom)}")
    for v in cnf.aux:
        lines.append(f"c aux {v + 1}")
    lines.append(f"p cnf {cnf.num_vars} {len(cnf.clauses)}")
    for clause in cnf.clauses:
        lines.append(" ".join(map(str, clause)) + " 0" if clause else "0")
    return "\n".join(lines) + "\n"


def loads(text: str) -> Tuple[int, List[List[int]]]:
    """Parse DIMACS text into ``(num_vars, clauses)``."""
    num_vars = None
    clauses: List[List[int]] = []
    cur: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: bad problem line {raw!r}")
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(cur)
                cur = []
            else:
                cur.append(lit)
    if cur:
        clauses.append(cur)
    if num_vars is None:
        num_vars = max((abs(l) for c in clauses for l in c), default=0)
    return num_vars, clauses


def to_cnf(num_vars: int, clauses: Sequence[Sequence[int]]) -> Cnf:
    return Cnf(num_vars, [list(c) for c in clauses], num_vars)
