"""SMT-LIB 2 reader for the supported QF integer-arithmetic fragment."""
from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from typing import List, Tuple, Union

from .ast import (
    FALSE, TRUE, Add, And, Atom, BoolConst, BoolVar, Formula, Implies, IntConst,
    Mul, Neg, Not, Or, Rel, Script, Sort, Sub, Term, Var, conjoin,
)
from .errors import ParseError, UnsupportedFeature

KNOWN_LOGICS = {"QF_LIA", "QF_NIA", "ALL"}

_TOKEN = re.compile(r"""
    (?P<ws>\s+|;[^\n]*)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<str>"(?:[^"]|"")*")
  | (?P<quoted>\|[^|]*\|)
  | (?P<kw>:[^\s()";|]+)
  | (?P<sym>[^\s()";|]+)
""", re.VERBOSE)


@dataclass(frozen=True)
class Tok:
    text: str
    line: int
    col: int


SExpr = Union[Tok, "SList"]


@dataclass
class SList:
    items: List[SExpr]
    line: int
    col: int


def tokenize(text: str) -> List[Tok]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(line, pos - line_start + 1, f"unexpected character {text[pos]!r}")
        chunk = m.group()
        if m.lastgroup != "ws":
            tok = chunk[1:-1] if m.lastgroup == "quoted" else chunk
            out.append(Tok(tok, line, pos - line_start + 1))
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    return out


def read_sexprs(text: str) -> List[SExpr]:
    toks = tokenize(text)
    stack: List[SList] = []
    top: List[SExpr] = []
    for t in toks:
        if t.text == "(":
            stack.append(SList([], t.line, t.col))
        elif t.text == ")":
            if not stack:
                raise ParseError(t.line, t.col, "unbalanced ')'")
            done = stack.pop()
            (stack[-1].items if stack else top).append(done)
        else:
            (stack[-1].items if stack else top).append(t)
    if stack:
        s = stack[-1]
        raise ParseError(s.line, s.col, "unclosed '('")
    return top


def _pos(e: SExpr) -> Tuple[int, int]:
    return e.line, e.col


def _sym(e: SExpr, what: str) -> str:
    if not isinstance(e, Tok):
        raise ParseError(*_pos(e), f"expected {what}")
    return e.text


_INT = re.compile(r"-?\d+\Z")
_RELS = {"<": Rel.LT, "<=": Rel.LE, ">": Rel.GT, ">=": Rel.GE}
_UNSUPPORTED_OPS = {
    "div", "mod", "abs", "/", "ite", "let", "forall", "exists", "select",
    "store", "xor", "to_real", "to_int", "is_int", "!", "_", "as",
}


class _Builder:
    def __init__(self, sorts: dict):
        self.sorts = sorts

    def sort_of(self, e: SExpr) -> Sort:
        if isinstance(e, Tok):
            if e.text in ("true", "false"):
                return Sort.BOOL
            if _INT.match(e.text):
                return Sort.INT
            if e.text in self.sorts:
                return self.sorts[e.text]
            raise ParseError(e.line, e.col, f"undeclared symbol {e.text!r}")
        if not e.items:
            raise ParseError(e.line, e.col, "empty application")
        head = _sym(e.items[0], "operator")
        if head in ("+", "-", "*"):
            return Sort.INT
        if head in _UNSUPPORTED_OPS:
            raise UnsupportedFeature(head, *_pos(e))
        return Sort.BOOL

    def term(self, e: SExpr) -> Term:
        if isinstance(e, Tok):
            if _INT.match(e.text):
                return IntConst(int(e.text))
            sort = self.sorts.get(e.text)
            if sort is None:
                raise ParseError(e.line, e.col, f"undeclared symbol {e.text!r}")
            if sort is not Sort.INT:
                raise ParseError(e.line, e.col, f"{e.text!r} is not Int-sorted")
            return Var(e.text, Sort.INT)
        if not e.items:
            raise ParseError(e.line, e.col, "empty application")
        head = _sym(e.items[0], "operator")
        args = e.items[1:]
        if head in _UNSUPPORTED_OPS:
            raise UnsupportedFeature(head, *_pos(e))
        if not args:
            raise ParseError(e.line, e.col, f"{head!r} needs arguments")
        if head == "+":
            ts = tuple(self.term(a) for a in args)
            return ts[0] if len(ts) == 1 else Add(ts)
        if head == "*":
            ts = tuple(self.term(a) for a in args)
            return ts[0] if len(ts) == 1 else Mul(ts)
        if head == "-":
            ts = [self.term(a) for a in args]
            if len(ts) == 1:
                if isinstance(ts[0], IntConst):
                    return IntConst(-ts[0].value)
                return Neg(ts[0])
            acc = ts[0]
            for t in ts[1:]:
                acc = Sub(acc, t)
            return acc
        raise ParseError(e.line, e.col, f"{head!r} is not an Int operator")

    def formula(self, e: SExpr) -> Formula:
        if isinstance(e, Tok):
            if e.text == "true":
                return TRUE
            if e.text == "false":
                return FALSE
            sort = self.sorts.get(e.text)
            if sort is Sort.BOOL:
                return BoolVar(e.text)
            if sort is None:
                raise ParseError(e.line, e.col, f"undeclared symbol {e.text!r}")
            raise ParseError(e.line, e.col, f"{e.text!r} is not Bool-sorted")
        if not e.items:
            raise ParseError(e.line, e.col, "empty application")
        head_e = e.items[0]
        if isinstance(head_e, SList):
            raise UnsupportedFeature("higher-order application", *_pos(e))
        head = head_e.text
        args = e.items[1:]
        if head in _UNSUPPORTED_OPS:
            raise UnsupportedFeature(head, *_pos(e))
        if head == "and":
            return conjoin(self.formula(a) for a in args) if args else TRUE
        if head == "or":
            if not args:
                return FALSE
            fs = tuple(self.formula(a) for a in args)
            return fs[0] if len(fs) == 1 else Or(fs)
        if head == "not":
            self._arity(e, args, 1)
            return Not(self.formula(args[0]))
        if head == "=>":
            if len(args) < 2:
                raise ParseError(e.line, e.col, "'=>' needs at least two arguments")
            fs = [self.formula(a) for a in args]
            acc = fs[-1]
            for f in reversed(fs[:-1]):
                acc = Implies(f, acc)
            return acc
        if head in _RELS or head in ("=", "distinct"):
            if len(args) < 2:
                raise ParseError(e.line, e.col, f"{head!r} needs at least two arguments")
            if head in ("=", "distinct") and self.sort_of(args[0]) is Sort.BOOL:
                return self._bool_eq(head, args)
            ts = [self.term(a) for a in args]
            if head == "distinct":
                return conjoin(Atom(Rel.NEQ, ts[i], ts[j])
                               for i in range(len(ts)) for j in range(i + 1, len(ts)))
            rel = Rel.EQ if head == "=" else _RELS[head]
            return conjoin(Atom(rel, a, b) for a, b in zip(ts, ts[1:]))
        if head in ("+", "-", "*"):
            raise ParseError(e.line, e.col, f"Int term {head!r} used as a formula")
        raise UnsupportedFeature(head, *_pos(e))

    def _bool_eq(self, head, args) -> Formula:
        fs = [self.formula(a) for a in args]
        if head == "=":
            return conjoin(And((Implies(a, b), Implies(b, a))) for a, b in zip(fs, fs[1:]))
        # distinct over Bool: only the binary case is meaningful
        if len(fs) > 2:
            return FALSE
        a, b = fs
        return Or((And((a, Not(b))), And((Not(a), b))))

    @staticmethod
    def _arity(e, args, n):
        if len(args) != n:
            raise ParseError(e.line, e.col, f"expected {n} argument(s), got {len(args)}")


def _parse_sort(e: SExpr) -> Sort:
    name = _sym(e, "sort")
    if name == "Int":
        return Sort.INT
    if name == "Bool":
        return Sort.BOOL
    raise UnsupportedFeature(f"sort {name}", *_pos(e))


def parse_script(text: str, source: str | None = None) -> Script:
    """Parse SMT-LIB text; all ``assert`` commands are conjoined in order."""
    decls: List[Tuple[str, Sort]] = []
    sorts: dict = {}
    asserts: List[Formula] = []
    info: List[Tuple[str, str]] = []
    logic = None
    builder = _Builder(sorts)

    for cmd in read_sexprs(text):
        if not isinstance(cmd, SList) or not cmd.items:
            raise ParseError(*_pos(cmd), "expected a command")
        name = _sym(cmd.items[0], "command name")
        args = cmd.items[1:]
        if name == "set-logic":
            logic = _sym(args[0], "logic name") if args else ""
            if logic not in KNOWN_LOGICS:
                warnings.warn(f"unrecognised logic {logic!r}; continuing", stacklevel=2)
        elif name == "set-info":
            if not args:
                raise ParseError(cmd.line, cmd.col, "set-info needs a keyword")
            key = _sym(args[0], "keyword")
            val = " ".join(a.text for a in args[1:] if isinstance(a, Tok))
            info.append((key, val))
        elif name == "set-option":
            pass
        elif name in ("declare-const", "declare-fun"):
            if name == "declare-const":
                if len(args) != 2:
                    raise ParseError(cmd.line, cmd.col, "declare-const takes a name and a sort")
                vname, sort_e = _sym(args[0], "name"), args[1]
            else:
                if len(args) != 3:
                    raise ParseError(cmd.line, cmd.col, "declare-fun takes name, domain, range")
                vname = _sym(args[0], "name")
                if not isinstance(args[1], SList):
                    raise ParseError(*_pos(args[1]), "expected a domain list")
                if args[1].items:
                    raise UnsupportedFeature("uninterpreted function", cmd.line, cmd.col)
                sort_e = args[2]
            if vname in sorts:
                raise ParseError(cmd.line, cmd.col, f"{vname!r} declared twice")
            sort = _parse_sort(sort_e)
            sorts[vname] = sort
            decls.append((vname, sort))
        elif name == "assert":
            if len(args) != 1:
                raise ParseError(cmd.line, cmd.col, "assert takes one formula")
            asserts.append(builder.formula(args[0]))
        elif name in ("check-sat", "exit"):
            pass
        else:
            raise UnsupportedFeature(name, cmd.line, cmd.col)

    if not asserts:
        assertion: Formula = TRUE
    elif len(asserts) == 1:
        assertion = asserts[0]
    else:
        assertion = And(tuple(asserts))
    return Script(tuple(decls), assertion, logic, tuple(info), source)


def parse_file(path) -> Script:
    with open(path, encoding="utf-8") as fh:
        return parse_script(fh.read(), source=str(path))
