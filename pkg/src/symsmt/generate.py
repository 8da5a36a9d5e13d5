"""Random bounded-NIA instances with planted variable symmetries.

Symmetric instances instantiate clause templates over a block of
interchangeable variables ``x1..xm``, either over every index/pair (full
symmetric group) or over consecutive indices mod ``m`` (cyclic group).
Asymmetric instances give every atom its own constant.  Satisfiability
targets are met by rejection sampling against the brute-force oracle.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, List, Optional, Sequence

from .ast import Add, Atom, Formula, IntConst, Mul, Not, Or, Rel, Script, Sort, Sub, Var, conjoin, walk
from .oracle import brute_force
from .printer import serialize
from .skeleton import extract_skeleton
from .symgraph import detect_symmetries

DEFAULT_GEN_BOUND = 8
MAX_SKELETON = 12


class Profile(str, Enum):
    SYMMETRIC_SAT = "symmetric-sat"
    SYMMETRIC_UNSAT = "symmetric-unsat"
    ASYMMETRIC = "asymmetric"
    MIXED = "mixed"


@dataclass
class Instance:
    name: str
    script: Script
    sat: bool
    symmetric: bool

    @property
    def text(self) -> str:
        return serialize(self.script)


def _c(v: int) -> IntConst:
    return IntConst(v)


# atom shapes; each takes an rng and returns a builder over variables
def _unary_shape(rng: random.Random, B: int) -> Callable[[Var], Formula]:
    kind = rng.randrange(5)
    c = rng.randint(-B // 2, B // 2)
    if kind == 0:
        return lambda v: Atom(Rel.LT, v, _c(c))
    if kind == 1:
        return lambda v: Atom(Rel.GT, v, _c(c))
    if kind == 2:
        a = rng.choice((2, 3))
        return lambda v: Atom(Rel.LE, Mul((_c(a), v)), _c(c * a))
    if kind == 3:
        s = rng.randint(0, B // 2) ** 2
        return lambda v: Atom(Rel.LE, Mul((v, v)), _c(s))
    return lambda v: Atom(Rel.NEQ, v, _c(c))


def _binary_shape(rng: random.Random, B: int, commutative: bool) -> Callable[[Var, Var], Formula]:
    kinds = 5 if commutative else 7
    kind = rng.randrange(kinds)
    c = rng.randint(-B, B)
    if kind == 0:
        return lambda u, v: Atom(Rel.LT, Add((u, v)), _c(c))
    if kind == 1:
        return lambda u, v: Atom(Rel.GT, Add((u, v)), _c(c))
    if kind == 2:
        p = rng.randint(-B, B)
        return lambda u, v: Atom(Rel.EQ, Mul((u, v)), _c(p))
    if kind == 3:
        return lambda u, v: Atom(Rel.LE, Mul((u, v)), _c(c))
    if kind == 4:
        return lambda u, v: Atom(Rel.NEQ, u, v)
    if kind == 5:
        return lambda u, v: Atom(Rel.LT, u, v)
    d = rng.randint(1, B // 2)
    return lambda u, v: Atom(Rel.LT, Sub(u, v), _c(d))


def _global_atom(rng: random.Random, B: int, xs: Sequence[Var]) -> Formula:
    m = len(xs)
    kind = rng.randrange(3)
    if kind == 0:
        return Atom(Rel.GT, Add(tuple(xs)), _c(rng.randint(0, m * B // 2)))
    if kind == 1:
        return Atom(Rel.LT, Add(tuple(xs)), _c(rng.randint(-m * B // 2, 0)))
    return Atom(Rel.GE, Mul(tuple(xs[:2])) if m == 2 else Add(tuple(Mul((x, x)) for x in xs)), _c(rng.randint(1, B * B // 2)))


def _symmetric_formula(rng: random.Random, B: int) -> Formula:
    m = rng.randint(2, 4)
    xs = [Var(f"x{i + 1}", Sort.INT) for i in range(m)]
    w = Var("w", Sort.INT) if m < 4 and rng.random() < 0.4 else None
    cyclic = m > 2 and rng.random() < 0.5
    clauses: List[Formula] = []
    for _ in range(rng.randint(1, 2)):
        if cyclic:
            un, bi = _unary_shape(rng, B), _binary_shape(rng, B, commutative=False)
            for i in range(m):
                clauses.append(Or((un(xs[i]), bi(xs[i], xs[(i + 1) % m]))))
        elif rng.random() < 0.5:
            un1, un2 = _unary_shape(rng, B), _unary_shape(rng, B)
            cw = rng.randint(-B, B)
            other = (lambda v: Atom(Rel.LT, Add((v, w)), _c(cw))) if w is not None else un2
            for x in xs:
                clauses.append(Or((un1(x), other(x))))
        else:
            bi = _binary_shape(rng, B, commutative=True)
            un = _unary_shape(rng, B)
            for i in range(m):
                for j in range(i + 1, m):
                    clauses.append(Or((bi(xs[i], xs[j]), un(xs[i]), un(xs[j]))))
    if rng.random() < 0.7:
        g = _global_atom(rng, B, xs)
        clauses.append(g if rng.random() < 0.7 else Not(g))
    if w is not None:
        clauses.append(Atom(rng.choice((Rel.LT, Rel.GT)), w, _c(rng.randint(-B // 2, B // 2))))
    rng.shuffle(clauses)
    return conjoin(clauses)


def _asymmetric_formula(rng: random.Random, B: int) -> Formula:
    n = rng.randint(2, 4)
    xs = [Var(f"x{i + 1}", Sort.INT) for i in range(n)]
    used: set = set()

    def fresh(lo, hi):
        for _ in range(100):
            c = rng.randint(lo, hi)
            if c not in used:
                used.add(c)
                return c
        return hi + len(used)

    atoms = []
    for i, x in enumerate(xs):
        atoms.append(Atom(rng.choice((Rel.LT, Rel.GT)), Mul((_c(i + 1), x)), _c(fresh(-B, B))))
    for i in range(n - 1):
        atoms.append(Atom(Rel.LT, Add((xs[i], Mul((_c(i + 2), xs[i + 1])))), _c(fresh(-2 * B, 2 * B))))
    rng.shuffle(atoms)
    clauses = []
    while atoms:
        take = min(len(atoms), rng.randint(1, 2))
        part = [atoms.pop() for _ in range(take)]
        part = [Not(a) if rng.random() < 0.3 else a for a in part]
        clauses.append(part[0] if take == 1 else Or(tuple(part)))
    return conjoin(clauses)


def _script(f: Formula, name: str) -> Script:
    names = sorted({v.name for v in _vars(f)}, key=lambda s: (s[0] != "x", s))
    decls = tuple((v, Sort.INT) for v in names)
    return Script(decls, f, "QF_NIA", (("source", name),), name)


def _vars(f):
    return [n for n in walk(f) if isinstance(n, Var)]


def _has_symmetry(script: Script) -> bool:
    psi, phi = extract_skeleton(script)
    det = detect_symmetries(script, psi, phi)
    return any(t.skeleton_support() for t in det.accepted)


def generate_instance(rng: random.Random, symmetric: bool, want_sat: Optional[bool],
                      bound: int = DEFAULT_GEN_BOUND, name: str = "inst", max_tries: int = 2000) -> Instance:
    for _ in range(max_tries):
        f = _symmetric_formula(rng, bound) if symmetric else _asymmetric_formula(rng, bound)
        script = _script(f, name)
        psi, phi = extract_skeleton(script)
        if len(phi) > MAX_SKELETON or len(phi) == 0:
            continue
        sat = brute_force(script, bound, cap=1).sat
        if want_sat is not None and sat != want_sat:
            continue
        if _has_symmetry(script) != symmetric:
            continue
        return Instance(name, script, sat, symmetric)
    raise RuntimeError(f"no instance found for symmetric={symmetric} sat={want_sat} after {max_tries} tries")


def _pure_theory_formula(rng: random.Random, B: int) -> Formula:
    m = rng.randint(2, 4)
    xs = tuple(Var(f"x{i + 1}", Sort.INT) for i in range(m))
    pool = [
        lambda: Atom(rng.choice((Rel.LT, Rel.GT)), Add(xs), _c(rng.randint(-m * B // 2, m * B // 2))),
        lambda: Atom(rng.choice((Rel.LE, Rel.GE)), Add(tuple(Mul((x, x)) for x in xs)), _c(rng.randint(0, B * B))),
        lambda: Atom(rng.choice((Rel.EQ, Rel.NEQ, Rel.GT)), Mul(xs[:3]), _c(rng.randint(-B, B))),
        lambda: Atom(Rel.LT, Add(xs + (_c(rng.randint(-B, B)),)), Mul(xs[:2])),
    ]
    parts = [rng.choice(pool)() for _ in range(rng.randint(1, 3))]
    parts = [Not(a) if rng.random() < 0.25 else a for a in parts]
    if len(parts) > 1 and rng.random() < 0.5:
        return Or(tuple(parts))
    return conjoin(parts)


def generate_pure_theory(seed: int, count: int, bound: int = DEFAULT_GEN_BOUND) -> List[Instance]:
    """Instances whose only symmetries move theory variables and fix every atom."""
    rng = random.Random(f"pure-theory/{seed}")
    out: List[Instance] = []
    while len(out) < count:
        name = f"pure-theory-{seed}-{len(out):04d}"
        script = _script(_pure_theory_formula(rng, bound), name)
        psi, phi = extract_skeleton(script)
        if not len(phi):
            continue
        det = detect_symmetries(script, psi, phi)
        if not det.accepted or any(t.skeleton_support() for t in det.accepted):
            continue
        out.append(Instance(name, script, brute_force(script, bound, cap=1).sat, True))
    return out


def generate_corpus(seed: int, count: int, profile: Profile | str = Profile.MIXED,
                    bound: int = DEFAULT_GEN_BOUND, out_dir: str | Path | None = None) -> List[Instance]:
    """Deterministic corpus; writes ``<profile>-<seed>-<i>.smt2`` files when ``out_dir`` is given."""
    profile = Profile(profile)
    rng = random.Random(f"{profile.value}/{seed}")
    out: List[Instance] = []
    for i in range(count):
        name = f"{profile.value}-{seed}-{i:04d}"
        if profile is Profile.SYMMETRIC_SAT:
            inst = generate_instance(rng, True, True, bound, name)
        elif profile is Profile.SYMMETRIC_UNSAT:
            inst = generate_instance(rng, True, False, bound, name)
        elif profile is Profile.ASYMMETRIC:
            inst = generate_instance(rng, False, None, bound, name)
        else:
            inst = generate_instance(rng, rng.random() < 0.7, i % 2 == 0, bound, name)
        out.append(inst)
    if out_dir is not None:
        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        for inst in out:
            (d / f"{inst.name}.smt2").write_text(inst.text)
    return out
