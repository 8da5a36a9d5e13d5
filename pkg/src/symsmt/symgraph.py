"""Symmetry detection through colored-graph automorphisms.

The skeleton ``psi`` and the atom map ``phi`` are encoded as one vertex-colored
undirected graph.  Automorphism generators are found by color refinement plus
individualization backtracking with orbit pruning (a small stabilizer-chain
search), then projected onto skeleton and theory variables and checked
against the formulas themselves before being accepted.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .ast import (
    Add, And, Atom, BoolConst, BoolVar, Formula, Implies, IntConst, Mul, Neg, Node,
    Not, Or, Rel, Script, SkelVar, Sort, Sub, Var, rename,
)
from .normalize import normalize
from .skeleton import AtomMap

DEFAULT_GENERATOR_LIMIT = 8
DEFAULT_NODE_BUDGET = 10 ** 6

SKEL, THEORY, OPERATOR, CONSTANT, POSITION = "skeleton-var", "theory-var", "operator", "constant", "position"
_COMMUTATIVE = (Add, Mul, And, Or)


@dataclass
class ColoredGraph:
    num_vertices: int
    adj: List[Set[int]]
    colors: List[int]
    origin: List[str]
    color_names: List[str]
    skel_vertex: Dict[int, int] = field(default_factory=dict)
    var_vertex: Dict[str, int] = field(default_factory=dict)

    @property
    def edges(self) -> List[Tuple[int, int]]:
        return [(a, b) for a in range(self.num_vertices) for b in self.adj[a] if a < b]

    def is_automorphism(self, perm: Sequence[int]) -> bool:
        if sorted(perm) != list(range(self.num_vertices)):
            return False
        if any(self.colors[perm[v]] != self.colors[v] for v in range(self.num_vertices)):
            return False
        adj = self.adj
        return all(perm[b] in adj[perm[a]] for a in range(self.num_vertices) for b in adj[a])


class _GraphBuilder:
    def __init__(self):
        self.labels: List[str] = []
        self.origin: List[str] = []
        self.edges: List[Tuple[int, int]] = []
        self.consts: Dict[int, int] = {}
        self.vars: Dict[str, int] = {}

    def vertex(self, label: str, origin: str) -> int:
        self.labels.append(label)
        self.origin.append(origin)
        return len(self.labels) - 1

    def edge(self, a: int, b: int) -> None:
        if a != b:
            self.edges.append((a, b))

    def var(self, name: str, sort: Sort) -> int:
        if name not in self.vars:
            self.vars[name] = self.vertex(f"var:{sort.value}", THEORY)
        return self.vars[name]

    def const(self, value: int) -> int:
        if value not in self.consts:
            self.consts[value] = self.vertex(f"const:{value}", CONSTANT)
        return self.consts[value]

    def ordered(self, op: str, kids: Sequence[int]) -> int:
        root = self.vertex(op, OPERATOR)
        for i, k in enumerate(kids):
            pos = self.vertex(f"{op}#{i}", POSITION)
            self.edge(root, pos)
            self.edge(pos, k)
        return root

    def unordered(self, op: str, kids: Iterable[int]) -> int:
        root = self.vertex(op, OPERATOR)
        for k in kids:
            self.edge(root, k)
        return root

    def node(self, n: Node, skel: Mapping[int, int]) -> int:
        if isinstance(n, SkelVar):
            return skel[n.id]
        if isinstance(n, Var):
            return self.var(n.name, n.sort)
        if isinstance(n, BoolVar):
            return self.var(n.name, Sort.BOOL)
        if isinstance(n, IntConst):
            return self.const(n.value)
        if isinstance(n, BoolConst):
            return self.vertex("true" if n.value else "false", CONSTANT)
        if isinstance(n, _COMMUTATIVE):
            return self.unordered(type(n).__name__.lower(), [self.node(a, skel) for a in n.args])
        if isinstance(n, (Neg, Not)):
            return self.unordered(type(n).__name__.lower(), [self.node(n.arg, skel)])
        if isinstance(n, Sub):
            return self.ordered("sub", [self.node(n.lhs, skel), self.node(n.rhs, skel)])
        if isinstance(n, Implies):
            return self.ordered("implies", [self.node(n.lhs, skel), self.node(n.rhs, skel)])
        if isinstance(n, Atom):
            kids = [self.node(n.lhs, skel), self.node(n.rhs, skel)]
            if n.rel in (Rel.EQ, Rel.NEQ):
                return self.unordered(f"rel:{n.rel.name}", kids)
            return self.ordered(f"rel:{n.rel.name}", kids)
        raise TypeError(f"cannot encode {n!r}")


def build_colored_graph(psi: Formula, phi: AtomMap) -> ColoredGraph:
    """Encode ``psi`` together with the biconditionals of ``phi``."""
    b = _GraphBuilder()
    skel = {i: b.vertex("skel", SKEL) for i in range(len(phi))}
    for i, entry in enumerate(phi.entries):
        b.edge(skel[i], b.node(entry, skel))
    if not (isinstance(psi, BoolConst) and psi.value):
        b.node(psi, skel)
    names = sorted(set(b.labels))
    rank = {s: i for i, s in enumerate(names)}
    n = len(b.labels)
    adj: List[Set[int]] = [set() for _ in range(n)]
    for x, y in b.edges:
        adj[x].add(y)
        adj[y].add(x)
    return ColoredGraph(n, adj, [rank[s] for s in b.labels], b.origin, names, skel, dict(b.vars))


# ----------------------------------------------------------------- search


def refine(colors: Sequence[int], adj: Sequence[Set[int]]) -> Tuple[List[int], int]:
    """1-dimensional Weisfeiler-Leman refinement to the coarsest equitable partition.

    Returns dense colors whose order is invariant under relabeling, plus a
    hash of the refinement trace (equal for isomorphic inputs).
    """
    n = len(colors)
    cur = list(colors)
    ncls = len(set(cur))
    trace = 0
    while True:
        sigs = [(cur[v], tuple(sorted(cur[u] for u in adj[v]))) for v in range(n)]
        uniq = sorted(set(sigs))
        trace = hash((trace, tuple(uniq)))
        rank = {s: i for i, s in enumerate(uniq)}
        cur = [rank[s] for s in sigs]
        if len(uniq) == ncls:
            return cur, trace
        ncls = len(uniq)


def _individualize(colors: Sequence[int], v: int) -> List[int]:
    return [2 * c + (0 if u == v else 1) for u, c in enumerate(colors)]


@dataclass
class AutomorphismResult:
    generators: List[List[int]]
    complete: bool
    nodes: int
    all_generators: List[List[int]] = field(default_factory=list)


class _Budget(Exception):
    pass


def find_automorphism_generators(
    graph: ColoredGraph,
    limit: int | None = DEFAULT_GENERATOR_LIMIT,
    node_budget: int = DEFAULT_NODE_BUDGET,
    deadline: float | None = None,
    relevant: Optional[Set[int]] = None,
) -> AutomorphismResult:
    """Generators of the color-preserving automorphism group.

    Without a budget hit or ``limit`` cut-off the returned generators generate
    the whole group.  When ``relevant`` is given, generators that fix every
    relevant vertex are still used for orbit pruning but are neither returned
    nor counted towards ``limit``.  ``complete`` is False when the search
    stopped early (budget, deadline or limit).
    """
    adj = graph.adj
    n = graph.num_vertices
    nodes = 0

    def step(colors):
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise _Budget
        if deadline is not None and (nodes & 63) == 0 and time.monotonic() >= deadline:
            raise _Budget
        return refine(colors, adj)

    def target(colors) -> int | None:
        sizes: Dict[int, int] = {}
        for c in colors:
            sizes[c] = sizes.get(c, 0) + 1
        best = None
        for v in range(n):
            c = colors[v]
            if sizes[c] < 2:
                continue
            score = (0 if relevant is not None and v in relevant else 1, c)
            if best is None or score < best[0]:
                best = (score, c)
        return None if best is None else best[1]

    gens: List[List[int]] = []
    returned: List[List[int]] = []
    complete = True
    try:
        root, root_trace = step(graph.colors)
        path = []  # (colors, trace, cell color, chosen vertex)
        colors, trace = root, root_trace
        while True:
            c = target(colors)
            if c is None:
                break
            v = min(u for u in range(n) if colors[u] == c)
            path.append((colors, trace, c, v))
            colors, trace = step(_individualize(colors, v))
        leaf1 = colors
        shapes = [(sorted(p[0]), p[1]) for p in path] + [(sorted(leaf1), trace)]

        def leaf_perm(leaf2) -> List[int]:
            inv2 = [0] * n
            for u, c in enumerate(leaf2):
                inv2[c] = u
            return [inv2[leaf1[u]] for u in range(n)]

        def dive(colors, trace, depth) -> Optional[List[int]]:
            shape = shapes[depth]
            if shape[1] != trace or sorted(colors) != shape[0]:
                return None
            if depth == len(path):
                g = leaf_perm(colors)
                return g if graph.is_automorphism(g) else None
            c = path[depth][2]
            for u in range(n):
                if colors[u] == c:
                    nxt, tr = step(_individualize(colors, u))
                    g = dive(nxt, tr, depth + 1)
                    if g is not None:
                        return g
            return None

        for level in range(len(path) - 1, -1, -1):
            colors, trace, c, v = path[level]
            for w in range(n):
                if w == v or colors[w] != c:
                    continue
                if w in _orbit(v, gens):
                    continue
                nxt, tr = step(_individualize(colors, w))
                g = dive(nxt, tr, level + 1)
                if g is None:
                    continue
                gens.append(g)
                if relevant is None or any(g[x] != x for x in relevant):
                    returned.append(g)
                    if limit is not None and len(returned) >= limit:
                        raise _Budget
    except _Budget:
        complete = False
    return AutomorphismResult(returned, complete, nodes, gens)


def _orbit(v: int, gens: Sequence[Sequence[int]]) -> Set[int]:
    orbit = {v}
    frontier = [v]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = g[x]
            if y not in orbit:
                orbit.add(y)
                frontier.append(y)
    return orbit


# --------------------------------------------------------------- permutations


@dataclass(frozen=True)
class Permutation:
    """A joint permutation of skeleton ids and theory-variable names (identity entries omitted)."""

    skeleton_map: Tuple[Tuple[int, int], ...]
    theory_map: Tuple[Tuple[str, str], ...]

    @classmethod
    def of(cls, skeleton_map: Mapping[int, int] = {}, theory_map: Mapping[str, str] = {}) -> "Permutation":
        sk = tuple(sorted((a, b) for a, b in skeleton_map.items() if a != b))
        th = tuple(sorted((a, b) for a, b in theory_map.items() if a != b))
        if sorted(a for a, _ in sk) != sorted(b for _, b in sk):
            raise ValueError("skeleton map is not a bijection on its support")
        if sorted(a for a, _ in th) != sorted(b for _, b in th):
            raise ValueError("theory map is not a bijection on its support")
        return cls(sk, th)

    @property
    def skel(self) -> Dict[int, int]:
        return dict(self.skeleton_map)

    @property
    def theory(self) -> Dict[str, str]:
        return dict(self.theory_map)

    def is_identity(self) -> bool:
        return not self.skeleton_map and not self.theory_map

    def skeleton_support(self) -> List[int]:
        return [a for a, _ in self.skeleton_map]

    def compose(self, other: "Permutation") -> "Permutation":
        """``self`` after ``other``."""
        s, o = self.skel, other.skel
        sk = {a: s.get(o.get(a, a), o.get(a, a)) for a in set(s) | set(o)}
        ts, to = self.theory, other.theory
        th = {a: ts.get(to.get(a, a), to.get(a, a)) for a in set(ts) | set(to)}
        return Permutation.of(sk, th)

    def inverse(self) -> "Permutation":
        return Permutation.of({b: a for a, b in self.skeleton_map}, {b: a for a, b in self.theory_map})

    def cycles(self, labels: Sequence[str] | None = None) -> str:
        def name(i):
            return labels[i] if labels is not None else f"b{i}"

        out = _cycles(self.skel, name) + _cycles(self.theory, str)
        return out or "()"


def _cycles(mapping: Mapping, name) -> str:
    seen = set()
    parts = []
    for start in sorted(mapping):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        nxt = mapping[start]
        while nxt != start:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = mapping[nxt]
        parts.append("(" + " ".join(name(x) for x in cyc) + ")")
    return "".join(parts)


def apply_to_formula(theta: Permutation, f: Node) -> Node:
    return rename(f, theta.theory, theta.skel)


def project(graph: ColoredGraph, vertex_perm: Sequence[int]) -> Permutation:
    vinv = {v: name for name, v in graph.var_vertex.items()}
    sinv = {v: i for i, v in graph.skel_vertex.items()}
    sk = {i: sinv[vertex_perm[v]] for i, v in graph.skel_vertex.items()}
    th = {name: vinv[vertex_perm[v]] for name, v in graph.var_vertex.items()}
    return Permutation.of(sk, th)


def verify(theta: Permutation, script: Script, psi: Formula, phi: AtomMap) -> bool:
    """Exact syntactic check that ``theta`` maps the problem onto itself."""
    omega = normalize(script.assertion)
    if normalize(apply_to_formula(theta, omega)) != omega:
        return False
    if normalize(apply_to_formula(theta, psi)) != normalize(psi):
        return False
    sk = theta.skel
    for i, entry in enumerate(phi.entries):
        if normalize(apply_to_formula(theta, entry)) != phi[sk.get(i, i)]:
            return False
    return True


def lift_and_verify(script: Script, psi: Formula, phi: AtomMap, graph: ColoredGraph,
                    vertex_perm: Sequence[int]) -> Optional[Permutation]:
    """Project a vertex automorphism and keep it only if it is a genuine, nontrivial symmetry."""
    theta = project(graph, vertex_perm)
    if theta.is_identity():
        return None
    return theta if verify(theta, script, psi, phi) else None


@dataclass
class Detection:
    accepted: List[Permutation]
    rejected: int
    generators_found: int
    complete: bool
    nodes: int
    seconds: float
    graph_size: Tuple[int, int]

    def summary(self) -> Dict[str, object]:
        return {
            "accepted": len(self.accepted),
            "rejected": self.rejected,
            "generators_found": self.generators_found,
            "complete": self.complete,
            "search_nodes": self.nodes,
            "seconds": round(self.seconds, 6),
            "graph_vertices": self.graph_size[0],
            "graph_edges": self.graph_size[1],
        }


def detect_symmetries(script: Script, psi: Formula, phi: AtomMap,
                      limit: int = DEFAULT_GENERATOR_LIMIT,
                      node_budget: int = DEFAULT_NODE_BUDGET,
                      deadline: float | None = None) -> Detection:
    """Graph construction, generator search and verification in one call."""
    t0 = time.perf_counter()
    graph = build_colored_graph(psi, phi)
    relevant = set(graph.skel_vertex.values()) | set(graph.var_vertex.values())
    res = find_automorphism_generators(graph, limit, node_budget, deadline, relevant)
    accepted: List[Permutation] = []
    rejected = 0
    for g in res.generators:
        theta = lift_and_verify(script, psi, phi, graph, g)
        if theta is None or theta in accepted:
            rejected += 1
        else:
            accepted.append(theta)
    return Detection(accepted, rejected, len(res.generators), res.complete, res.nodes,
                     time.perf_counter() - t0, (graph.num_vertices, len(graph.edges)))
