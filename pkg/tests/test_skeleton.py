import itertools

from hypothesis import given, settings, strategies as st

from symsmt import dimacs
from symsmt.ast import TRUE, And, Atom, IntConst, Not, Or, Rel, SkelVar, Sort, Var
from symsmt.oracle import enumerate_models_direct, enumerate_skeleton_models, evaluate
from symsmt.parser import parse_script
from symsmt.printer import pretty
from symsmt.skeleton import (
    AtomMap, Cnf, assignment_to_literal_conjunction, extract_skeleton, negate_entry, to_cnf,
)

from _util import table1

X = Var("x", Sort.INT)


def test_table1_skeleton():
    psi, phi = extract_skeleton(table1())
    assert phi.describe() == [
        "P <-> (2 < z)", "Q <-> (x < 8)", "R <-> (y < 8)", "S <-> ((x + y) < 10)", "T <-> (3 < (x + y))",
    ]
    cnf = to_cnf(psi, len(phi))
    assert sorted(map(sorted, cnf.clauses)) == [[1, 2], [1, 3], [4, 5]]
    assert cnf.num_vars == 5 and cnf.aux == []


def test_true_assertion():
    psi, phi = extract_skeleton(parse_script("(declare-const x Int)"))
    assert psi == TRUE and len(phi) == 0
    assert to_cnf(psi, 0).clauses == []


def test_atom_dedup():
    s = parse_script("(declare-const x Int)(declare-const y Int)"
                     "(assert (or (< x 0) (< y 1)))(assert (or (> 0 x) (< y 2)))")
    psi, phi = extract_skeleton(s)
    assert len(phi) == 3 and phi[0] == Atom(Rel.LT, X, IntConst(0))


def test_single_variable_cnf():
    assert to_cnf(SkelVar(0), 1).clauses == [[1]]


def test_tseitin_with_aux_model_count():
    P, Q, R = SkelVar(0), SkelVar(1), SkelVar(2)
    cnf = to_cnf(Or((And((P, Q)), R)), 3)
    assert len(cnf.aux) == 1
    expected = sum(1 for a, b, c in itertools.product([0, 1], repeat=3) if (a and b) or c)
    assert len(enumerate_skeleton_models(cnf)) == expected == 5


def test_literal_conjunction_table1():
    _, phi = extract_skeleton(table1())
    lits = assignment_to_literal_conjunction([True, True, False, False, True], phi)
    assert [pretty(l) for l in lits] == ["(2 < z)", "(x < 8)", "(y >= 8)", "((x + y) >= 10)", "(3 < (x + y))"]


def test_literal_conjunction_trivial():
    phi = AtomMap((Atom(Rel.LT, X, IntConst(0)),))
    assert assignment_to_literal_conjunction([False], phi) == [Atom(Rel.GE, X, IntConst(0))]
    assert assignment_to_literal_conjunction([], AtomMap(())) == []


def test_negate_entry_complements():
    for rel in Rel:
        a = Atom(rel, X, IntConst(1))
        for v in range(-2, 4):
            assert evaluate(negate_entry(a), {"x": v}) == (not evaluate(a, {"x": v}))


def test_cnf_clause_cleaning():
    c = Cnf(2, [], 2)
    c.add([1, 1, 2])
    c.add([1, -1])
    assert c.clauses == [[1, 2]]


def test_dimacs_roundtrip():
    psi, phi = extract_skeleton(table1())
    cnf = to_cnf(psi, len(phi))
    text = dimacs.dumps(cnf, phi)
    assert "c var 2 Q (< x 8)" in text
    assert "p cnf 5 3" in text
    assert dimacs.loads(text) == (5, cnf.clauses)


# random Boolean structure over skeleton variables
skel_formulas = st.recursive(
    st.integers(0, 5).map(SkelVar),
    lambda inner: st.one_of(
        st.lists(inner, min_size=2, max_size=3).map(lambda a: And(tuple(a))),
        st.lists(inner, min_size=2, max_size=3).map(lambda a: Or(tuple(a))),
        inner.map(Not),
    ),
    max_leaves=8,
)


def _eval_skel(f, x):
    if isinstance(f, SkelVar):
        return x[f.id]
    if isinstance(f, And):
        return all(_eval_skel(a, x) for a in f.args)
    if isinstance(f, Or):
        return any(_eval_skel(a, x) for a in f.args)
    return not _eval_skel(f.arg, x)


@settings(max_examples=200, deadline=None)
@given(skel_formulas)
def test_cnf_projection_equivalence(f):
    cnf = to_cnf(f, 6)
    expected = {x for x in itertools.product([False, True], repeat=6) if _eval_skel(f, x)}
    assert enumerate_models_direct(cnf.num_vars, cnf.clauses, 6) == expected
    # full biconditionals: every projected model extends uniquely
    all_models = enumerate_models_direct(cnf.num_vars, cnf.clauses)
    assert len(all_models) == len(expected)
