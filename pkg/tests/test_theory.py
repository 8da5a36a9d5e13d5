import itertools

import pytest
from hypothesis import given, settings, strategies as st

from symsmt.ast import Atom, BoolVar, IntConst, Mul, Not, Rel, Sort, Var, Add
from symsmt.oracle import evaluate
from symsmt.parser import parse_script
from symsmt.skeleton import assignment_to_literal_conjunction, extract_skeleton
from symsmt.theory import Consistency, DomainBound, check_consistency, conflict_clause

from _util import NAMES, atoms, table1

X, Y = Var("x", Sort.INT), Var("y", Sort.INT)


def lt(a, b):
    return Atom(Rel.LT, a, b)


def test_table1_post_theta_conjunction():
    _, phi = extract_skeleton(table1())
    lits = assignment_to_literal_conjunction([True, False, True, False, True], phi)
    r = check_consistency(lits, DomainBound(16))
    assert r.outcome is Consistency.CONSISTENT
    assert all(evaluate(l, r.model) for l in lits)
    assert r.model["x"] >= 8 and r.model["y"] < 8 and r.model["z"] > 2


def test_trivially_inconsistent():
    r = check_consistency([lt(X, IntConst(0)), Atom(Rel.GT, X, IntConst(0))], 5)
    assert r.outcome is Consistency.INCONSISTENT and r.core == [0, 1]


def test_nonlinear_product():
    lits = [Atom(Rel.EQ, Mul((X, Y)), IntConst(6)), Atom(Rel.GE, X, IntConst(2)), Atom(Rel.GE, Y, IntConst(2))]
    r = check_consistency(lits, 4)
    assert r.outcome is Consistency.CONSISTENT
    assert (r.model["x"], r.model["y"]) in {(2, 3), (3, 2)}


def test_bound_edges():
    assert check_consistency([Atom(Rel.GT, X, IntConst(8))], 8).outcome is Consistency.INCONSISTENT
    r = check_consistency([Atom(Rel.GE, X, IntConst(8))], 8)
    assert r.model == {"x": 8}


def test_unconstrained_variables_get_values():
    r = check_consistency([lt(X, IntConst(3))], 4, variables=["w", "x"])
    assert set(r.model) == {"w", "x"} and r.model["w"] == 0


def test_bool_literals():
    p = BoolVar("p")
    assert check_consistency([p, Not(p)], 3).outcome is Consistency.INCONSISTENT
    r = check_consistency([Not(p), lt(X, IntConst(0))], 3)
    assert r.model["p"] is False


def test_shrunk_core_is_infeasible_and_smaller():
    Z = Var("z", Sort.INT)
    lits = [lt(Z, IntConst(2)), lt(X, IntConst(0)), lt(Y, IntConst(1)), Atom(Rel.GT, X, IntConst(0))]
    r = check_consistency(lits, 5, shrink_core=True)
    assert r.core == [1, 3]
    assert check_consistency([lits[i] for i in r.core], 5).outcome is Consistency.INCONSISTENT


def test_cancelled_at_deadline():
    lits = [Atom(Rel.EQ, Mul((X, X, X)), Add((Mul((Y, Y, Y)), IntConst(1))))]
    r = check_consistency(lits, 30, deadline=0.0)
    assert r.outcome is Consistency.CANCELLED


def test_domain_bound_validation():
    with pytest.raises(ValueError):
        DomainBound(0)


def test_conflict_clauses():
    assert conflict_clause({0: True, 1: False}, [0, 1]) == [-1, 2]
    assert conflict_clause([True, True, False, False, True], range(5)) == [-1, -2, 3, 4, -5]
    assert conflict_clause([True], [0]) == [-1]


def grid_consistent(lits, B):
    for vals in itertools.product(range(-B, B + 1), repeat=len(NAMES)):
        m = dict(zip(NAMES, vals))
        if all(evaluate(l, m) for l in lits):
            return True
    return False


@settings(max_examples=150, deadline=None)
@given(st.lists(atoms, min_size=1, max_size=4), st.integers(1, 4))
def test_agrees_with_grid(lits, B):
    r = check_consistency(lits, B, variables=list(NAMES))
    assert (r.outcome is Consistency.CONSISTENT) == grid_consistent(lits, B)
    if r.model is not None:
        assert all(-B <= r.model[n] <= B for n in NAMES)
        assert all(evaluate(l, r.model) for l in lits)


@settings(max_examples=80, deadline=None)
@given(st.lists(atoms, min_size=1, max_size=3), st.integers(1, 4))
def test_monotone_in_bound(lits, B):
    if check_consistency(lits, B).outcome is Consistency.CONSISTENT:
        assert check_consistency(lits, B + 2).outcome is Consistency.CONSISTENT
