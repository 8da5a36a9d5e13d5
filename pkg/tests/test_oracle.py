import pytest

from symsmt.ast import Atom, IntConst, Rel, Sort, Var
from symsmt.errors import ResourceExceeded
from symsmt.oracle import (
    apply_to_assignment, brute_force, enumerate_models_direct, enumerate_skeleton_models,
    evaluate, lex_leq, orbit_coverage, orbits,
)
from symsmt.parser import parse_script
from symsmt.skeleton import Cnf, extract_skeleton, to_cnf

from _util import intro, table1


def test_table1_bounded_models():
    s = table1()
    r = brute_force(s, 3)
    assert r.sat and r.count == 343
    assert {"x": 3, "y": 3, "z": 3} in [m for m in brute_force(s, 3, cap=10 ** 5).models]
    assert evaluate(s.assertion, {"x": 3, "y": 3, "z": 3})
    assert brute_force(s, 16).count == 26190


def test_intro_formula():
    r = brute_force(intro(), 4)
    assert r.sat and r.count == 694
    assert {"x": 3, "y": 3, "z": 3} in r.models


def test_boundary_unsat():
    s = parse_script("(declare-const x Int)(assert (> x 6))")
    assert brute_force(s, 6).status == "unsat(bounded)"
    assert brute_force(s, 7).count == 1


def test_grid_cap():
    s = parse_script("".join(f"(declare-const v{i} Int)" for i in range(7)) + "(assert (> v0 0))")
    with pytest.raises(ResourceExceeded):
        brute_force(s, 16)


def test_large_products_stay_exact():
    s = parse_script("(declare-const x Int)(declare-const y Int)"
                     "(assert (= (* x x x x x x x x x x x x x x) 4398046511104))")
    # 8^14 = 2^42; with bound 8 both signs of x work, y is free
    assert brute_force(s, 8).count == 2 * 17


def test_table1_skeleton_models_match_direct():
    psi, phi = extract_skeleton(table1())
    cnf = to_cnf(psi, len(phi))
    models = enumerate_skeleton_models(cnf)
    assert len(models) == 15
    assert models == enumerate_models_direct(cnf.num_vars, cnf.clauses, 5)


def test_enumeration_trivial():
    assert len(enumerate_skeleton_models(Cnf(2, [], 2))) == 4
    assert enumerate_skeleton_models(Cnf(2, [[]], 2)) == set()


def test_apply_and_lex():
    theta = {1: 2, 2: 1}
    x = (True, True, False, False, True)
    assert apply_to_assignment(theta, x) == (True, False, True, False, True)
    assert lex_leq((True, False, True, False, True), x, range(5))
    assert not lex_leq(x, (True, False, True, False, True), range(5))


def test_table1_orbit_survivor_is_lex_smaller():
    psi, phi = extract_skeleton(table1())
    cnf = to_cnf(psi, len(phi))
    models = enumerate_skeleton_models(cnf)
    sbp = cnf.copy()
    sbp.add([-2, 3])
    survivors = enumerate_skeleton_models(sbp)
    rep = orbit_coverage(models, survivors, [{1: 2, 2: 1}])
    assert rep.ok and rep.survivors + rep.pruned == len(models)
    pre = (True, True, False, False, True)
    post = (True, False, True, False, True)
    orbit = next(o for o in orbits(models, [{1: 2, 2: 1}]) if pre in o)
    assert sorted(orbit) == sorted([pre, post])
    assert post in survivors and pre not in survivors


def test_identity_group_singletons():
    models = {(False, True), (True, True)}
    rep = orbit_coverage(models, models, [])
    assert rep.orbits == 2 and rep.survivors == 2 and rep.pruned == 0
