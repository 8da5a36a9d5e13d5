import warnings

import pytest
from hypothesis import given, settings

from symsmt.ast import TRUE, And, Atom, BoolVar, IntConst, Or, Rel, Sort, Var
from symsmt.errors import ParseError, UnsupportedFeature
from symsmt.normalize import normalize
from symsmt.parser import parse_script
from symsmt.printer import serialize

from _util import formulas, script_of, table1

X, Y = Var("x", Sort.INT), Var("y", Sort.INT)


def test_single_atom():
    s = parse_script("(declare-const x Int)(assert (> x 2))(check-sat)")
    assert s.declarations == (("x", Sort.INT),)
    assert s.assertion == Atom(Rel.GT, X, IntConst(2))


def test_table1_shape():
    s = table1()
    assert [n for n, _ in s.declarations] == ["x", "y", "z"]
    assert isinstance(s.assertion, And) and len(s.assertion.args) == 3
    assert all(isinstance(a, Or) for a in s.assertion.args)


@pytest.mark.parametrize("text, feature", [
    ("(assert (forall ((x Int)) true))", "forall"),
    ("(declare-const x Int)(assert (> (div x 2) 1))", "div"),
    ("(declare-const x Int)(assert (> (mod x 2) 1))", "mod"),
    ("(declare-const x Int)(assert (let ((y x)) (> y 1)))", "let"),
    ("(declare-const x Int)(assert (> (ite true x 1) 1))", "ite"),
    ("(push 1)", "push"),
    ("(declare-fun f (Int) Int)", "uninterpreted function"),
    ("(declare-const r Real)", "sort Real"),
])
def test_unsupported(text, feature):
    with pytest.raises(UnsupportedFeature) as exc:
        parse_script(text)
    assert exc.value.feature == feature


@pytest.mark.parametrize("text, line, col", [
    ("(declare-const x Int)\n(assert (> x 2)", 2, 1),
    ("(assert true))", 1, 14),
    ("(declare-const x Int)\n  (assert (> y 2))", 2, 14),
    ("(declare-const x Int)(declare-const x Int)", 1, 22),
])
def test_parse_error_positions(text, line, col):
    with pytest.raises(ParseError) as exc:
        parse_script(text)
    assert (exc.value.line, exc.value.column) == (line, col)


def test_negative_literals_both_spellings():
    a = parse_script("(declare-const x Int)(assert (< x (- 5)))").assertion
    b = parse_script("(declare-const x Int)(assert (< x -5))").assertion
    assert a == b == Atom(Rel.LT, X, IntConst(-5))


def test_big_constants_kept_exact():
    s = parse_script("(declare-const x Int)(assert (< x 123456789012345678901234567890))")
    assert s.assertion.rhs.value == 123456789012345678901234567890


def test_declare_fun_zero_arity_and_bool():
    s = parse_script("(declare-fun x () Int)(declare-const p Bool)(assert (or p (< x 1)))")
    assert s.sorts == {"x": Sort.INT, "p": Sort.BOOL}
    assert BoolVar("p") in s.assertion.args


def test_chained_and_distinct():
    s = parse_script("(declare-const x Int)(declare-const y Int)(declare-const z Int)"
                     "(assert (< x y z))(assert (distinct x y z))")
    lt, ne = s.assertion.args
    assert len(lt.args) == 2 and len(ne.args) == 3
    assert all(a.rel is Rel.NEQ for a in ne.args)


def test_logic_warning():
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        s = parse_script("(set-logic QF_BV)(declare-const x Int)(assert (> x 0))")
    assert s.logic == "QF_BV" and any("QF_BV" in str(x.message) for x in w)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        parse_script("(set-logic QF_NIA)(set-info :status sat)(check-sat)(exit)")


def test_no_asserts_is_true():
    s = parse_script("(declare-const x Int)")
    assert s.assertion == TRUE
    assert "(assert true)" in serialize(s)


def test_roundtrip_examples():
    for s in (parse_script("(declare-const x Int)(assert (> x 2))"), table1()):
        assert parse_script(serialize(s)) == s


def test_table1_roundtrip_normal_form():
    s = table1()
    assert normalize(parse_script(serialize(s)).assertion) == normalize(s.assertion)


@settings(max_examples=200, deadline=None)
@given(formulas)
def test_roundtrip_property(f):
    s = script_of(f)
    assert parse_script(serialize(s)) == s
