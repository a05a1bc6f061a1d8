from hypothesis import given, strategies as st

from pcv.engine import Atom, Compound, Int, Str, Var, compare_terms, format_term, make_list, mk, parse_term
from pcv.engine.syntax import SyntaxError_, conj_list, parse_rule_text, split_rules
from pcv.engine.terms import substitute, term_vars

import pytest

atoms = st.sampled_from(["a", "foo", "x_1", "[]", "Weird atom", "it's"]).map(Atom)
ints = st.integers(-50, 50).map(Int)
strs = st.text(alphabet="ab \"\\'c", max_size=5).map(Str)
var_names = st.sampled_from(["X", "Y", "Zed"])


def terms(vars_: dict):
    leaves = st.one_of(atoms, ints, strs, var_names.map(lambda n: vars_.setdefault(n, Var(n))))
    return st.recursive(
        leaves,
        lambda kids: st.one_of(
            st.tuples(st.sampled_from(["f", "g", "event"]), st.lists(kids, min_size=1, max_size=3)).map(
                lambda p: Compound(*p)
            ),
            st.lists(kids, max_size=3).map(make_list),
        ),
        max_leaves=8,
    )


@given(st.data())
def test_format_parse_round_trip(data):
    vars_: dict = {}
    t = data.draw(terms(vars_))
    names = {v: v.name for v in vars_.values()}
    back = parse_term(format_term(t, names))
    assert format_term(back, {v: v.name for v in term_vars(back)}) == format_term(t, names)


def test_infix_and_timed_terms_print_back():
    for text in ["X = f(Y)", "(X @=< Y)@T", "lt(A, B)@3", "[a, b | T]", "(a; b)", "\"q\\\"\""]:
        t = parse_term(text)
        assert format_term(parse_term(format_term(t, {})), {}) == format_term(t, {})


def test_mk_coerces_python_values():
    assert mk([1, "a", True]) == make_list([Int(1), Str("a"), Atom("true")])
    with pytest.raises(TypeError):
        mk(1.5)


def test_substitute_and_vars():
    x, y = Var("X"), Var("Y")
    t = Compound("f", (x, Compound("g", (y, x))))
    assert list(term_vars(t)) == [x, y, x]
    assert substitute(t, {x: Int(1)}) == Compound("f", (Int(1), Compound("g", (y, Int(1)))))


def test_standard_order_of_terms():
    ordered = [Var("A"), Int(-3), Int(2), Atom("a"), Str("a"), Str("b"), Compound("f", (Int(1),))]
    for i, a in enumerate(ordered):
        for b in ordered[i + 1 :]:
            assert compare_terms(a, b) < 0 and compare_terms(b, a) > 0


def test_rule_text_parts():
    rt = parse_rule_text("n @ a(X), b(Y) \\ c(X) <=> X == Y | d(X), (e ; f).")
    assert rt.name == "n" and len(rt.kept) == 2 and len(rt.removed) == 1
    assert len(rt.guard) == 1 and len(rt.body) == 2
    assert conj_list(parse_term("a, b, true")) == [Atom("a"), Atom("b")]


def test_syntax_errors():
    with pytest.raises(SyntaxError_):
        parse_term("f(")
    with pytest.raises(SyntaxError_):
        split_rules("a <=> b")
    with pytest.raises(SyntaxError_):
        parse_rule_text("a, b.")
