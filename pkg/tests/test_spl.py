import pytest
from hypothesis import given, settings, strategies as st

from pcv.events import GroundEvent
from pcv.spl import (
    And, CyclicRule, DuplicateRule, Exists, MissingQueryRule, Not, RuleRef, Simple, SplError, SplSyntaxError,
    TriValue, UnboundSet, UnknownRule, compile_policy, evaluate_tri, parse_policies, parse_spl, rule_paths,
)
from pcv.spl.model import NEVER

SETS = {"OrgUsers": ["alice", "bob"], "IDocs": ["memo"]}


def ev(action, target, par, author="alice", time=1):
    return GroundEvent(author, action, target, (par,), time)


def test_private_policy_shape(private):
    assert private.name == "Private" and private.query == "Private"
    assert [(s.name, s.scope) for s in private.sets] == [("OrgUsers", "param"), ("IDocs", "internal")]
    assert isinstance(private.query_expr(), Simple)


@pytest.mark.parametrize("event, expected", [
    (ev("SendEmail", "memo", "bob"), TriValue.ALLOW),
    (ev("SendEmail", "memo", "eve"), TriValue.DENY),
    (ev("SendEmail", "flyer", "eve"), TriValue.NOTAPPLY),
    (ev("Print", "memo", "eve"), TriValue.NOTAPPLY),
])
def test_private_verdicts(private, event, expected):
    assert evaluate_tri(private, event, SETS) is expected


@pytest.mark.parametrize("text, error", [
    ("policy P() { }", MissingQueryRule),
    ("policy P() { ?Q: true :: x IN S }", SplError),
    ("policy P() { A: true :: true; A: true :: true; ?Q: A }", DuplicateRule),
    ("policy P() { ?Q: B }", UnknownRule),
    ("policy P() { A: B; B: A; ?Q: A }", CyclicRule),
    ("policy P() { ?Q: event.foo = 1 :: true }", SplSyntaxError),
    ("policy P( { }", SplSyntaxError),
    ("policy P() { ?Q: FORALL x IN S { true :: true } }", UnboundSet),
    ("policy P() { ?Q: true :: true } trailing", SplSyntaxError),
])
def test_diagnostics(text, error):
    with pytest.raises(error) as info:
        parse_spl(text)
    assert info.value.line >= 1


def test_syntax_error_position():
    with pytest.raises(SplSyntaxError) as info:
        parse_spl("policy P() {\n  ?Q: true :: event.foo = 1\n}")
    assert (info.value.line, info.value.col) == (2, 21)


def test_several_policies():
    models = parse_policies("policy A() { ?X: true :: true }\npolicy B() { ?Y: false :: true }")
    assert [m.name for m in models] == ["A", "B"]


def test_rule_references_and_paths():
    m = parse_spl("policy P(user set U, value Lim) { A: true :: event.time < Lim; "
                  "?Q: A AND NOT FORALL u IN U { event.author = u :: true } }")
    assert isinstance(m.rules["Q"], And) and m.rules["Q"].left == RuleRef("A")
    assert m.value_params == ["Lim"]
    assert rule_paths(m) == ["A", "query.left", "query.right", "query.right.expr"]
    replaced = m.replace("query.right.expr", NEVER)
    assert replaced.rules["Q"].right == Not(NEVER)
    assert m.rules["Q"].right != Not(NEVER)
    with pytest.raises(UnknownRule):
        m.replace("query.left.left", NEVER)


def test_compile_private(private):
    c = compile_policy(private)
    assert c.functor == "private" and c.internal == ["IDocs"] and c.max_par == 1
    (rule,) = c.rules
    assert rule.kind == "simplification"
    assert rule.text().startswith("private @ private(Event, OrgUsers, Locals, Globals, R) <=> ")
    assert 'R = r(and(Action = "SendEmail", in(Target, IDocs)), in(Par1, OrgUsers))' in rule.text()


def test_quantifiers_compile_to_tri_constraints():
    m = parse_spl("policy P(user set U) { ?Q: EXIST u IN U { event.author = u :: true } }")
    text = compile_policy(m).rules[0].text()
    assert "existsr(U, tr(Q_u, [], true, r(Actor = Q_u, true)), R1)" in text


def test_skolemization_only_at_positive_top_level():
    witness = parse_spl("policy P(user set U) { ?Q: EXIST u IN U { true :: event.author = u } }")
    c = compile_policy(witness, skolemize=True)
    assert c.skolemized == 1
    assert "existsr" not in c.rules[0].text() and "in(Sk_u" in c.rules[0].text()
    assert compile_policy(witness).skolemized == 0
    negated = parse_spl("policy P(user set U) { ?Q: NOT EXIST u IN U { true :: event.author = u } }")
    assert compile_policy(negated, skolemize=True).skolemized == 0
    in_domain = parse_spl("policy P(user set U) { ?Q: EXIST u IN U { event.author = u :: true } }")
    assert compile_policy(in_domain, skolemize=True).skolemized == 0


names = st.sampled_from(["alice", "bob", "eve"])


@settings(max_examples=80, deadline=None)
@given(names, st.sampled_from(["SendEmail", "Print"]), st.sampled_from(["memo", "flyer"]), names)
def test_negation_swaps_allow_and_deny(private, author, action, target, par):
    negated = parse_spl("policy N(user set OrgUsers) { object set IDocs; ?N: NOT P; "
                        "P: event.action = \"SendEmail\" & event.target IN IDocs :: event.par[1] IN OrgUsers }")
    e = GroundEvent(author, action, target, (par,), 1)
    base, neg = evaluate_tri(private, e, SETS), evaluate_tri(negated, e, SETS)
    assert neg is {TriValue.ALLOW: TriValue.DENY, TriValue.DENY: TriValue.ALLOW}.get(base, base)


def test_exists_and_forall_over_empty_sets():
    m = parse_spl("policy P(user set U) { ?Q: FORALL u IN U { true :: event.author = u } }")
    e = GroundEvent("a", "x", "y", (), 1)
    assert evaluate_tri(m, e, {"U": []}) is TriValue.NOTAPPLY
    assert evaluate_tri(m, e, {"U": ["a"]}) is TriValue.ALLOW
    assert evaluate_tri(m, e, {"U": ["a", "b"]}) is TriValue.DENY
    assert isinstance(parse_spl("policy P(user set U) { ?Q: EXISTS u IN U { true :: true } }").rules["Q"], Exists)
