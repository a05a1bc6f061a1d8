import random

import pytest
from hypothesis import given, settings, strategies as st

from corpus_gen import workflow_text
from pcv.engine import Var
from pcv.spl import BConst
from pcv.wpdl import (
    CyclicWorkflow, DanglingReference, MissingStartActivity, UnsupportedActivity, WorkflowSyntaxError,
    compile_workflow, parse_workflow,
)

ACT = 'activity {} atomic performer P action "x" target "d";'


def wf(body):
    return "workflow W { participant P person; " + body + " }"


def test_budget_structure(budget_wf):
    assert budget_wf.start == "a0" and budget_wf.ends == ("a1", "a2")
    a0 = budget_wf.activity("a0")
    assert a0.split == "XOR" and a0.priority == ("t0", "t1")
    t0, t1 = budget_wf.outgoing("a0")
    assert budget_wf.siblings_before(t1) == [t0] and budget_wf.siblings_before(t0) == []
    assert t1.condition == BConst(True)
    assert [t.name for t in budget_wf.incoming("a2")] == ["t1"]


def test_budget_compilation(budget_wf):
    c = compile_workflow(budget_wf)
    texts = {r.name: r.text() for r in c.rules}
    assert len(c.rules) == 3 + 2 * 2
    assert 'lookup("Boss", G, Performers)' in texts["a2"] and "t1(E, G)" in texts["a2"]
    assert "not(lt(S_cost, 1000))" in texts["t1_test"]
    assert "lt(PT, T)" in texts["t0"]
    goal = c.end_goal(Var("E"), Var("G"))
    assert goal.functor == ";" and [a.functor for a in goal.args] == ["a1", "a2"]


@pytest.mark.parametrize("body, error", [
    (ACT.format("a") + " activity l loop; start a; end a;", UnsupportedActivity),
    (ACT.format("a") + ACT.format("b") + " transition t from a to b; transition u from b to a; start a; end b;",
     CyclicWorkflow),
    (ACT.format("a") + " end a;", MissingStartActivity),
    (ACT.format("a") + " activity d dummy; transition t from a to d; start a; end d;", WorkflowSyntaxError),
    (ACT.format("a") + " transition t from a to zz; start a; end a;", DanglingReference),
    ('activity a atomic performer Q action "x" target "d"; start a; end a;', DanglingReference),
    (ACT.format("a") + " transition t from a to a when size < 3; start a; end a;", DanglingReference),
    (ACT.format("a") + " activity a dummy; start a; end a;", WorkflowSyntaxError),
])
def test_rejected_workflows(body, error):
    with pytest.raises(error):
        parse_workflow(wf(body))


def test_nested_subflows_are_rejected():
    text = wf(ACT.format("a") + " activity s subflow S; transition t from a to s; start a; end a; "
              "subflow S { activity c subflow T; start c; end c; subflow T { " + ACT.format("z") +
              " start z; end z; } }")
    with pytest.raises((UnsupportedActivity, WorkflowSyntaxError)):
        parse_workflow(text)


def test_subflow_is_inlined():
    text = wf(ACT.format("a") + " activity s subflow S; " + ACT.format("b") +
              " transition t0 from a to s; transition t1 from s to b; start a; end b; "
              "subflow S { " + ACT.format("c") + ACT.format("e") + " transition u from c to e; start c; end e; }")
    m = parse_workflow(text)
    names = {a.name: a.kind for a in m.activities}
    assert names == {"a": "atomic", "s": "dummy", "b": "atomic", "s_c": "atomic", "s_e": "atomic",
                     "s_enter": "dummy"}
    edges = {(t.source, t.dest) for t in m.transitions}
    assert {("a", "s_enter"), ("s_enter", "s_c"), ("s_c", "s_e"), ("s_e", "s"), ("s", "b")} == edges
    assert len(compile_workflow(m).rules) == 6 + 2 * 5


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_rule_count_invariant(seed):
    m = parse_workflow(workflow_text(random.Random(seed), "Gen"))
    c = compile_workflow(m)
    assert len(c.rules) == len(m.activities) + 2 * len(m.transitions)
    heads = [r.heads[0].functor for r in c.rules]
    assert len(heads) == len(set(heads))
    # every rule that calls another activity or transition calls one that exists
    defined = set(heads)
    for r in c.rules:
        for goal in r.body:
            f = getattr(goal, "functor", None)
            if f and (f in {a.name for a in m.activities} or f in {t.name for t in m.transitions}):
                assert f in defined
