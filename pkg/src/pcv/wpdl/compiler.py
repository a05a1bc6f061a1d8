"""Translation of a workflow into activity and transition rules.

An atomic activity ``a`` becomes ``a(E, G) <=> incoming, performed(a, E),
E in AllEvents, Actor in Performer, Action = ..., Target = ...``; a dummy
activity only routes its incoming transitions. A transition ``t`` gets a
test rule (its condition plus the negated conditions of higher-priority
XOR siblings) and a rule chaining it to an earlier event of its source.
``G`` is the globals association list carrying AllEvents, the performer
sets and the workflow data.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..engine.rules import ChrRule, Head
from ..engine.terms import TRUE, Atom, Compound, Int, Str, Term, Var
from ..spl.compiler import _Compiler, _Scope, _var_name, functor_name
from ..spl.model import BConst, BNot, Cmp, Name, SplPolicyModel
from .model import Activity, DataRef, Transition, WorkflowModel

ALL_EVENTS = "AllEvents"


@dataclass
class CompiledWorkflow:
    model: WorkflowModel
    rules: list[ChrRule]
    activity_functors: dict

    def end_goal(self, event: Term, globals_term: Term) -> Term:
        """Disjunction over the end activities applied to ``event``."""
        goals = [Compound(self.activity_functors[n], (event, globals_term)) for n in self.model.ends]
        out = goals[-1]
        for g in reversed(goals[:-1]):
            out = Compound(";", (g, out))
        return out


def _lookup(key: str, g: Var, v: Var) -> Term:
    return Compound("lookup", (Str(key), g, v))


def _data_names(b, acc: list) -> list:
    if isinstance(b, Cmp):
        for v in (b.left, b.right):
            if isinstance(v, Name) and v.name not in acc:
                acc.append(v.name)
    elif hasattr(b, "left"):
        _data_names(b.left, acc)
        _data_names(b.right, acc)
    elif isinstance(b, BNot):
        _data_names(b.expr, acc)
    return acc


def _literal(v) -> Term:
    return Int(v) if isinstance(v, int) else Str(v)


def compile_workflow(model: WorkflowModel) -> CompiledWorkflow:
    functors = {a.name: functor_name(a.name) for a in model.activities}
    tfunctors = {t.name: functor_name(t.name) for t in model.transitions}
    rules: list[ChrRule] = []
    for a in model.activities:
        rules.append(_activity_rule(model, a, functors[a.name], tfunctors))
    for t in model.transitions:
        rules.extend(_transition_rules(model, t, functors, tfunctors[t.name]))
    return CompiledWorkflow(model, rules, functors)


def _incoming(model: WorkflowModel, a: Activity, event: Var, g: Var, tfunctors: dict) -> list[Term]:
    calls = [Compound(tfunctors[t.name], (event, g)) for t in model.incoming(a.name)]
    if not calls:
        return []
    if a.join == "AND" or len(calls) == 1:
        return calls
    out = calls[-1]
    for c in reversed(calls[:-1]):
        out = Compound(";", (c, out))
    return [out]


def _activity_rule(model: WorkflowModel, a: Activity, functor: str, tfunctors: dict) -> ChrRule:
    event, g = Var("E"), Var("G")
    goals = _incoming(model, a, event, g, tfunctors)
    if a.kind == "atomic":
        actor, action, target, time = Var("Actor"), Var("Action"), Var("Target"), Var("T")
        all_events, performers = Var("All"), Var("Performers")
        goals += [
            Compound("performed", (Atom(functor), event)),
            _lookup(ALL_EVENTS, g, all_events),
            Compound("=", (event, Compound("event", (actor, action, target, Var("_"), time)))),
            Compound("in", (event, all_events)),
            _lookup(a.performer, g, performers),
            Compound("in", (actor, performers)),
            Compound("=", (action, _literal(a.action))),
        ]
        if isinstance(a.target, DataRef):
            value = Var(_var_name(a.target.name))
            goals += [_lookup(a.target.name, g, value), Compound("=", (target, value))]
        else:
            goals.append(Compound("=", (target, _literal(a.target))))
    head = Head(functor, (event, g), None)
    return ChrRule(functor, (), (head,), (), tuple(goals) or (TRUE,))


def _condition(model: WorkflowModel, t: Transition, g: Var) -> list[Term]:
    siblings = model.siblings_before(t)
    conds = [t.condition] + [BNot(s.condition) for s in siblings]
    conds = [c for c in conds if c != BConst(True)]
    names: list = []
    for c in conds:
        _data_names(c, names)
    values = {n: Var(_var_name(n)) for n in names}
    goals: list[Term] = [_lookup(n, g, v) for n, v in values.items()]
    comp = _Compiler(SplPolicyModel(model.name), False)
    scope = _Scope({}, {}, values)
    goals += [comp.formula(c, scope) for c in conds]
    return goals


def _transition_rules(model: WorkflowModel, t: Transition, functors: dict, functor: str) -> list[ChrRule]:
    event, g = Var("E"), Var("G")
    test = functor + "_test"
    test_goals = _condition(model, t, g) or [TRUE]
    test_rule = ChrRule(test, (), (Head(test, (event, g), None),), (), tuple(test_goals))

    source = model.activity(t.source)
    goals: list[Term] = [Compound(test, (event, g))]
    if source.kind == "atomic":
        prev, all_events, pt, time = Var("PrevE"), Var("All"), Var("PT"), Var("T")
        goals += [
            Compound(functors[source.name], (prev, g)),
            _lookup(ALL_EVENTS, g, all_events),
            Compound("=", (event, Compound("event", (Var("_"), Var("_"), Var("_"), Var("_"), time)))),
            Compound("in", (event, all_events)),
            Compound("=", (prev, Compound("event", (Var("_"), Var("_"), Var("_"), Var("_"), pt)))),
            Compound("lt", (pt, time)),
        ]
    else:
        goals.append(Compound(functors[source.name], (event, g)))
    rule = ChrRule(functor, (), (Head(functor, (event, g), None),), (), tuple(goals))
    return [test_rule, rule]



