"""Exhaustive goal evaluation.

Sets the domain leaves open are decided lazily: evaluation stops at the
first membership test on an undecided value and is retried with the value
in and out of the set. Every verdict is therefore an existential over the
set contents, as in the constraint goals.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterator

from ..domain import DomainSpec
from ..events import GroundEvent
from ..spl.evaluate import (
    EvaluationError, TriValue, close_allows, eval_condition, evaluate_tri, open_allows, tri_and, tri_diff,
)
from ..spl.model import NEVER, BNot, EventProp, SplError, SplPolicyModel
from ..verdict import Verdict, consistent, error, found
from ..wpdl.model import DataRef, WorkflowModel

CANDIDATE_LIMIT = 10**6


class OracleError(ValueError):
    """The goal lies outside what the oracle can enumerate."""


class OracleExplosion(OracleError):
    """More than the allowed number of candidate assignments."""


def enumerate_events(domain: DomainSpec) -> list[GroundEvent]:
    return list(domain.events())


class _Counter:
    def __init__(self, limit: int):
        self.limit = limit
        self.n = 0

    def tick(self) -> None:
        self.n += 1
        if self.n > self.limit:
            raise OracleExplosion(f"more than {self.limit} candidate assignments")


class _Undecided(Exception):
    def __init__(self, key):
        self.key = key


class _OpenSet:
    """A set the domain does not list; membership answers come from ``decided``."""

    def __init__(self, key: str, decided: dict):
        self.key = key
        self.decided = decided

    def test(self, x) -> bool:
        k = (self.key, type(x).__name__, x)
        if k not in self.decided:
            raise _Undecided(k)
        return self.decided[k]

    def __iter__(self):
        raise EvaluationError(f"cannot quantify over the unlisted set {self.key}")


def _explore(fn: Callable[[dict], object], counter: _Counter) -> Iterator[object]:
    """Results of ``fn`` under every relevant in/out choice for unlisted set members."""
    stack: list[dict] = [{}]
    while stack:
        decided = stack.pop()
        counter.tick()
        try:
            yield fn(decided)
        except _Undecided as u:
            stack.append({**decided, u.key: False})
            stack.append({**decided, u.key: True})


class _Policies:
    """Direct evaluation of the conjunction of several policies."""

    def __init__(self, models: list[SplPolicyModel], domain: DomainSpec):
        self.models = models
        self.domain = domain
        names = [m.name for m in models]
        if len(set(names)) != len(names):
            raise SplError("two policies share a name")
        self.values = {}
        for m in models:
            vals = {}
            for n in m.value_params:
                v = domain.value(m.name, n)
                if v is None:
                    raise OracleError(f"value parameter {m.name}.{n} has no value in the domain")
                vals[n] = v
            self.values[m.name] = vals

    def _key(self, m: SplPolicyModel, name: str) -> str:
        decl = m.set_decl(name)
        return name if decl is not None and decl.scope == "global" else f"{m.name}.{name}"

    def sets(self, m: SplPolicyModel, decided: dict | None) -> dict:
        out = {}
        for s in m.sets:
            members = self.domain.set_contents(m.name, s.name)
            if members is None:
                if decided is None:
                    raise OracleError(f"set {self._key(m, s.name)} has no contents in the domain")
                out[s.name] = _OpenSet(self._key(m, s.name), decided)
            else:
                out[s.name] = members
        return out

    def symbolic(self) -> list[str]:
        return [self._key(m, s.name) for m in self.models for s in m.sets
                if self.domain.set_contents(m.name, s.name) is None]

    def verdict(self, event: GroundEvent, decided: dict | None, models=None) -> TriValue:
        acc = TriValue.NOTAPPLY
        for m in self.models if models is None else models:
            v = evaluate_tri(m, event, self.sets(m, decided), self.values.get(m.name, {}))
            acc = v if acc is TriValue.NOTAPPLY else tri_and(acc, v)
        return acc


def _as_models(policies) -> list[SplPolicyModel]:
    return [policies] if isinstance(policies, SplPolicyModel) else list(policies)


def _check_pars(models, domain: DomainSpec) -> None:
    def walk(x):
        if isinstance(x, EventProp) and x.field == "par" and x.index > len(domain.pars):
            raise SplError(f"policy uses par[{x.index}] but the domain declares {len(domain.pars)}")
        for attr in ("left", "right", "expr", "body", "domain", "accept", "value"):
            if hasattr(x, attr):
                walk(getattr(x, attr))

    for m in models:
        for e in m.rules.values():
            walk(e)


def _event_search(models, domain, test: Callable, limit: int) -> Verdict:
    try:
        _check_pars(models, domain)
        pol = _Policies(models, domain)
        counter = _Counter(limit)
        for e in enumerate_events(domain):
            for ok in _explore(lambda dec: test(pol, e, dec), counter):
                if ok:
                    return consistent(search="witness", witness=(("event", e),))
    except (OracleError, SplError, EvaluationError) as err:
        return error(str(err))
    return found(search="exhausted")


def oracle_inapplicability(policies, domain: DomainSpec, limit: int = CANDIDATE_LIMIT) -> Verdict:
    return _event_search(_as_models(policies), domain,
                         lambda p, e, d: p.verdict(e, d) is not TriValue.NOTAPPLY, limit)


def oracle_monotonic_denial(policies, domain: DomainSpec, limit: int = CANDIDATE_LIMIT) -> Verdict:
    return _event_search(_as_models(policies), domain, lambda p, e, d: p.verdict(e, d) is not TriValue.DENY, limit)


def oracle_monotonic_acceptance(policies, domain: DomainSpec, limit: int = CANDIDATE_LIMIT) -> Verdict:
    return _event_search(_as_models(policies), domain, lambda p, e, d: p.verdict(e, d) is not TriValue.ALLOW, limit)


def _split_target(models, target: str) -> tuple[int, str]:
    if ":" in target:
        name, path = target.split(":", 1)
        for i, m in enumerate(models):
            if m.name == name:
                return i, path
        raise SplError(f"unknown policy {name}")
    head = target.split(".")[0]
    hits = [i for i, m in enumerate(models) if head == "query" or head in m.rules]
    if len(hits) != 1:
        raise SplError(f"redundancy target {target} is ambiguous or unknown; write Policy:{target}")
    return hits[0], target


def oracle_redundancy(policies, target: str, domain: DomainSpec, limit: int = CANDIDATE_LIMIT) -> Verdict:
    models = _as_models(policies)
    try:
        index, path = _split_target(models, target)
        changed = list(models)
        changed[index] = models[index].replace(path, NEVER)
    except SplError as err:
        return error(str(err))

    def test(p, e, d):
        return tri_diff(p.verdict(e, d), p.verdict(e, d, changed))

    return _event_search(models, domain, test, limit)


# ---- workflows ------------------------------------------------------------------------

def _alternatives(model: WorkflowModel, data: dict) -> list[tuple[frozenset, frozenset]]:
    """Ways to complete the workflow: required activities and time orderings between them."""

    def test(t) -> bool:
        conds = [t.condition] + [BNot(s.condition) for s in model.siblings_before(t)]
        return all(eval_condition(c, data) for c in conds)

    def combine(groups, join):
        if join == "AND":
            out = [(frozenset(), frozenset())]
            for g in groups:
                out = [(a1 | a2, o1 | o2) for a1, o1 in out for a2, o2 in g]
            return out
        return [alt for g in groups for alt in g]

    def via(t, slot):
        if not test(t):
            return []
        src = model.activity(t.source)
        if src.kind == "atomic":
            return [(acts, orders | {(src.name, slot)}) for acts, orders in required(src.name)]
        return routed(src, slot)

    def routed(d, slot):
        incoming = model.incoming(d.name)
        if not incoming:
            return [(frozenset(), frozenset())]
        return combine([via(t, slot) for t in incoming], d.join)

    def required(name):
        return [(acts | {name}, orders) for acts, orders in routed(model.activity(name), name)]

    out = []
    for end in model.ends:
        for alt in required(end):
            if alt not in out:
                out.append(alt)
    return out


def oracle_workflow(
    workflow: WorkflowModel,
    policies,
    domain: DomainSpec,
    assumption: str = "close",
    limit: int = CANDIDATE_LIMIT,
) -> Verdict:
    models = _as_models(policies)
    if assumption not in ("open", "close"):
        return error(f"unknown assumption {assumption}")
    admits = close_allows if assumption == "close" else open_allows
    try:
        _check_pars(models, domain)
        pol = _Policies(models, domain)
        if pol.symbolic():
            raise OracleError(f"set {pol.symbolic()[0]} has no contents in the domain")
        performers = {}
        for p in workflow.participants:
            members = domain.set_contents(workflow.name, p.name)
            if members is None:
                if p.kind != "person":
                    raise OracleError(f"participant {p.name} has no members in the domain")
                members = (p.name,)
            performers[p.name] = members
        for n in workflow.data:
            if n not in domain.data:
                raise OracleError(f"data {n} has no universe in the domain")
        events = enumerate_events(domain)
        allowed = [e for e in events if admits(pol.verdict(e, None))]
        counter = _Counter(limit)
        for values in itertools.product(*(domain.data[n] for n in workflow.data)):
            data = dict(zip(workflow.data, values))
            for acts, orders in _alternatives(workflow, data):
                trace = _assign(workflow, acts, orders, allowed, performers, data, counter)
                if trace is not None:
                    witness = tuple(sorted(trace.items(), key=lambda p: (p[1].time, p[0])))
                    return consistent(search="witness", witness=witness, data=tuple(data.items()))
    except (OracleError, SplError, EvaluationError) as err:
        return error(str(err))
    return found(search="exhausted")


def _same(x, y) -> bool:
    return x == y and type(x) is type(y)


def _matching(model, name, events, performers, data) -> list:
    a = model.activity(name)
    target = data[a.target.name] if isinstance(a.target, DataRef) else a.target
    return [
        e for e in events
        if _same(e.action, a.action) and _same(e.target, target)
        and any(_same(e.actor, m) for m in performers[a.performer])
    ]


def _assign(model, acts, orders, allowed, performers, data, counter) -> dict | None:
    """One event per activity, each admitted, matching the activity and respecting the orderings."""
    names = sorted(acts, key=[a.name for a in model.activities].index)
    cands = {n: _matching(model, n, allowed, performers, data) for n in names}
    chosen: dict = {}

    def ok(n) -> bool:
        for src, dst in orders:
            if src in chosen and dst in chosen and (n in (src, dst)):
                if not chosen[src].time < chosen[dst].time:
                    return False
        return True

    def rec(i) -> bool:
        if i == len(names):
            return True
        n = names[i]
        for e in cands[n]:
            counter.tick()
            chosen[n] = e
            if ok(n) and rec(i + 1):
                return True
            del chosen[n]
        return False

    return dict(chosen) if rec(0) else None


def replay_witness(
    goal: str,
    verdict: Verdict,
    policies,
    domain: DomainSpec,
    workflow: WorkflowModel | None = None,
    assumption: str = "close",
    target: str = "",
) -> bool:
    """Whether a verdict's witness really satisfies the goal (verdicts without one pass trivially)."""
    if not verdict.witness:
        return True
    models = _as_models(policies)
    domain_events = set(domain.events())
    if any(e not in domain_events for e in verdict.events):
        return False
    if goal == "wf-consistency":
        return _replay_trace(verdict, models, domain, workflow, assumption)
    (_, e), = verdict.witness
    pol = _Policies(models, domain)
    if goal == "inapplicability":
        test = lambda d: pol.verdict(e, d) is not TriValue.NOTAPPLY  # noqa: E731
    elif goal == "monotonic-deny":
        test = lambda d: pol.verdict(e, d) is not TriValue.DENY  # noqa: E731
    elif goal == "monotonic-allow":
        test = lambda d: pol.verdict(e, d) is not TriValue.ALLOW  # noqa: E731
    elif goal == "redundancy":
        index, path = _split_target(models, target)
        changed = list(models)
        changed[index] = models[index].replace(path, NEVER)
        test = lambda d: tri_diff(pol.verdict(e, d), pol.verdict(e, d, changed))  # noqa: E731
    else:
        return False
    return any(_explore(test, _Counter(CANDIDATE_LIMIT)))


def _replay_trace(verdict, models, domain, workflow, assumption) -> bool:
    admits = close_allows if assumption == "close" else open_allows
    pol = _Policies(models, domain)
    data = dict(verdict.data)
    trace = dict(verdict.witness)
    if set(data) != set(workflow.data) or len(trace) != len(verdict.witness):
        return False
    if not all(admits(pol.verdict(e, None)) for e in trace.values()):
        return False
    performers = {
        p.name: domain.set_contents(workflow.name, p.name) or ((p.name,) if p.kind == "person" else ())
        for p in workflow.participants
    }
    for acts, orders in _alternatives(workflow, data):
        if set(acts) != set(trace):
            continue
        if all(_matching(workflow, n, [trace[n]], performers, data) for n in acts) and all(
            trace[s].time < trace[d].time for s, d in orders
        ):
            return True
    return False


# ---- dispatch and tables ----------------------------------------------------------------

def oracle_goal(
    goal: str,
    policies,
    domain: DomainSpec,
    workflow: WorkflowModel | None = None,
    assumption: str = "close",
    target: str = "",
    limit: int = CANDIDATE_LIMIT,
) -> Verdict:
    if goal == "inapplicability":
        return oracle_inapplicability(policies, domain, limit)
    if goal == "monotonic-deny":
        return oracle_monotonic_denial(policies, domain, limit)
    if goal == "monotonic-allow":
        return oracle_monotonic_acceptance(policies, domain, limit)
    if goal == "redundancy":
        return oracle_redundancy(policies, target, domain, limit)
    if goal == "wf-consistency":
        if workflow is None:
            return error("wf-consistency needs a workflow")
        return oracle_workflow(workflow, policies, domain, assumption, limit)
    return error(f"unknown goal {goal}")


def tri_table(op: Callable[[TriValue, TriValue], TriValue]) -> dict:
    """The 3x3 table of a binary tri-valued operator."""
    return {(a, b): op(a, b) for a in TriValue for b in TriValue}


def diff_table() -> dict:
    """Whether the difference formula holds for every ground (D1, A1, D2, A2)."""
    out = {}
    for d1, a1, d2, a2 in itertools.product((False, True), repeat=4):
        out[(d1, a1, d2, a2)] = (d1 != d2) or ((d1 and a1) != (d2 and a2))
    return out
