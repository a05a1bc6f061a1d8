"""The inconsistency goals, run on the rewriting engine.

Every goal is a conjunction posted against one program made of the
kernel, the logic and tri-logic packs, the bridge packs and the compiled
policies (and workflow). Several policies are combined with ``tri_and``
into one master verdict.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from ..engine.rules import ProgramError, program
from ..engine.solver import BUDGET_EXHAUSTED, DEFAULT_BUDGET, SATISFIABLE, SearchState
from ..engine.terms import NIL, Atom, Compound, Int, Str, Term, Var, format_term, make_list
from ..events import GroundEvent
from ..kernel import build_kernel
from ..spl.compiler import CompiledPolicy, compile_policy
from ..spl.handler import build_logic_pack, build_trilogic_pack
from ..spl.model import NEVER, SplError, SplPolicyModel
from ..wpdl.compiler import ALL_EVENTS, CompiledWorkflow, compile_workflow
from ..wpdl.model import WorkflowModel
from .domain import DomainSpec, universe_term, value_term
from .packs import build_diff_pack, build_open_close_pack, build_trace_pack
from ..verdict import InconsistencyReport, Verdict, consistent, error, found

ASSUMPTIONS = ("open", "close")


@lru_cache(maxsize=2)
def base_rules(timed: bool = True) -> tuple:
    packs = (
        build_kernel(timed), build_logic_pack(), build_trilogic_pack(),
        build_open_close_pack(), build_diff_pack(), build_trace_pack(),
    )
    return tuple(r for p in packs for r in p.rules)


def goal_program(*compiled):
    return program(list(base_rules()), *[c.rules for c in compiled])


# ---- binding policies to a domain -----------------------------------------------------

class PolicyBinding:
    """Terms for the sets, value parameters and locals of compiled policies.

    Global sets are shared by name; every other set is private to its
    policy. Sets the domain lists become ground lists, the rest stay
    unbound (symbolic) and are shared by every call in one goal.
    """

    def __init__(self, compiled: Sequence[CompiledPolicy], domain: DomainSpec, extra_globals=()):
        self.compiled = list(compiled)
        self.domain = domain
        self.terms: dict[str, Term] = {}
        names = [c.functor for c in self.compiled]
        if len(set(names)) != len(names):
            raise SplError("two policies share a name")
        entries = list(extra_globals)
        seen = {format_term(e.args[0]) for e in entries}
        for c in self.compiled:
            for g in c.globals:
                term = self.set_term(c.model, g)
                if f'"{g}"' not in seen:
                    seen.add(f'"{g}"')
                    entries.append(Compound("kv", (Str(g), term)))
        self.globals_term = Compound("globals", (make_list(entries),))

    def _key(self, model: SplPolicyModel, name: str) -> str:
        decl = model.set_decl(name)
        return name if decl is not None and decl.scope == "global" else f"{model.name}.{name}"

    def set_term(self, model: SplPolicyModel, name: str) -> Term:
        key = self._key(model, name)
        if key not in self.terms:
            members = self.domain.set_contents(model.name, name)
            self.terms[key] = Var("Set") if members is None else make_list([value_term(m) for m in members])
        return self.terms[key]

    def value_term(self, model: SplPolicyModel, name: str) -> Term:
        key = f"{model.name}.{name}"
        if key not in self.terms:
            v = self.domain.value(model.name, name)
            self.terms[key] = Var("Value") if v is None else value_term(v)
        return self.terms[key]

    def call(self, c: CompiledPolicy, event: Term, result: Term) -> Term:
        model = c.model
        params = [
            self.value_term(model, n) if sort == "value" else self.set_term(model, n)
            for n, sort in model.parameters
        ]
        locals_term = c.locals_term([self.set_term(model, n) for n in c.internal])
        return c.head_goal(event, params, locals_term, self.globals_term, result)

    def master(self, event: Term, result: Term, compiled=None) -> tuple[list[Term], list[Var]]:
        """Goals computing the conjunction of all policies on ``event``, and the fresh variables used."""
        compiled = self.compiled if compiled is None else compiled
        if not compiled:
            return [Compound("=", (result, Compound("r", (Atom("fail"), Atom("true")))))], []
        if len(compiled) == 1:
            return [self.call(compiled[0], event, result)], []
        fresh = [Var(f"R{i}") for i in range(len(compiled))]
        goals = [self.call(c, event, r) for c, r in zip(compiled, fresh)]
        acc: Term = fresh[0]
        for i, r in enumerate(fresh[1:], 1):
            out = result if i == len(fresh) - 1 else Var(f"M{i}")
            goals.append(Compound("tri_and", (acc, r, out)))
            if out is not result:
                fresh.append(out)
            acc = out
        return goals, fresh


# ---- helpers ------------------------------------------------------------------------------

def _scalar(t: Term):
    if type(t) is Int:
        return t.value
    if type(t) is Str:
        return t.value
    if type(t) is Atom:
        return t.name
    raise ValueError(f"not a ground value: {format_term(t)}")


def term_to_event(t: Term) -> GroundEvent:
    if not (type(t) is Compound and t.functor == "event" and len(t.args) == 5):
        raise ValueError(f"not an event: {format_term(t)}")
    actor, action, target, pars, time = t.args
    items = []
    while type(pars) is Compound and pars.functor == ".":
        items.append(_scalar(pars.args[0]))
        pars = pars.args[1]
    if pars != NIL or type(time) is not Int:
        raise ValueError(f"not a ground event: {format_term(t)}")
    return GroundEvent(_scalar(actor), _scalar(action), _scalar(target), tuple(items), time.value)


def _shorten(t: Term) -> Term:
    """Abbreviate long ground lists so residual stores stay readable."""
    if type(t) is not Compound:
        return t
    if t.functor == "." and not t.has_vars:
        n, cur = 0, t
        while type(cur) is Compound and cur.functor == ".":
            n, cur = n + 1, cur.args[1]
        if n > 6:
            return Atom(f"<{n} items>")
    return Compound(t.functor, [_shorten(a) for a in t.args])


def _residual(state: SearchState) -> tuple:
    names: dict = {}
    return tuple(sorted(format_term(_shorten(t), names) for t in state.store.residual()))


def _as_models(policies) -> list[SplPolicyModel]:
    if isinstance(policies, SplPolicyModel):
        return [policies]
    return list(policies)


class _Run:
    def __init__(self, goal: str, models, domain: DomainSpec, workflow=None, assumption="", target=""):
        self.report = InconsistencyReport(
            goal, tuple(m.name for m in models), Verdict(""), workflow.name if workflow else "",
            assumption, target, domain.size,
        )

    def solve(self, goals: list[Term], prog, budget: int) -> tuple[str, SearchState]:
        state = SearchState(prog, budget)
        state.add_goal(goals)
        status = state.run()
        self.report.firings = state.stats.firings
        self.report.choice_points = state.stats.choice_points
        self.report.elapsed = state.stats.elapsed
        return status, state

    def finish(self, verdict: Verdict) -> InconsistencyReport:
        self.report.verdict = verdict
        return self.report


def _budget_error(budget: int) -> Verdict:
    return error(f"step budget of {budget} firings exhausted", "budget-limited")


def _check_pars(compiled, domain: DomainSpec) -> None:
    for c in compiled:
        if c.max_par > len(domain.pars):
            raise SplError(f"policy {c.model.name} uses par[{c.max_par}] but the domain declares {len(domain.pars)}")


# ---- policy self-consistency ----------------------------------------------------------

def _event_goal(run: _Run, models, domain, budget, condition) -> InconsistencyReport:
    """Search an event of the domain on which ``condition(D, A)`` holds for the master policy."""
    try:
        compiled = [compile_policy(m) for m in models]
        _check_pars(compiled, domain)
        binding = PolicyBinding(compiled, domain)
        event, d, a = Var("E"), Var("D"), Var("A")
        goals = [Compound("in", (event, universe_term(domain)))]
        master, _ = binding.master(event, Compound("r", (d, a)))
        goals += master + [condition(d, a)]
        status, state = run.solve(goals, goal_program(*compiled), budget)
    except (SplError, ProgramError, ValueError) as err:
        return run.finish(error(str(err)))
    if status == BUDGET_EXHAUSTED:
        return run.finish(_budget_error(budget))
    if status == SATISFIABLE:
        e = term_to_event(state.store.resolve(event))
        return run.finish(consistent(search="witness", witness=(("event", e),), residual=_residual(state)))
    return run.finish(found(search="exhausted"))


def _not(t: Term) -> Term:
    return Compound("not", (t,))


def check_inapplicability(policies, domain: DomainSpec, budget: int = DEFAULT_BUDGET) -> InconsistencyReport:
    """Inconsistent when no domain event lies in the policy's domain."""
    models = _as_models(policies)
    return _event_goal(_Run("inapplicability", models, domain), models, domain, budget, lambda d, a: d)


def check_monotonic_denial(policies, domain: DomainSpec, budget: int = DEFAULT_BUDGET) -> InconsistencyReport:
    """Inconsistent when every domain event is denied."""
    models = _as_models(policies)
    cond = lambda d, a: Compound("or", (_not(d), a))  # noqa: E731
    return _event_goal(_Run("monotonic-deny", models, domain), models, domain, budget, cond)


def check_monotonic_acceptance(policies, domain: DomainSpec, budget: int = DEFAULT_BUDGET) -> InconsistencyReport:
    """Inconsistent when every domain event is allowed."""
    models = _as_models(policies)
    cond = lambda d, a: Compound("or", (_not(d), _not(a)))  # noqa: E731
    return _event_goal(_Run("monotonic-allow", models, domain), models, domain, budget, cond)


def split_target(models: list[SplPolicyModel], target: str) -> tuple[int, str]:
    """Which policy a redundancy target names, and the path inside it.

    Targets are ``Policy:path`` or, when unambiguous, just ``path``.
    """
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


def check_redundancy(policies, target: str, domain: DomainSpec, budget: int = DEFAULT_BUDGET) -> InconsistencyReport:
    """Inconsistent (redundant) when replacing ``target`` by a never-applicable rule changes nothing."""
    models = _as_models(policies)
    run = _Run("redundancy", models, domain, target=target)
    try:
        index, path = split_target(models, target)
        modified = models[index].replace(path, NEVER)
        compiled = [compile_policy(m) for m in models]
        _check_pars(compiled, domain)
        changed = compile_policy(modified, name=models[index].name + "_without")
        binding = PolicyBinding(compiled, domain)
        event, r1, r2 = Var("E"), Var("R1"), Var("R2")
        goals = [Compound("in", (event, universe_term(domain)))]
        goals += binding.master(event, r1)[0]
        others = list(compiled)
        others[index] = changed
        goals += binding.master(event, r2, others)[0]
        goals.append(Compound("diff", (r1, r2)))
        status, state = run.solve(goals, goal_program(*compiled, changed), budget)
    except (SplError, ProgramError, ValueError) as err:
        return run.finish(error(str(err)))
    if status == BUDGET_EXHAUSTED:
        return run.finish(_budget_error(budget))
    if status == SATISFIABLE:
        e = term_to_event(state.store.resolve(event))
        return run.finish(consistent(search="witness", witness=(("event", e),), residual=_residual(state)))
    return run.finish(found(search="exhausted"))


# ---- workflow against policies --------------------------------------------------------

def workflow_globals(model: WorkflowModel, domain: DomainSpec, all_events: Term) -> tuple[list, dict, list]:
    """Globals entries for a workflow, the data variables, and their labelling goals."""
    entries = [Compound("kv", (Str(ALL_EVENTS), all_events))]
    for p in model.participants:
        members = domain.set_contents(model.name, p.name)
        if members is None and p.kind == "person":
            members = (p.name,)
        term = Var(p.name) if members is None else make_list([value_term(m) for m in members])
        entries.append(Compound("kv", (Str(p.name), term)))
    data_vars: dict = {}
    goals = []
    for name in model.data:
        v = Var(name.capitalize())
        data_vars[name] = v
        entries.append(Compound("kv", (Str(name), v)))
        if name in domain.data:
            goals.append(Compound("in", (v, make_list([value_term(x) for x in domain.data[name]]))))
    return entries, data_vars, goals


def check_workflow(
    workflow: WorkflowModel,
    policies,
    domain: DomainSpec,
    assumption: str = "close",
    budget: int = DEFAULT_BUDGET,
) -> InconsistencyReport:
    """Inconsistent when no run of the workflow that completes has all its events admitted.

    Under ``close`` every event of the run must be allowed; under
    ``open`` it must merely not be denied.
    """
    models = _as_models(policies)
    run = _Run("wf-consistency", models, domain, workflow, assumption)
    if assumption not in ASSUMPTIONS:
        return run.finish(error(f"unknown assumption {assumption}"))
    try:
        cw: CompiledWorkflow = compile_workflow(workflow)
        compiled = [compile_policy(m) for m in models]
        _check_pars(compiled, domain)
        all_events = Var("AllEvents")
        entries, data_vars, data_goals = workflow_globals(workflow, domain, all_events)
        binding = PolicyBinding(compiled, domain, entries)
        x, rm = Var("X"), Var("Rm")
        body, fresh = binding.master(x, rm)
        body.append(Compound(assumption, (rm,)))
        conj = body[-1]
        for g in reversed(body[:-1]):
            conj = Compound(",", (g, conj))
        tr = Compound("tr", (x, make_list([rm, *fresh]), conj, rm))
        end = Var("End")
        goals = [
            Compound("restrict", (all_events, universe_term(domain), Atom("any"))),
            *data_goals,
            Compound("forallr", (all_events, tr, Var("R"))),
            cw.end_goal(end, binding.globals_term),
        ]
        status, state = run.solve(goals, goal_program(cw, *compiled), budget)
    except (SplError, ProgramError, ValueError) as err:
        return run.finish(error(str(err)))
    if status == BUDGET_EXHAUSTED:
        return run.finish(_budget_error(budget))
    if status != SATISFIABLE:
        return run.finish(found(search="exhausted"))
    names = {f: n for n, f in cw.activity_functors.items()}
    st = state.store
    trace = []
    for c in st.alive():
        if c.functor == "performed":
            trace.append((names[st.resolve(c.args[0]).name], term_to_event(st.resolve(c.args[1]))))
    trace.sort(key=lambda p: (p[1].time, p[0]))
    data = tuple((n, _scalar(st.resolve(v))) for n, v in data_vars.items() if not _unbound(st.resolve(v)))
    return run.finish(consistent(search="witness", witness=tuple(trace), data=data, residual=_residual(state)))


def _unbound(t: Term) -> bool:
    return type(t) is Var


# ---- single-policy entry points -------------------------------------------------------

def goal_inapplicability(policy, domain: DomainSpec, budget: int = DEFAULT_BUDGET) -> Verdict:
    return check_inapplicability(policy, domain, budget).verdict


def goal_monotonic_denial(policy, domain: DomainSpec, budget: int = DEFAULT_BUDGET) -> Verdict:
    return check_monotonic_denial(policy, domain, budget).verdict


def goal_monotonic_acceptance(policy, domain: DomainSpec, budget: int = DEFAULT_BUDGET) -> Verdict:
    return check_monotonic_acceptance(policy, domain, budget).verdict


def goal_rule_redundancy(policy, target: str, domain: DomainSpec, budget: int = DEFAULT_BUDGET) -> Verdict:
    return check_redundancy(policy, target, domain, budget).verdict


def goal_workflow_consistency(workflow, policies, assumption: str, domain: DomainSpec, budget: int = DEFAULT_BUDGET) -> Verdict:
    return check_workflow(workflow, policies, domain, assumption, budget).verdict


def run_goal(
    goal: str,
    policies,
    domain: DomainSpec,
    workflow: WorkflowModel | None = None,
    assumption: str = "close",
    target: str = "",
    budget: int = DEFAULT_BUDGET,
) -> InconsistencyReport:
    """Dispatch on a goal name (``inapplicability``, ``monotonic-deny``, ...)."""
    if goal == "inapplicability":
        return check_inapplicability(policies, domain, budget)
    if goal == "monotonic-deny":
        return check_monotonic_denial(policies, domain, budget)
    if goal == "monotonic-allow":
        return check_monotonic_acceptance(policies, domain, budget)
    if goal == "redundancy":
        return check_redundancy(policies, target, domain, budget)
    if goal == "wf-consistency":
        if workflow is None:
            raise ValueError("wf-consistency needs a workflow")
        return check_workflow(workflow, policies, domain, assumption, budget)
    raise ValueError(f"unknown goal {goal}")
