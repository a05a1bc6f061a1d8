import pytest

from corpus_gen import workflow_cases
from pcv.domain import DomainSpec, load_domain
from pcv.goals import (
    check_inapplicability, check_redundancy, check_workflow, goal_inapplicability, goal_monotonic_acceptance,
    goal_monotonic_denial, goal_rule_redundancy, goal_workflow_consistency,
)
from pcv.oracle import replay_witness
from pcv.spl import parse_spl
from pcv.verdict import ERROR, INCONSISTENCY_FOUND, NO_INCONSISTENCY
from pcv.wpdl import parse_workflow

SMALL = DomainSpec(["ann", "bob"], ["read", "send"], ["doc"], horizon=2)


def simple(domain, accept):
    return parse_spl(f"policy S() {{ ?Q: {domain} :: {accept} }}")


@pytest.mark.parametrize("goal, policy, expected", [
    (goal_inapplicability, simple("false", "true"), INCONSISTENCY_FOUND),
    (goal_inapplicability, simple("true", "true"), NO_INCONSISTENCY),
    (goal_monotonic_denial, simple("true", "false"), INCONSISTENCY_FOUND),
    (goal_monotonic_denial, simple("true", "true"), NO_INCONSISTENCY),
    (goal_monotonic_acceptance, simple("true", "true"), INCONSISTENCY_FOUND),
    (goal_monotonic_acceptance, simple("true", "false"), NO_INCONSISTENCY),
    (goal_monotonic_denial, simple("false", "false"), NO_INCONSISTENCY),
])
def test_trivial_policies(goal, policy, expected):
    v = goal(policy, SMALL)
    assert v.kind == expected
    assert v.search == ("exhausted" if expected == INCONSISTENCY_FOUND else "witness")


REPLAY_NAMES = {
    goal_inapplicability: "inapplicability",
    goal_monotonic_denial: "monotonic-deny",
    goal_monotonic_acceptance: "monotonic-allow",
}


def test_private_policy_goals(private, corpus):
    mixed = load_domain(corpus / "private.dom")
    for goal in (goal_inapplicability, goal_monotonic_denial, goal_monotonic_acceptance):
        v = goal(private, mixed)
        assert v.kind == NO_INCONSISTENCY
        assert replay_witness(REPLAY_NAMES[goal], v, [private], mixed)
    assert goal_inapplicability(private, load_domain(corpus / "no-email.dom")).kind == INCONSISTENCY_FOUND


def test_inapplicability_witness_is_sendemail_on_internal_doc(private, corpus):
    v = goal_inapplicability(private, load_domain(corpus / "private.dom"))
    (e,) = v.events
    assert (e.action, e.target) == ("SendEmail", "memo")


def test_undefined_sets_are_existential(private):
    dom = DomainSpec(["alice"], ["SendEmail"], ["memo"], pars=(("bob",),), horizon=1)
    assert goal_inapplicability(private, dom).kind == NO_INCONSISTENCY
    assert goal_monotonic_denial(private, dom).kind == NO_INCONSISTENCY
    assert goal_monotonic_acceptance(private, dom).kind == NO_INCONSISTENCY


TWIN = "policy Twin() { R: event.action = \"read\" :: event.author = \"ann\"; ?Q: R AND R }"
SPLIT = ("policy Split() { R: event.action = \"read\" :: event.author = \"ann\"; "
         "W: event.action = \"send\" :: event.author = \"bob\"; ?Q: R AND W }")


@pytest.mark.parametrize("target", ["query.left", "query.right"])
def test_idempotent_conjunction_is_redundant(target):
    assert goal_rule_redundancy(parse_spl(TWIN), target, SMALL).kind == INCONSISTENCY_FOUND


@pytest.mark.parametrize("target, action", [("R", "read"), ("W", "send"), ("query.left", "read")])
def test_disjoint_branches_are_not_redundant(target, action):
    v = goal_rule_redundancy(parse_spl(SPLIT), target, SMALL)
    assert v.kind == NO_INCONSISTENCY
    assert v.events[0].action == action


def test_replacing_a_never_rule_is_redundant():
    m = parse_spl("policy P() { N: false :: true; ?Q: N OR event.action = \"read\" :: true }")
    assert goal_rule_redundancy(m, "N", SMALL).kind == INCONSISTENCY_FOUND


def test_redundancy_target_errors():
    v = goal_rule_redundancy(parse_spl(TWIN), "Nope", SMALL)
    assert v.kind == ERROR and "Nope" in v.diagnostic
    a, b = parse_spl(TWIN), parse_spl(TWIN.replace("Twin", "Other"))
    assert check_redundancy([a, b], "query.left", SMALL).verdict.kind == ERROR
    assert check_redundancy([a, b], "Other:query.left", SMALL).verdict.kind == INCONSISTENCY_FOUND


def test_budget_exhaustion_is_an_error(private, corpus):
    v = goal_inapplicability(private, load_domain(corpus / "no-email.dom"), budget=2)
    assert v.kind == ERROR and v.search == "budget-limited"


def test_par_out_of_range_is_an_error(private):
    assert goal_inapplicability(private, SMALL).kind == ERROR


def test_report_contents(private, corpus):
    dom = load_domain(corpus / "private.dom")
    rep = check_inapplicability([private], dom)
    d = rep.as_dict()
    assert d["goal"] == "inapplicability" and d["policies"] == ["Private"]
    assert d["domain_events"] == dom.size == 16
    assert "elapsed" not in d and rep.firings > 0


PERMISSIVE = "policy Permissive() { ?AllowAll: true :: true }"
DENY_APPROVE = "policy NoApproval() { ?NoApproval: true :: event.action != \"Approve\" }"


def test_budget_workflow_permissive_close(budget_wf, budget_domain):
    v = goal_workflow_consistency(budget_wf, [parse_spl(PERMISSIVE)], "close", budget_domain)
    assert v.kind == NO_INCONSISTENCY
    labels = [label for label, _ in v.witness]
    assert labels[0] == "a0" and labels[1] in ("a1", "a2") and len(labels) == 2
    first, second = v.events
    assert first.time < second.time
    assert (first.action, second.action) == ("Build", "Approve")
    assert replay_witness("wf-consistency", v, [parse_spl(PERMISSIVE)], budget_domain, budget_wf, "close")


@pytest.mark.parametrize("assumption", ["close", "open"])
def test_budget_workflow_deny_approve(budget_wf, budget_domain, assumption):
    v = goal_workflow_consistency(budget_wf, [parse_spl(DENY_APPROVE)], assumption, budget_domain)
    assert v.kind == INCONSISTENCY_FOUND


def test_empty_policy_set(budget_wf, budget_domain):
    assert goal_workflow_consistency(budget_wf, [], "open", budget_domain).kind == NO_INCONSISTENCY
    assert goal_workflow_consistency(budget_wf, [], "close", budget_domain).kind == INCONSISTENCY_FOUND


def test_xor_priority_routes_cheap_budgets_to_the_clerk(budget_wf, budget_domain):
    clerk_only = parse_spl('policy ClerkOnly(user set Clerk) { ?C: event.action = "Approve" :: event.author IN Clerk }')
    # Build is outside the policy's domain, so only the open assumption admits it
    assert goal_workflow_consistency(budget_wf, [clerk_only], "close", budget_domain).kind == INCONSISTENCY_FOUND
    v = goal_workflow_consistency(budget_wf, [clerk_only], "open", budget_domain)
    assert v.kind == NO_INCONSISTENCY
    assert dict(v.data)["cost"] == 500 and [label for label, _ in v.witness] == ["a0", "a1"]


def test_unknown_assumption_is_an_error(budget_wf, budget_domain):
    assert check_workflow(budget_wf, [], budget_domain, "maybe").verdict.kind == ERROR


def test_open_dominates_close_on_generated_workflows():
    for case in workflow_cases(8, seed=3):
        wf = parse_workflow(case.workflow_text)
        models = [parse_spl(case.policy_text)]
        dom = _domain(case)
        closed = goal_workflow_consistency(wf, models, "close", dom)
        opened = goal_workflow_consistency(wf, models, "open", dom)
        assert ERROR not in (closed.kind, opened.kind)
        if closed.kind == NO_INCONSISTENCY:
            assert opened.kind == NO_INCONSISTENCY, case.name


def _domain(case):
    from pcv.domain import load_domain_text
    return load_domain_text(case.domain_text)
