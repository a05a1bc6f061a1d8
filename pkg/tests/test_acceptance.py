"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import itertools
import random
import shutil
import subprocess
import sys
import time

from corpus_gen import kernel_goal, policy_cases, workflow_cases
from pcv.domain import load_domain_text
from pcv.engine import BUDGET_EXHAUSTED, DEFAULT_BUDGET, SATISFIABLE, UNSATISFIABLE, parse_rules, program, solve
from pcv.events import GroundEvent
from pcv.goals import goal_program, run_goal
from pcv.kernel import build_cardinality_pack, build_kernel, build_set_pack, rule_forms_program, timed_expand
from pcv.kernel.sets import SET_RELATIONS
from pcv.oracle import oracle_goal, replay_witness, tri_table
from pcv.spl import TriValue, evaluate_tri, parse_spl, rule_paths, tri_and
from pcv.verdict import ERROR, INCONSISTENCY_FOUND, NO_INCONSISTENCY, reports_json
from pcv.wpdl import parse_workflow

POLICY_CASES = 120
WORKFLOW_CASES = 24
POLICY_GOALS = ("inapplicability", "monotonic-deny", "monotonic-allow", "redundancy")


def announce(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\nacceptance {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def timed_solve(goal, prog):
    start = time.perf_counter()
    r = solve(goal, prog)
    return r, time.perf_counter() - start


def test_criterion_1_kernel_examples(capsys):
    kernel = program(build_kernel())
    forms, t1 = timed_solve("leq(A, B), geq(B, A)", program(rule_forms_program()))
    antisym, t2 = timed_solve("leq(A, B), leq(B, A)", kernel)
    chain, t3 = timed_solve("leq(A, B), leq(B, C)", kernel)
    meet, t4 = timed_solve("meet(C, A, B), in(X, C), notin(X, B)", kernel)
    slowest = max(t1, t2, t3, t4)
    checks = {
        "rule-forms program binds A=B": forms.status == SATISFIABLE and forms.bindings["A"] is forms.bindings["B"],
        "kernel antisymmetry binds A=B": antisym.bindings["A"] is antisym.bindings["B"],
        "A<=C derived": "leq(_V0, _V2)" in chain.state.store.canonical(),
        "meet conflict unsat": meet.status == UNSATISFIABLE,
        "each < 1s": slowest < 1.0,
    }
    detail = ", ".join(f"{k}: {'yes' if v else 'NO'}" for k, v in checks.items())
    announce(capsys, 1, all(checks.values()), f"{detail}; slowest {slowest:.3f}s")


def _subset_patterns(n_kept, n_heads, propagation):
    out = set()
    for mask in itertools.product((False, True), repeat=n_heads):
        timed = frozenset(i for i, m in enumerate(mask) if m)
        if timed:
            out.add((timed, frozenset() if propagation else frozenset(i for i in timed if i >= n_kept)))
    return out


def test_criterion_2_timed_templates(capsys):
    results = []
    for text in ("p(X) <=> q(X).", "p(X), q(X) ==> r(X).", "p(X) \\ q(X), r(X) <=> s(X)."):
        (rule,) = parse_rules(text)
        variants = timed_expand(rule)
        index = {id(h.args): i for i, h in enumerate(rule.heads)}
        got = {
            (frozenset(index[id(h.args)] for h in v.heads if h.time is not None),
             frozenset(index[id(h.args)] for h in v.removed))
            for v in variants
        }
        expected = _subset_patterns(len(rule.kept), len(rule.heads), rule.kind == "propagation")
        results.append((len(variants), got == expected))
    ok = [n for n, _ in results] == [1, 3, 7] and all(match for _, match in results)
    announce(capsys, 2, ok, f"variant counts {[n for n, _ in results]}, patterns match subset enumeration")


# [DERIVED] frozen 3x3 table of the tri-valued conjunction.
A, D, N = TriValue.ALLOW, TriValue.DENY, TriValue.NOTAPPLY
AND_TABLE = {
    (A, A): A, (A, D): D, (A, N): A,
    (D, A): D, (D, D): D, (D, N): D,
    (N, A): A, (N, D): D, (N, N): N,
}
ENCODINGS = {A: ("r(true, true)",), D: ("r(true, fail)",), N: ("r(fail, true)", "r(fail, fail)")}
PROBES = {A: "D, A", D: "D, not(A)", N: "not(D)"}


def _engine_value(prog, goal):
    hits = [v for v, probe in PROBES.items() if solve(f"{goal}, R = r(D, A), {probe}", prog).status == SATISFIABLE]
    return hits[0] if len(hits) == 1 else None


def test_criterion_3_tri_logic_table(capsys):
    prog = goal_program()
    mismatches = []
    for (x, y), expected in AND_TABLE.items():
        for ex, ey in itertools.product(ENCODINGS[x], ENCODINGS[y]):
            if _engine_value(prog, f"tri_and({ex}, {ey}, R)") is not expected:
                mismatches.append((ex, ey))
    # NotApply is the unit and Deny the absorber, even against an unknown operand
    unit = solve("tri_and(r(fail, true), R2, R3)", prog)
    absorb = solve("tri_and(r(true, fail), R2, R3)", prog)
    laws = (
        unit.bindings["R3"] is unit.bindings["R2"]
        and str(absorb.state.store.resolve(absorb.bindings["R3"])) == "r(true, fail)"
        and all(tri_and(N, v) is v and tri_and(D, v) is D for v in TriValue)
    )
    ok = not mismatches and laws and tri_table(tri_and) == AND_TABLE
    announce(capsys, 3, ok, f"{len(AND_TABLE)} table cells over {sum(len(ENCODINGS[x]) * len(ENCODINGS[y]) for x, y in AND_TABLE)} "
             f"encodings, mismatches {mismatches}, unit/absorber laws {'hold' if laws else 'broken'}")


def test_criterion_4_private_verdicts(capsys, private):
    sets = {"OrgUsers": ["alice", "bob"], "IDocs": ["memo"]}
    got = [
        evaluate_tri(private, GroundEvent("alice", "SendEmail", "memo", ("bob",), 1), sets),
        evaluate_tri(private, GroundEvent("alice", "SendEmail", "memo", ("eve",), 1), sets),
        evaluate_tri(private, GroundEvent("alice", "Print", "memo", ("eve",), 1), sets),
    ]
    announce(capsys, 4, got == [A, D, N], "insider/outsider/print -> " + "/".join(v.name for v in got))


def _policy_runs():
    for case in policy_cases(POLICY_CASES):
        model = parse_spl(case.policy_text)
        domain = load_domain_text(case.domain_text)
        target = random.Random(case.name).choice(rule_paths(model) or ["query"])
        for goal in POLICY_GOALS:
            yield case, goal, [model], domain, None, "close", target if goal == "redundancy" else ""


def _workflow_runs():
    for case in workflow_cases(WORKFLOW_CASES):
        model = parse_spl(case.policy_text)
        domain = load_domain_text(case.domain_text)
        workflow = parse_workflow(case.workflow_text)
        for assumption in ("close", "open"):
            yield case, "wf-consistency", [model], domain, workflow, assumption, ""


def test_criterion_5_goal_oracle_agreement(capsys):
    start = time.perf_counter()
    total, disagreements, errors, bad_replays, dominance = 0, [], [], [], []
    closed_sat = {}
    for case, goal, models, domain, workflow, assumption, target in itertools.chain(_policy_runs(), _workflow_runs()):
        total += 1
        engine = run_goal(goal, models, domain, workflow, assumption, target).verdict
        oracle = oracle_goal(goal, models, domain, workflow, assumption, target)
        if ERROR in (engine.kind, oracle.kind):
            errors.append((case.name, goal, engine.diagnostic or oracle.diagnostic))
        elif engine.kind != oracle.kind:
            disagreements.append((case.name, goal, assumption, engine.kind, oracle.kind))
        if not replay_witness(goal, engine, models, domain, workflow, assumption, target):
            bad_replays.append((case.name, goal))
        if goal == "wf-consistency":
            if assumption == "close":
                closed_sat[case.name] = engine.kind == NO_INCONSISTENCY
            elif closed_sat[case.name] and engine.kind != NO_INCONSISTENCY:
                dominance.append(case.name)
    elapsed = time.perf_counter() - start
    ok = (total == POLICY_CASES * 4 + WORKFLOW_CASES * 2 and not disagreements and not errors
          and not bad_replays and not dominance and elapsed < 300)
    announce(capsys, 5, ok, f"{POLICY_CASES} policy cases x 4 goals + {WORKFLOW_CASES} workflow cases x 2 assumptions "
             f"= {total} runs, {len(disagreements)} disagreements, {len(errors)} errors, "
             f"{len(bad_replays)} failed replays, {len(dominance)} open/close violations, {elapsed:.1f}s")


def test_criterion_6_kernel_termination(capsys):
    kernel = program(build_kernel())
    rng = random.Random(2024)
    outcomes = {SATISFIABLE: 0, UNSATISFIABLE: 0, BUDGET_EXHAUSTED: 0}
    most_vars = 0
    for _ in range(1000):
        goal = kernel_goal(rng)
        most_vars = max(most_vars, len({t for t in goal.replace("(", " ").replace(",", " ").replace(")", " ")
                                        .replace("@", " ").split() if t[:1].isupper()}))
        outcomes[solve(goal, kernel, DEFAULT_BUDGET).status] += 1
    body = build_set_pack().body_functors() | build_cardinality_pack().body_functors()
    lint_ok = not body & set(SET_RELATIONS)
    ok = outcomes[BUDGET_EXHAUSTED] == 0 and lint_ok and most_vars <= 12
    announce(capsys, 6, ok, f"1000 goals (<= {most_vars} variables): {outcomes[SATISFIABLE]} sat, "
             f"{outcomes[UNSATISFIABLE]} unsat, {outcomes[BUDGET_EXHAUSTED]} out of budget; "
             f"set pack lint {'clean' if lint_ok else 'violated'}")


def test_criterion_7_workflow_example(capsys, corpus, budget_wf, budget_domain):
    start = time.perf_counter()
    permissive = parse_spl((corpus / "permissive.spl").read_text())
    deny = parse_spl((corpus / "deny-approve.spl").read_text())
    allowed = run_goal("wf-consistency", [permissive], budget_domain, budget_wf, "close").verdict
    denied = run_goal("wf-consistency", [deny], budget_domain, budget_wf, "close").verdict
    elapsed = time.perf_counter() - start
    times = [e.time for e in allowed.events]
    ok = (allowed.kind == NO_INCONSISTENCY and len(times) == 2 and times == sorted(set(times))
          and denied.kind == INCONSISTENCY_FOUND and elapsed < 5)
    trace = ", ".join(f"{label}@{e.time}" for label, e in allowed.witness)
    announce(capsys, 7, ok, f"permissive/close witness [{trace}], deny-Approve/close {denied.kind}, {elapsed:.2f}s")


def test_criterion_8_redundancy(capsys):
    domain = load_domain_text('actors = ["ann", "bob"]\nactions = ["read", "send"]\ntargets = ["doc"]\nhorizon = 2\n')
    twin = parse_spl('policy Twin() { R: event.action = "read" :: event.author = "ann"; ?Q: R AND R }')
    split = parse_spl('policy Split() { R: event.action = "read" :: event.author = "ann"; '
                      'W: event.action = "send" :: event.author = "bob"; ?Q: R AND W }')
    twin_kinds = [run_goal("redundancy", [twin], domain, target=t).verdict.kind for t in ("query.left", "query.right")]
    split_kinds = [run_goal("redundancy", [split], domain, target=t).verdict.kind for t in ("R", "W")]
    ok = twin_kinds == [INCONSISTENCY_FOUND] * 2 and split_kinds == [NO_INCONSISTENCY] * 2
    announce(capsys, 8, ok, f"idempotent conjuncts {twin_kinds}, disjoint branches {split_kinds}")


def _suite_reports():
    runs = itertools.chain(_policy_runs(), _workflow_runs())
    return reports_json([run_goal(goal, m, d, w, a, t) for _, goal, m, d, w, a, t in runs])


def _cli_reports(corpus):
    exe = shutil.which("pcv")
    cmd = [exe] if exe else [sys.executable, "-m", "pcv.cli"]
    argv = ["check", "--format", "structured", "--policy", str(corpus / "private.spl"),
            "--domain", str(corpus / "private.dom"), "--goal", "inapplicability", "--goal", "monotonic-deny",
            "--goal", "monotonic-allow", "--goal", "redundancy=query"]
    wf_argv = ["check", "--format", "structured", "--policy", str(corpus / "permissive.spl"),
               "--workflow", str(corpus / "budget.wf"), "--domain", str(corpus / "budget.dom"),
               "--goal", "wf-consistency", "--assume", "open"]
    return [subprocess.run(cmd + a, capture_output=True).stdout for a in (argv, wf_argv)]


def test_criterion_9_determinism(capsys, corpus):
    first, second = _suite_reports(), _suite_reports()
    cli_first, cli_second = _cli_reports(corpus), _cli_reports(corpus)
    ok = first == second and cli_first == cli_second and all(cli_first)
    announce(capsys, 9, ok, f"in-process suite report {len(first.encode())} bytes identical: {first == second}; "
             f"CLI reports identical: {cli_first == cli_second}")
