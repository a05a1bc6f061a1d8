"""Command-line driver: ``pcv check`` loads the inputs, runs the goals and reports.

Exit status: 0 when no goal found an inconsistency, 1 when one did, 2 on
errors (unreadable input, exhausted budget) and 3 when ``--oracle-check``
found the engine and the brute-force oracle disagreeing.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .domain import DomainError, DomainSpec, load_domain
from .engine.solver import DEFAULT_BUDGET
from .spl.model import SplError
from .spl.parser import parse_policies
from .verdict import ERROR, INCONSISTENCY_FOUND, InconsistencyReport, reports_json
from .wpdl.model import WorkflowError
from .wpdl.parser import parse_workflow

EXIT_OK, EXIT_FOUND, EXIT_ERROR, EXIT_DISAGREE = 0, 1, 2, 3

GOALS = ("inapplicability", "monotonic-deny", "monotonic-allow", "redundancy", "wf-consistency")


class InputError(Exception):
    """A file could not be read or parsed; the message names the file."""


@dataclass
class RunConfig:
    policies: list[str]
    domain: str
    goals: list[tuple[str, str]]
    workflow: str | None = None
    assumption: str = "close"
    budget: int = DEFAULT_BUDGET
    output: str = "human"
    oracle_check: bool = False
    dump_rules: bool = False

    def __post_init__(self):
        if not self.goals and not self.dump_rules:
            raise ValueError("at least one --goal is required")
        if any(g == "wf-consistency" for g, _ in self.goals) and not self.workflow:
            raise ValueError("wf-consistency needs --workflow")


@dataclass
class RunResult:
    status: int
    reports: list[InconsistencyReport] = field(default_factory=list)
    discrepancies: list[dict] = field(default_factory=list)
    rules: str = ""


def parse_goal_selector(text: str) -> tuple[str, str]:
    name, _, arg = text.partition("=")
    if name not in GOALS:
        raise argparse.ArgumentTypeError(f"unknown goal {name!r} (choose from {', '.join(GOALS)})")
    if (name == "redundancy") != bool(arg):
        raise argparse.ArgumentTypeError("redundancy takes a rule path (redundancy=PATH); other goals take none")
    return name, arg


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as err:
        raise InputError(f"{path}: {err.strerror}") from None


def load_inputs(config: RunConfig):
    models = []
    for path in config.policies:
        try:
            models.extend(parse_policies(_read(path)))
        except SplError as err:
            raise InputError(f"{path}:{err}") from None
    workflow = None
    if config.workflow:
        try:
            workflow = parse_workflow(_read(config.workflow))
        except WorkflowError as err:
            raise InputError(f"{config.workflow}:{err}") from None
        except SplError as err:
            raise InputError(f"{config.workflow}:{err}") from None
    try:
        domain: DomainSpec = load_domain(config.domain)
    except OSError as err:
        raise InputError(f"{config.domain}: {err.strerror}") from None
    except DomainError as err:
        raise InputError(f"{config.domain}: {err}") from None
    return models, workflow, domain


def dump_rules(models, workflow) -> str:
    from .spl.compiler import compile_policy
    from .wpdl.compiler import compile_workflow

    out = []
    for m in models:
        out.extend(r.text() for r in compile_policy(m).rules)
    if workflow is not None:
        out.extend(r.text() for r in compile_workflow(workflow).rules)
    return "\n".join(out) + "\n"


def run(config: RunConfig) -> RunResult:
    """Run every goal of ``config`` in command-line order."""
    from .goals.runner import run_goal
    from .oracle import oracle_goal, replay_witness

    try:
        models, workflow, domain = load_inputs(config)
    except InputError as err:
        return RunResult(EXIT_ERROR, discrepancies=[{"error": str(err)}])
    result = RunResult(EXIT_OK)
    if config.dump_rules:
        try:
            result.rules = dump_rules(models, workflow)
        except SplError as err:
            return RunResult(EXIT_ERROR, discrepancies=[{"error": str(err)}])
    for goal, target in config.goals:
        report = run_goal(goal, models, domain, workflow, config.assumption, target, config.budget)
        result.reports.append(report)
        if config.oracle_check:
            expected = oracle_goal(goal, models, domain, workflow, config.assumption, target)
            got = report.verdict
            if expected.kind == ERROR:
                continue
            replay_ok = got.kind == ERROR or replay_witness(goal, got, models, domain, workflow, config.assumption, target)
            if expected.kind != got.kind or not replay_ok:
                result.discrepancies.append({
                    "goal": goal,
                    "target": target,
                    "engine": got.as_dict(),
                    "oracle": expected.as_dict(),
                    "witness_replays": replay_ok,
                })
    kinds = [r.verdict.kind for r in result.reports]
    if result.discrepancies:
        result.status = EXIT_DISAGREE
    elif ERROR in kinds:
        result.status = EXIT_ERROR
    elif INCONSISTENCY_FOUND in kinds:
        result.status = EXIT_FOUND
    return result


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pcv", description="Detect inconsistencies between security policies and workflows.")
    sub = parser.add_subparsers(dest="command", required=True)
    check = sub.add_parser("check", help="run inconsistency goals")
    check.add_argument("--policy", action="append", default=[], metavar="FILE.spl", help="policy file (repeatable)")
    check.add_argument("--workflow", metavar="FILE.wf", help="workflow file")
    check.add_argument("--domain", required=True, metavar="FILE.dom", help="finite domain (TOML)")
    check.add_argument(
        "--goal", action="append", default=[], type=parse_goal_selector, metavar="GOAL",
        help="inapplicability | monotonic-deny | monotonic-allow | redundancy=PATH | wf-consistency (repeatable)",
    )
    check.add_argument("--assume", choices=("open", "close"), default="close", help="bridge for workflow goals")
    check.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="rule firings allowed per goal")
    check.add_argument("--format", choices=("human", "structured"), default="human")
    check.add_argument("--oracle-check", action="store_true", help="cross-check every verdict by brute force")
    check.add_argument("--dump-rules", action="store_true", help="print the compiled rules")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(
            args.policy, args.domain, args.goal, args.workflow, args.assume, args.budget,
            args.format, args.oracle_check, args.dump_rules,
        )
    except ValueError as err:
        parser.error(str(err))
    result = run(config)
    structured = config.output == "structured"
    if result.rules:
        (sys.stderr if structured else sys.stdout).write(result.rules)
    errors = [d["error"] for d in result.discrepancies if "error" in d]
    for msg in errors:
        print(f"pcv: {msg}", file=sys.stderr)
    if structured:
        sys.stdout.write(reports_json(result.reports))
    else:
        for r in result.reports:
            print(r.human())
    disagreements = [d for d in result.discrepancies if "error" not in d]
    if disagreements:
        print("pcv: engine and oracle disagree:", file=sys.stderr)
        print(json.dumps(disagreements, indent=2), file=sys.stderr)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
