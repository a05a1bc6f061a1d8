"""Inconsistency goals over policies, workflows and finite domains."""

from .domain import DomainError, DomainSpec, event_term, load_domain, load_domain_text, universe_term
from .packs import build_diff_pack, build_open_close_pack, build_trace_pack
from .runner import (
    ASSUMPTIONS, PolicyBinding, check_inapplicability, check_monotonic_acceptance, check_monotonic_denial,
    check_redundancy, check_workflow, goal_inapplicability, goal_monotonic_acceptance, goal_monotonic_denial,
    goal_program, goal_rule_redundancy, goal_workflow_consistency, run_goal, split_target, term_to_event,
)
from ..verdict import (
    ERROR, GOAL_NAMES, INCONSISTENCY_FOUND, NO_INCONSISTENCY, REPORT_SCHEMA, InconsistencyReport, Verdict,
    reports_json,
)

__all__ = [
    "ASSUMPTIONS", "DomainError", "DomainSpec", "ERROR", "GOAL_NAMES", "INCONSISTENCY_FOUND",
    "InconsistencyReport", "NO_INCONSISTENCY", "PolicyBinding", "REPORT_SCHEMA", "Verdict",
    "build_diff_pack", "build_open_close_pack", "build_trace_pack", "check_inapplicability",
    "check_monotonic_acceptance", "check_monotonic_denial", "check_redundancy", "check_workflow",
    "event_term", "goal_inapplicability", "goal_monotonic_acceptance", "goal_monotonic_denial",
    "goal_program", "goal_rule_redundancy", "goal_workflow_consistency", "load_domain",
    "load_domain_text", "reports_json", "run_goal", "split_target", "term_to_event", "universe_term",
]
