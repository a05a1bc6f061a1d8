"""Verdicts and reports shared by the engine-backed goals and the oracle."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .events import GroundEvent

INCONSISTENCY_FOUND = "InconsistencyFound"
NO_INCONSISTENCY = "NoInconsistency"
ERROR = "Error"

REPORT_SCHEMA = "pcv-report/1"

GOAL_NAMES = ("inapplicability", "monotonic-deny", "monotonic-allow", "redundancy", "wf-consistency")


@dataclass(frozen=True)
class Verdict:
    """Outcome of one goal.

    ``search`` says how it was reached: ``exhausted`` when the whole
    domain was searched without a solution, ``witness`` when a solution
    was found, ``budget-limited`` when the step budget ran out.
    ``witness`` pairs a label (an activity name, or ``event``) with a
    ground event.
    """

    kind: str
    search: str = ""
    witness: tuple = ()
    data: tuple = ()
    diagnostic: str = ""
    residual: tuple = ()

    @property
    def events(self) -> list[GroundEvent]:
        return [e for _, e in self.witness]

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "search": self.search,
            "witness": [{"label": label, **e.as_dict()} for label, e in self.witness],
            "data": {k: v for k, v in self.data},
            "diagnostic": self.diagnostic,
            "residual": list(self.residual),
        }


def found(**kw) -> Verdict:
    return Verdict(INCONSISTENCY_FOUND, **kw)


def consistent(**kw) -> Verdict:
    return Verdict(NO_INCONSISTENCY, **kw)


def error(diagnostic: str, search: str = "") -> Verdict:
    return Verdict(ERROR, search=search, diagnostic=diagnostic)


@dataclass
class InconsistencyReport:
    goal: str
    policies: tuple
    verdict: Verdict
    workflow: str = ""
    assumption: str = ""
    target: str = ""
    domain_events: int = 0
    firings: int = 0
    choice_points: int = 0
    elapsed: float = field(default=0.0, compare=False)

    def as_dict(self) -> dict:
        """Field order is fixed; elapsed time is left out so reports are reproducible."""
        return {
            "goal": self.goal,
            "target": self.target,
            "policies": list(self.policies),
            "workflow": self.workflow,
            "assumption": self.assumption,
            "domain_events": self.domain_events,
            "verdict": self.verdict.as_dict(),
            "stats": {"firings": self.firings, "choice_points": self.choice_points},
        }

    def human(self) -> str:
        v = self.verdict
        what = self.goal + (f" {self.target}" if self.target else "")
        if self.assumption:
            what += f" ({self.assumption})"
        subject = ", ".join(self.policies) or "no policies"
        if self.workflow:
            subject += f" / {self.workflow}"
        lines = [f"{what} on {subject}: {v.kind}"]
        if v.search == "exhausted":
            lines.append(f"  searched all {self.domain_events} domain events")
        for label, e in v.witness:
            pars = "".join(f", {p!r}" for p in e.pars)
            lines.append(f"  {label}: event({e.actor!r}, {e.action!r}, {e.target!r}{pars}) at time {e.time}")
        for k, val in v.data:
            lines.append(f"  data {k} = {val!r}")
        if v.diagnostic:
            lines.append(f"  {v.diagnostic}")
        lines.append(f"  {self.firings} firings, {self.choice_points} choice points, {self.elapsed:.2f}s")
        return "\n".join(lines)


def reports_json(reports) -> str:
    doc = {"schema": REPORT_SCHEMA, "reports": [r.as_dict() for r in reports]}
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
