"""Workflow model: participants, activities and transitions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ..spl.model import BConst, SplError

PARTICIPANT_KINDS = ("person", "role", "application", "org-unit")


class WorkflowError(SplError):
    """Base class for workflow diagnostics."""


class WorkflowSyntaxError(WorkflowError):
    pass


class MissingStartActivity(WorkflowError):
    pass


class DanglingReference(WorkflowError):
    pass


class CyclicWorkflow(WorkflowError):
    pass


class UnsupportedActivity(WorkflowError):
    pass


@dataclass(frozen=True)
class Participant:
    name: str
    kind: str


@dataclass(frozen=True)
class DataRef:
    name: str


Target = Union[str, int, DataRef]


@dataclass
class Activity:
    name: str
    kind: str  # atomic | dummy
    performer: str | None = None
    action: str | None = None
    target: Target | None = None
    join: str = "AND"
    split: str = "AND"
    priority: tuple[str, ...] = ()


@dataclass
class Transition:
    name: str
    source: str
    dest: str
    condition: object = field(default_factory=lambda: BConst(True))


@dataclass
class WorkflowModel:
    name: str
    participants: list[Participant] = field(default_factory=list)
    activities: list[Activity] = field(default_factory=list)
    transitions: list[Transition] = field(default_factory=list)
    data: list[str] = field(default_factory=list)
    start: str = ""
    ends: tuple[str, ...] = ()

    def activity(self, name: str) -> Activity:
        for a in self.activities:
            if a.name == name:
                return a
        raise DanglingReference(f"unknown activity {name}")

    def incoming(self, name: str) -> list[Transition]:
        return [t for t in self.transitions if t.dest == name]

    def outgoing(self, name: str) -> list[Transition]:
        return [t for t in self.transitions if t.source == name]

    def siblings_before(self, t: Transition) -> list[Transition]:
        """Higher-priority transitions of an XOR split that must have failed for ``t``."""
        src = self.activity(t.source)
        if src.split != "XOR":
            return []
        order = list(src.priority) or [x.name for x in self.outgoing(src.name)]
        by_name = {x.name: x for x in self.outgoing(src.name)}
        out = []
        for n in order:
            if n == t.name:
                return out
            out.append(by_name[n])
        return out

    @property
    def end(self) -> str:
        return self.ends[0] if self.ends else ""
