"""Workflow frontend: reader, model and rule compiler (the compiler is loaded on first use)."""

from .model import (
    PARTICIPANT_KINDS, Activity, CyclicWorkflow, DanglingReference, DataRef, MissingStartActivity,
    Participant, Transition, UnsupportedActivity, WorkflowError, WorkflowModel, WorkflowSyntaxError,
)
from .parser import parse_workflow


def __getattr__(name):
    if name in ("ALL_EVENTS", "CompiledWorkflow", "compile_workflow"):
        from . import compiler

        return getattr(compiler, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
