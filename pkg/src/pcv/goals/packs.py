"""Bridge rules between tri-valued results and plain constraints."""

from __future__ import annotations

from ..engine.rules import parse_rules
from ..kernel.pack import HandlerPack

_OPEN_CLOSE = """
close @ close(r(D, A)) <=> and(D, A).
open @ open(r(D, A)) <=> or(not(D), and(D, A)).
"""

_DIFF = """
commutativity @ diff(R1, R2) \\ diff(R2, R1) <=> true.
identity @ diff(R, R) <=> fail.
definition @ diff(r(D1, A1), r(D2, A2)) <=> or(xor(D1, D2), xor(and(D1, A1), and(D2, A2))).
"""

_TRACE = """
once @ performed(A, E1) \\ performed(A, E2) <=> E1 = E2.
"""


def build_open_close_pack() -> HandlerPack:
    """``close(R)`` holds when R allows; ``open(R)`` when R does not deny."""
    return HandlerPack("open_close", parse_rules(_OPEN_CLOSE), {("close", 1, False), ("open", 1, False)})


def build_diff_pack() -> HandlerPack:
    """``diff(R1, R2)``: the two rule results differ in domain or in allowed-ness."""
    return HandlerPack("diff", parse_rules(_DIFF), {("diff", 2, False)})


def build_trace_pack() -> HandlerPack:
    """Each activity of a workflow run is performed by exactly one event."""
    return HandlerPack("trace", parse_rules(_TRACE), {("performed", 2, False)})
