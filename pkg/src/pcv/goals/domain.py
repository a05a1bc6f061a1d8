"""Engine terms for domain values and the event universe."""

from __future__ import annotations

from ..domain import DomainError, DomainSpec, load_domain, load_domain_text
from ..engine.terms import Compound, Int, Str, Term, make_list
from ..events import GroundEvent, Scalar

__all__ = ["DomainError", "DomainSpec", "load_domain", "load_domain_text", "value_term", "event_term", "universe_term"]


def value_term(v: Scalar) -> Term:
    return Int(v) if isinstance(v, int) else Str(v)


def event_term(e: GroundEvent) -> Term:
    return Compound(
        "event",
        (value_term(e.actor), value_term(e.action), value_term(e.target),
         make_list([value_term(p) for p in e.pars]), Int(e.time)),
    )


def universe_term(domain: DomainSpec) -> Term:
    return make_list([event_term(e) for e in domain.events()])
