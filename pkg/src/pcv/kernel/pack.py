"""Handler packs and the timed-rule template expansion."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Sequence

from ..engine.rules import LABELING, ChrRule, Head, ProgramError, RuleProgram, parse_rules
from ..engine.terms import Compound, Term, Var


@dataclass(frozen=True)
class HandlerPack:
    """A named, immutable group of rules with the functors its heads may use."""

    name: str
    rules: tuple[ChrRule, ...]
    functors: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "functors", frozenset(self.functors))
        known = {(f, a) for f, a, _ in self.functors}
        for rule in self.rules:
            for h in rule.heads:
                if h.functor == LABELING:
                    continue
                if (h.functor, len(h.args)) not in known:
                    raise ProgramError(f"pack {self.name}: head {h.functor}/{len(h.args)} not declared")

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def timed_allowed(self, functor: str, arity: int) -> bool:
        return any(f == functor and a == arity and t for f, a, t in self.functors)

    def program(self) -> RuleProgram:
        return RuleProgram(self.rules)

    def dump(self) -> str:
        return "\n".join(r.text() for r in self.rules) + "\n"

    def body_functors(self) -> set[str]:
        out: set[str] = set()
        for rule in self.rules:
            for b in rule.body:
                _goal_functors(b, out)
        return out


def _goal_functors(t: Term, out: set) -> None:
    if type(t) is Compound:
        if t.functor in (",", ";") and len(t.args) == 2:
            _goal_functors(t.args[0], out)
            _goal_functors(t.args[1], out)
            return
        if t.functor == "at" and len(t.args) == 2:
            _goal_functors(t.args[0], out)
            return
        out.add(t.functor)
    elif hasattr(t, "name") and type(t) is not Var:
        out.add(t.name)


def merge(name: str, *packs: HandlerPack) -> HandlerPack:
    rules: list[ChrRule] = []
    functors: set = set()
    for p in packs:
        rules.extend(p.rules)
        functors |= p.functors
    return HandlerPack(name, rules, functors)


def _timed_body(goal: Term, time: Var) -> Term:
    if type(goal) is Compound and goal.functor == "at":
        raise ProgramError("timed_expand expects a timeless rule")
    return Compound("at", (goal, time))


def timed_expand(rule: ChrRule, vary: Callable[[Head], bool] | None = None) -> list[ChrRule]:
    """Derive the timed variants of a timeless rule.

    One variant per non-empty subset of the varying heads (all heads except
    ``labeling`` unless ``vary`` narrows the choice), in subset-size order.
    Every variant shares one fresh time variable and puts its body at that
    time. Propagation variants keep every head; for rules that remove
    heads, only the removed heads that became timed are removed and the
    timeless ones move to the kept side.
    """
    heads = list(getattr(rule, "heads", ()))
    if not heads:
        raise ProgramError("cannot expand a rule with no heads")
    for h in heads:
        if h.time is not None:
            raise ProgramError(f"rule {rule.name!r} already has timed heads")
    n_kept = len(rule.kept)
    candidates = [
        i for i, h in enumerate(heads) if h.functor != LABELING and (vary is None or vary(h))
    ]
    if not candidates:
        raise ProgramError(f"rule {rule.name!r} has no head that may be timed")
    out = []
    for size in range(1, len(candidates) + 1):
        for subset in combinations(candidates, size):
            time = Var("T")
            timed = set(subset)
            new_heads = [
                Head(h.functor, h.args, time if i in timed else None) for i, h in enumerate(heads)
            ]
            if rule.kind == "propagation":
                kept, removed = new_heads, []
            else:
                kept = [h for i, h in enumerate(new_heads) if i < n_kept or i not in timed]
                removed = [h for i, h in enumerate(new_heads) if i >= n_kept and i in timed]
            body = tuple(_timed_body(b, time) for b in rule.body)
            if not removed and rule.kind != "propagation" and _is_trivial(body):
                # removing nothing and adding nothing: the variant is a no-op
                body = ()
            out.append(ChrRule(rule.name, tuple(kept), tuple(removed), rule.guard, body))
    return out


def _is_trivial(body: Sequence[Term]) -> bool:
    return all(type(b) is Compound and b.functor == "at" and getattr(b.args[0], "name", None) == "true" for b in body)


def expand_all(rules: Iterable[ChrRule], vary: Callable[[Head], bool] | None = None) -> list[ChrRule]:
    out: list[ChrRule] = []
    for r in rules:
        out.extend(timed_expand(r, vary))
    return out


def with_timed(text: str, vary: Callable[[Head], bool] | None = None) -> list[ChrRule]:
    """Parse timeless rules and follow each by its timed variants."""
    out: list[ChrRule] = []
    for r in parse_rules(text):
        out.append(r)
        out.extend(timed_expand(r, vary))
    return out
