"""Guarded rewrite rules and rule programs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .syntax import parse_rule_text, split_rules
from .terms import Atom, Compound, Term, Var, format_term, term_vars


class ProgramError(Exception):
    """Malformed rule, unknown built-in or misuse of the engine API."""


GUARD_BUILTINS = frozenset(
    {
        "true", "ground", "nonground", "var", "nonvar", "integer", "is_list", "not_list",
        "==", "\\==", "neq", "@<", "@=<", "member", "not_member", "callable_goal", ",",
    }
)

# Functors executed directly by the engine when they appear as goals.
BODY_BUILTINS = frozenset(
    {
        "true", "fail", "=", ",", ";", "at", "member", "not_member", "length", "ground",
        "integer", "is_list", "==", "\\==", "@<", "@=<", "lookup", "call_tr", "subst",
        "cardinal", "cardinal_lt",
    }
)

LABELING = "labeling"

SYMMETRIC = frozenset({"eq", "neq", "and", "or", "xor"})


@dataclass(frozen=True)
class Head:
    functor: str
    args: tuple
    time: Term | None

    @property
    def key(self) -> tuple:
        return (self.functor, len(self.args), self.time is not None)

    def term(self) -> Term:
        base = Compound(self.functor, self.args) if self.args else Atom(self.functor)
        return base if self.time is None else Compound("at", (base, self.time))


def head_from_term(t: Term) -> Head:
    time = None
    if type(t) is Compound and t.functor == "at" and len(t.args) == 2:
        t, time = t.args
    if type(t) is Atom:
        return Head(t.name, (), time)
    if type(t) is Compound:
        return Head(t.functor, t.args, time)
    raise ProgramError(f"rule head must be a constraint, got {t!r}")


@dataclass
class ChrRule:
    name: str
    kept: tuple[Head, ...]
    removed: tuple[Head, ...]
    guard: tuple[Term, ...] = ()
    body: tuple[Term, ...] = ()
    head_vars: frozenset = field(init=False, repr=False)

    def __post_init__(self):
        self.kept = tuple(self.kept)
        self.removed = tuple(self.removed)
        self.guard = tuple(self.guard)
        self.body = tuple(self.body)
        if not self.kept and not self.removed:
            raise ProgramError(f"rule {self.name!r} has no heads")
        hv = set()
        for h in self.heads:
            for a in h.args:
                hv.update(term_vars(a))
            if h.time is not None:
                hv.update(term_vars(h.time))
        self.head_vars = frozenset(hv)
        for g in self.guard:
            for v in term_vars(g):
                if v not in self.head_vars:
                    raise ProgramError(f"rule {self.name!r}: guard variable {v.name} does not occur in a head")
            _check_guard_functor(g, self.name)
        for h in self.removed:
            if h.functor == LABELING:
                raise ProgramError(f"rule {self.name!r}: labeling may only be a kept head")

    @property
    def heads(self) -> tuple[Head, ...]:
        return self.kept + self.removed

    @property
    def kind(self) -> str:
        if not self.kept:
            return "simplification"
        if not self.removed:
            return "propagation"
        return "simpagation"

    @classmethod
    def parse(cls, text: str) -> "ChrRule":
        rt = parse_rule_text(text)
        return cls(
            rt.name,
            tuple(head_from_term(t) for t in rt.kept),
            tuple(head_from_term(t) for t in rt.removed),
            tuple(rt.guard),
            tuple(rt.body),
        )

    def text(self) -> str:
        names: dict = {}
        for v in sorted(_rule_vars(self), key=lambda v: v.id):
            if v.name != "_" and v.name not in names.values():
                names[v] = v.name
        # anonymous or clashing variables get canonical names
        def fmt(t):
            return format_term(t, names)

        kept = ", ".join(fmt(h.term()) for h in self.kept)
        removed = ", ".join(fmt(h.term()) for h in self.removed)
        if self.kind == "propagation":
            heads, arrow = kept, "==>"
        elif self.kind == "simplification":
            heads, arrow = removed, "<=>"
        else:
            heads, arrow = f"{kept} \\ {removed}", "<=>"
        guard = ", ".join(fmt(g) for g in self.guard)
        body = ", ".join(fmt(b) for b in self.body) or "true"
        prefix = f"{self.name} @ " if self.name else ""
        middle = f"{guard} | " if guard else ""
        return f"{prefix}{heads} {arrow} {middle}{body}."


def _rule_vars(rule: ChrRule):
    seen = set()
    terms = [h.term() for h in rule.heads] + list(rule.guard) + list(rule.body)
    for t in terms:
        for v in term_vars(t):
            if v not in seen:
                seen.add(v)
                yield v


def _check_guard_functor(g: Term, rule_name: str) -> None:
    if type(g) is Atom:
        name = g.name
    elif type(g) is Compound:
        name = g.functor
    else:
        raise ProgramError(f"rule {rule_name!r}: guard {g!r} is not a built-in test")
    if name not in GUARD_BUILTINS:
        raise ProgramError(f"rule {rule_name!r}: unknown guard built-in {name!r}")
    if name == "," and type(g) is Compound:
        for a in g.args:
            _check_guard_functor(a, rule_name)


def parse_rules(text: str) -> list[ChrRule]:
    return [ChrRule.parse(chunk) for chunk in split_rules(text)]


RUNTIME_RULES = parse_rules(
    """
    call @ '$call'(G) <=> callable_goal(G) | G.
    """
)


class RuleProgram:
    """An immutable, ordered rule program.

    ``dedupe`` lists the functors subject to the already-in-store check;
    ``None`` enables it for every user-defined constraint. Binary functors
    in ``symmetric`` count as already in store when present with swapped
    arguments, so commutativity rules never trade a constraint for its
    mirror image.
    """

    def __init__(
        self,
        rules: Iterable[ChrRule],
        dedupe: Iterable[str] | None = None,
        runtime: bool = True,
        symmetric: Iterable[str] = SYMMETRIC,
    ):
        self._user = tuple(rules)
        self.symmetric = frozenset(symmetric)
        self.rules: tuple[ChrRule, ...] = tuple(RUNTIME_RULES if runtime else ()) + self._user
        self.dedupe = None if dedupe is None else frozenset(dedupe)
        occurrences: dict[tuple, list] = {}
        for ri, rule in enumerate(self.rules):
            for hi, head in enumerate(rule.heads):
                occurrences.setdefault(head.key, []).append((ri, hi))
        self.occurrences = {k: tuple(v) for k, v in occurrences.items()}

    def __len__(self) -> int:
        return len(self.rules)

    def __add__(self, other: "RuleProgram") -> "RuleProgram":
        return RuleProgram(self.user_rules + other.user_rules, _merge_dedupe(self.dedupe, other.dedupe))

    @property
    def user_rules(self) -> list[ChrRule]:
        return list(self._user)

    def dedupes(self, functor: str) -> bool:
        return self.dedupe is None or functor in self.dedupe

    def dump(self) -> str:
        return "\n".join(r.text() for r in self.user_rules) + "\n"


def _merge_dedupe(a, b):
    if a is None or b is None:
        return None
    return a | b


def program(*parts: Sequence[ChrRule] | "RuleProgram", dedupe: Iterable[str] | None = None) -> RuleProgram:
    """Concatenate rule sequences (handler packs, compiled rules) into one program."""
    rules: list[ChrRule] = []
    for part in parts:
        if isinstance(part, RuleProgram):
            rules.extend(part.user_rules)
        else:
            rules.extend(getattr(part, "rules", part))
    return RuleProgram(rules, dedupe)
