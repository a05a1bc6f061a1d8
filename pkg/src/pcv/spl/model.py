"""Policy model: sets, named tri-valued rules and a query rule."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

EVENT_FIELDS = ("author", "action", "target", "par", "time")


class SplError(ValueError):
    """Base class for policy diagnostics."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line else ""
        super().__init__(where + message)


class SplSyntaxError(SplError):
    pass


class MissingQueryRule(SplError):
    pass


class UnboundSet(SplError):
    pass


class DuplicateRule(SplError):
    pass


class UnknownRule(SplError):
    pass


class CyclicRule(SplError):
    pass


# ---- values and boolean expressions ---------------------------------------------


@dataclass(frozen=True)
class EventProp:
    field: str
    index: int = 0  # 1-based, only for par


@dataclass(frozen=True)
class Lit:
    value: Union[str, int]


@dataclass(frozen=True)
class Name:
    """A quantified variable or a value parameter."""

    name: str


Value = Union[EventProp, Lit, Name]


@dataclass(frozen=True)
class BConst:
    value: bool


@dataclass(frozen=True)
class Cmp:
    op: str  # one of = != < <= > >=
    left: Value
    right: Value


@dataclass(frozen=True)
class InSet:
    value: Value
    set_name: str


@dataclass(frozen=True)
class BAnd:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class BOr:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class BNot:
    expr: "BoolExpr"


BoolExpr = Union[BConst, Cmp, InSet, BAnd, BOr, BNot]


# ---- rule expressions --------------------------------------------------------------


@dataclass(frozen=True)
class Simple:
    domain: BoolExpr
    accept: BoolExpr


@dataclass(frozen=True)
class And:
    left: "SplRuleExpr"
    right: "SplRuleExpr"


@dataclass(frozen=True)
class Or:
    left: "SplRuleExpr"
    right: "SplRuleExpr"


@dataclass(frozen=True)
class Not:
    expr: "SplRuleExpr"


@dataclass(frozen=True)
class ForAll:
    var: str
    set_name: str
    body: "SplRuleExpr"


@dataclass(frozen=True)
class Exists:
    var: str
    set_name: str
    body: "SplRuleExpr"


@dataclass(frozen=True)
class RuleRef:
    name: str


SplRuleExpr = Union[Simple, And, Or, Not, ForAll, Exists, RuleRef]

NEVER = Simple(BConst(False), BConst(True))


@dataclass(frozen=True)
class SetDecl:
    name: str
    sort: str  # user | object | any
    scope: str  # param | internal | global


@dataclass
class SplPolicyModel:
    name: str
    parameters: list[tuple[str, str]] = field(default_factory=list)
    sets: list[SetDecl] = field(default_factory=list)
    rules: dict[str, SplRuleExpr] = field(default_factory=dict)
    query: str = ""

    @property
    def set_names(self) -> list[str]:
        return [s.name for s in self.sets]

    @property
    def value_params(self) -> list[str]:
        return [n for n, sort in self.parameters if sort == "value"]

    def set_decl(self, name: str) -> SetDecl | None:
        for s in self.sets:
            if s.name == name:
                return s
        return None

    def query_expr(self) -> SplRuleExpr:
        return self.rules[self.query]

    def resolve(self, expr: SplRuleExpr, seen: tuple = ()) -> SplRuleExpr:
        """Inline rule references."""
        if isinstance(expr, RuleRef):
            if expr.name in seen:
                raise CyclicRule(f"rule {expr.name} refers to itself")
            if expr.name not in self.rules:
                raise UnknownRule(f"unknown rule {expr.name}")
            return self.resolve(self.rules[expr.name], seen + (expr.name,))
        if isinstance(expr, (And, Or)):
            return type(expr)(self.resolve(expr.left, seen), self.resolve(expr.right, seen))
        if isinstance(expr, Not):
            return Not(self.resolve(expr.expr, seen))
        if isinstance(expr, (ForAll, Exists)):
            return type(expr)(expr.var, expr.set_name, self.resolve(expr.body, seen))
        return expr

    def replace(self, path: str, new: SplRuleExpr) -> "SplPolicyModel":
        """Copy with the rule named ``path`` (or a position inside the query rule) replaced.

        Positions are written ``query.left.right``; ``body`` and ``expr`` step
        into quantifiers and negations.
        """
        parts = path.split(".")
        head, steps = parts[0], parts[1:]
        rules = dict(self.rules)
        if head == "query":
            head = self.query
        elif head not in rules:
            raise UnknownRule(f"unknown rule {path}")
        if head not in rules:
            raise UnknownRule(f"unknown rule {path}")
        rules[head] = _replace_at(rules[head], steps, new, path)
        return SplPolicyModel(self.name, list(self.parameters), list(self.sets), rules, self.query)


def _replace_at(expr: SplRuleExpr, steps: list[str], new: SplRuleExpr, path: str) -> SplRuleExpr:
    if not steps:
        return new
    step, rest = steps[0], steps[1:]
    if isinstance(expr, (And, Or)) and step in ("left", "right"):
        left = _replace_at(expr.left, rest, new, path) if step == "left" else expr.left
        right = _replace_at(expr.right, rest, new, path) if step == "right" else expr.right
        return type(expr)(left, right)
    if isinstance(expr, Not) and step == "expr":
        return Not(_replace_at(expr.expr, rest, new, path))
    if isinstance(expr, (ForAll, Exists)) and step == "body":
        return type(expr)(expr.var, expr.set_name, _replace_at(expr.body, rest, new, path))
    raise UnknownRule(f"no position {step!r} in {path}")


def rule_paths(model: SplPolicyModel) -> list[str]:
    """Named non-query rules followed by positions inside the query rule."""
    out = [n for n in model.rules if n != model.query]

    def walk(expr, prefix):
        if isinstance(expr, (And, Or)):
            for step, sub in (("left", expr.left), ("right", expr.right)):
                out.append(f"{prefix}.{step}")
                walk(sub, f"{prefix}.{step}")
        elif isinstance(expr, Not):
            out.append(f"{prefix}.expr")
            walk(expr.expr, f"{prefix}.expr")

    walk(model.rules[model.query], "query")
    return out
