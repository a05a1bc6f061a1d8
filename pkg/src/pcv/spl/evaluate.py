"""Direct tri-valued evaluation of policies on ground events."""

from __future__ import annotations

import enum
from typing import Mapping

from ..events import GroundEvent, order_key
from .model import (
    And, BAnd, BConst, BNot, BOr, Cmp, EventProp, Exists, ForAll, InSet, Lit, Name, Not, Or,
    RuleRef, Simple, SplPolicyModel, SplRuleExpr,
)


class EvaluationError(ValueError):
    """An expression could not be evaluated to a ground value."""


class TriValue(enum.Enum):
    ALLOW = "allow"
    DENY = "deny"
    NOTAPPLY = "notapply"

    @classmethod
    def of(cls, domain: bool, accept: bool) -> "TriValue":
        if not domain:
            return cls.NOTAPPLY
        return cls.ALLOW if accept else cls.DENY

    @property
    def pair(self) -> tuple[bool, bool]:
        """A (domain, accept) pair with this verdict; NotApply uses accept=True."""
        return {"allow": (True, True), "deny": (True, False), "notapply": (False, True)}[self.value]


def tri_and(a: TriValue, b: TriValue) -> TriValue:
    (d1, a1), (d2, a2) = a.pair, b.pair
    return TriValue.of(d1 or d2, (not d1 or a1) and (not d2 or a2))


def tri_or(a: TriValue, b: TriValue) -> TriValue:
    (d1, a1), (d2, a2) = a.pair, b.pair
    return TriValue.of(d1 or d2, (d1 and a1) or (d2 and a2))


def tri_not(a: TriValue) -> TriValue:
    d, acc = a.pair
    return TriValue.of(d, not acc)


def tri_diff(a: TriValue, b: TriValue) -> bool:
    """The difference formula: domains differ or allowed-ness differs."""
    (d1, a1), (d2, a2) = a.pair, b.pair
    return (d1 != d2) or ((d1 and a1) != (d2 and a2))


def close_allows(v: TriValue) -> bool:
    return v is TriValue.ALLOW


def open_allows(v: TriValue) -> bool:
    return v is not TriValue.DENY


class _Env:
    def __init__(self, model, event, sets, values, bound):
        self.model = model
        self.event = event
        self.sets = sets
        self.values = values
        self.bound = bound


def _value(v, env: _Env):
    if isinstance(v, Lit):
        return v.value
    if isinstance(v, EventProp):
        try:
            return env.event.field(v.field, v.index)
        except IndexError as err:
            raise EvaluationError(str(err)) from None
    if isinstance(v, Name):
        if v.name in env.bound:
            return env.bound[v.name]
        if v.name in env.values:
            return env.values[v.name]
        raise EvaluationError(f"no value for {v.name}")
    raise EvaluationError(f"cannot evaluate {v!r}")


def _members(set_name: str, env: _Env):
    """Members of a set; an object with a ``test`` method stands for a set known only by membership."""
    if set_name not in env.sets or env.sets[set_name] is None:
        raise EvaluationError(f"set {set_name} has no contents")
    return env.sets[set_name]


def eval_bool(b, env: _Env) -> bool:
    if isinstance(b, BConst):
        return b.value
    if isinstance(b, Cmp):
        x, y = _value(b.left, env), _value(b.right, env)
        if b.op == "=":
            return x == y and type(x) is type(y)
        if b.op == "!=":
            return not (x == y and type(x) is type(y))
        kx, ky = order_key(x), order_key(y)
        return {"<": kx < ky, "<=": kx <= ky, ">": kx > ky, ">=": kx >= ky}[b.op]
    if isinstance(b, InSet):
        x = _value(b.value, env)
        members = _members(b.set_name, env)
        if hasattr(members, "test"):
            return members.test(x)
        return any(x == m and type(x) is type(m) for m in members)
    if isinstance(b, BAnd):
        return eval_bool(b.left, env) and eval_bool(b.right, env)
    if isinstance(b, BOr):
        return eval_bool(b.left, env) or eval_bool(b.right, env)
    if isinstance(b, BNot):
        return not eval_bool(b.expr, env)
    raise EvaluationError(f"cannot evaluate {b!r}")


def eval_rule(e: SplRuleExpr, env: _Env) -> TriValue:
    if isinstance(e, Simple):
        return TriValue.of(eval_bool(e.domain, env), eval_bool(e.accept, env))
    if isinstance(e, And):
        return tri_and(eval_rule(e.left, env), eval_rule(e.right, env))
    if isinstance(e, Or):
        return tri_or(eval_rule(e.left, env), eval_rule(e.right, env))
    if isinstance(e, Not):
        return tri_not(eval_rule(e.expr, env))
    if isinstance(e, (ForAll, Exists)):
        combine = tri_and if isinstance(e, ForAll) else tri_or
        acc = TriValue.NOTAPPLY
        for m in _members(e.set_name, env):
            inner = _Env(env.model, env.event, env.sets, env.values, {**env.bound, e.var: m})
            acc = combine(acc, eval_rule(e.body, inner))
        return acc
    if isinstance(e, RuleRef):
        if env.model is None or e.name not in env.model.rules:
            raise EvaluationError(f"unknown rule {e.name}")
        return eval_rule(env.model.rules[e.name], env)
    raise EvaluationError(f"cannot evaluate {e!r}")


def evaluate_tri(
    policy: SplPolicyModel | SplRuleExpr,
    event: GroundEvent,
    sets: Mapping[str, object] | None = None,
    values: Mapping[str, object] | None = None,
) -> TriValue:
    """Verdict of a policy's query rule (or a bare rule expression) on ``event``.

    ``sets`` maps set names to their members; every set the rule touches
    must be given.
    """
    model = policy if isinstance(policy, SplPolicyModel) else None
    expr = model.query_expr() if model else policy
    env = _Env(model, event, dict(sets or {}), dict(values or {}), {})
    return eval_rule(expr, env)


def eval_condition(b, values: Mapping[str, object]) -> bool:
    """A boolean expression over named values only (no event, no sets)."""
    return eval_bool(b, _Env(None, None, {}, dict(values), {}))
