"""Translation of policies into one simplification rule each.

The rule head is ``name(Event, Params..., Locals, Globals, R)``. Its body
destructures the event, binds the internal sets from Locals, looks up the
global sets, posts one constraint per composed rule and equates R with the
query rule's ``r(D, A)`` term.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..engine.rules import ChrRule, Head
from ..engine.terms import FAIL, NIL, TRUE, Atom, Compound, Int, Str, Term, Var, make_list
from .model import (
    And, BAnd, BConst, BNot, BOr, Cmp, EventProp, Exists, ForAll, InSet, Lit, Name, Not, Or,
    RuleRef, Simple, SplError, SplPolicyModel, SplRuleExpr,
)


class CompileError(SplError):
    pass


def functor_name(name: str) -> str:
    """Lower-case-initial functor for a policy or activity name."""
    s = re.sub(r"\W", "_", name)
    return s[:1].lower() + s[1:]


def _var_name(name: str) -> str:
    s = re.sub(r"\W", "_", name)
    return s if s[:1].isupper() else "S_" + s


@dataclass
class CompiledPolicy:
    model: SplPolicyModel
    functor: str
    rules: list[ChrRule]
    params: list[str]
    internal: list[str]
    globals: list[str]
    locals_functor: str
    max_par: int = 0
    skolemized: int = 0

    def head_goal(self, event: Term, params: list[Term], locals_term: Term, globals_term: Term, result: Term) -> Term:
        return Compound(self.functor, [event, *params, locals_term, globals_term, result])

    def locals_term(self, internal: list[Term]) -> Term:
        inner = Compound(self.locals_functor, internal) if internal else Atom(self.locals_functor)
        return Compound("locals", (inner,))


@dataclass
class _Scope:
    fields: dict
    sets: dict
    values: dict
    bound: dict = field(default_factory=dict)


class _Compiler:
    def __init__(self, model: SplPolicyModel, skolemize: bool):
        self.model = model
        self.skolemize = skolemize
        self.created: list[Var] = []
        self.counter = 0
        self.skolemized = 0

    def fresh(self, name: str) -> Var:
        v = Var(name)
        self.created.append(v)
        return v

    def result(self) -> Var:
        self.counter += 1
        return self.fresh(f"R{self.counter}")

    # ---- values and formulas ------------------------------------------------------------

    def value(self, v, scope: _Scope) -> Term:
        if isinstance(v, Lit):
            return Int(v.value) if isinstance(v.value, int) else Str(v.value)
        if isinstance(v, EventProp):
            if v.field == "par":
                key = f"par{v.index}"
                if key not in scope.fields:
                    raise CompileError(f"par[{v.index}] is out of range")
                return scope.fields[key]
            return scope.fields[v.field]
        if isinstance(v, Name):
            if v.name in scope.bound:
                return scope.bound[v.name]
            if v.name in scope.values:
                return scope.values[v.name]
            raise CompileError(f"unbound name {v.name}")
        raise CompileError(f"unsupported value {v!r}")

    def formula(self, b, scope: _Scope) -> Term:
        if isinstance(b, BConst):
            return TRUE if b.value else FAIL
        if isinstance(b, Cmp):
            x, y = self.value(b.left, scope), self.value(b.right, scope)
            if b.op == "=":
                return Compound("=", (x, y))
            if b.op == "!=":
                return Compound("neq", (x, y))
            if b.op == "<":
                return Compound("lt", (x, y))
            if b.op == "<=":
                return Compound("leq", (x, y))
            if b.op == ">":
                return Compound("lt", (y, x))
            if b.op == ">=":
                return Compound("leq", (y, x))
            raise CompileError(f"unsupported comparison {b.op}")
        if isinstance(b, InSet):
            return Compound("in", (self.value(b.value, scope), scope.sets[b.set_name]))
        if isinstance(b, BAnd):
            return Compound("and", (self.formula(b.left, scope), self.formula(b.right, scope)))
        if isinstance(b, BOr):
            return Compound("or", (self.formula(b.left, scope), self.formula(b.right, scope)))
        if isinstance(b, BNot):
            return Compound("not", (self.formula(b.expr, scope),))
        raise CompileError(f"unsupported expression {b!r}")

    # ---- rule expressions ----------------------------------------------------------------

    def rule(self, e: SplRuleExpr, scope: _Scope, goals: list, positive: bool, nested: bool) -> Term:
        """Append the goals computing ``e`` and return its r(D, A) term or result variable."""
        if isinstance(e, Simple):
            return Compound("r", (self.formula(e.domain, scope), self.formula(e.accept, scope)))
        if isinstance(e, RuleRef):
            return self.rule(self.model.resolve(e), scope, goals, positive, nested)
        if isinstance(e, (And, Or)):
            left = self.rule(e.left, scope, goals, positive, nested)
            right = self.rule(e.right, scope, goals, positive, nested)
            out = self.result()
            goals.append(Compound("tri_and" if isinstance(e, And) else "tri_or", (left, right, out)))
            return out
        if isinstance(e, Not):
            inner = self.rule(e.expr, scope, goals, not positive, nested)
            out = self.result()
            goals.append(Compound("tri_not", (inner, out)))
            return out
        if isinstance(e, (ForAll, Exists)):
            set_term = scope.sets[e.set_name]
            if isinstance(e, Exists) and self.skolemize and positive and not nested and _domain_free_of(self.model, e.body, e.var):
                const = self.fresh("Sk_" + re.sub(r"\W", "_", e.var))
                goals.append(Compound("in", (const, set_term)))
                inner_scope = _Scope(scope.fields, scope.sets, scope.values, {**scope.bound, e.var: const})
                self.skolemized += 1
                return self.rule(e.body, inner_scope, goals, positive, nested)
            param = self.fresh("Q_" + re.sub(r"\W", "_", e.var))
            start = len(self.created)
            inner_scope = _Scope(scope.fields, scope.sets, scope.values, {**scope.bound, e.var: param})
            body_goals: list = []
            body_result = self.rule(e.body, inner_scope, body_goals, positive, True)
            local_vars = self.created[start:]
            body = _conj(body_goals)
            tr = Compound("tr", (param, make_list(local_vars), body, body_result))
            out = self.result()
            goals.append(Compound("forallr" if isinstance(e, ForAll) else "existsr", (set_term, tr, out)))
            return out
        raise CompileError(f"unsupported rule form {e!r}")


def _conj(goals: list) -> Term:
    if not goals:
        return TRUE
    out = goals[-1]
    for g in reversed(goals[:-1]):
        out = Compound(",", (g, out))
    return out


def _mentions(b, var: str) -> bool:
    if isinstance(b, Name):
        return b.name == var
    if isinstance(b, Cmp):
        return _mentions(b.left, var) or _mentions(b.right, var)
    if isinstance(b, InSet):
        return _mentions(b.value, var)
    if isinstance(b, (BAnd, BOr)):
        return _mentions(b.left, var) or _mentions(b.right, var)
    if isinstance(b, BNot):
        return _mentions(b.expr, var)
    return False


def _domain_free_of(model: SplPolicyModel, e: SplRuleExpr, var: str) -> bool:
    e = model.resolve(e)
    if isinstance(e, Simple):
        return not _mentions(e.domain, var)
    if isinstance(e, (And, Or)):
        return _domain_free_of(model, e.left, var) and _domain_free_of(model, e.right, var)
    if isinstance(e, Not):
        return _domain_free_of(model, e.expr, var)
    # nested quantifiers: keep the unfolded form
    return False


def _max_par(model: SplPolicyModel) -> int:
    best = 0

    def value(v):
        nonlocal best
        if isinstance(v, EventProp) and v.field == "par":
            best = max(best, v.index)

    def boolean(b):
        if isinstance(b, Cmp):
            value(b.left)
            value(b.right)
        elif isinstance(b, InSet):
            value(b.value)
        elif isinstance(b, (BAnd, BOr)):
            boolean(b.left)
            boolean(b.right)
        elif isinstance(b, BNot):
            boolean(b.expr)

    def rule(e):
        if isinstance(e, Simple):
            boolean(e.domain)
            boolean(e.accept)
        elif isinstance(e, (And, Or)):
            rule(e.left)
            rule(e.right)
        elif isinstance(e, Not):
            rule(e.expr)
        elif isinstance(e, (ForAll, Exists)):
            rule(e.body)

    for e in model.rules.values():
        rule(e)
    return best


def compile_policy(
    model: SplPolicyModel,
    name: str | None = None,
    skolemize: bool = False,
) -> CompiledPolicy:
    """Compile ``model`` to its simplification rule.

    ``name`` overrides the head functor (the locals wrapper keeps the
    model's name so a renamed copy shares its sets with the original).
    ``skolemize`` replaces eligible existential quantifiers by a witness
    constant; it is only sound where the acceptability is used positively.
    """
    functor = functor_name(name or model.name)
    locals_functor = functor_name(model.name) + "_vars"
    c = _Compiler(model, skolemize)
    event = Var("Event")
    fields = {
        "author": Var("Actor"),
        "action": Var("Action"),
        "target": Var("Target"),
        "time": Var("Time"),
    }
    pars = Var("Pars")
    max_par = _max_par(model)
    par_vars = [Var(f"Par{i}") for i in range(1, max_par + 1)]
    for i, v in enumerate(par_vars, 1):
        fields[f"par{i}"] = v
    sets = {s.name: Var(_var_name(s.name)) for s in model.sets}
    values = {n: Var(_var_name(n)) for n in model.value_params}
    params = [n for n, _ in model.parameters]
    param_terms = [sets[n] if n in sets else values[n] for n in params]
    internal = [s.name for s in model.sets if s.scope == "internal"]
    global_sets = [s.name for s in model.sets if s.scope == "global"]
    locals_var, globals_var, result = Var("Locals"), Var("Globals"), Var("R")

    goals: list[Term] = [
        Compound("=", (event, Compound("event", (fields["author"], fields["action"], fields["target"], pars, fields["time"])))),
    ]
    if par_vars:
        goals.append(Compound("=", (pars, make_list(par_vars, Var("_")))))
    inner = Compound(locals_functor, [sets[n] for n in internal]) if internal else Atom(locals_functor)
    goals.append(Compound("=", (locals_var, Compound("locals", (inner,)))))
    for g in global_sets:
        goals.append(Compound("lookup", (Str(g), globals_var, sets[g])))
    scope = _Scope(fields, sets, values)
    query = c.rule(model.query_expr(), scope, goals, True, False)
    goals.append(Compound("=", (result, query)))
    head = Head(functor, (event, *param_terms, locals_var, globals_var, result), None)
    rule = ChrRule(functor, (), (head,), (), tuple(goals))
    return CompiledPolicy(model, functor, [rule], params, internal, global_sets, locals_functor, max_par, c.skolemized)
