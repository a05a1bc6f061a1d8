"""Order and equality handler.

Timeless ``leq``/``lt``/``neq`` follow the classic minmax handler; each
rule is followed by its timed variants. Timeless equality is the engine's
unification; timed equality ``eq(X,Y)@T`` needs its own rules because the
engine cannot bind a variable for a single instant.
"""

from __future__ import annotations

from ..engine.rules import parse_rules
from .pack import HandlerPack, with_timed

ORDER_FUNCTORS = frozenset(
    {("leq", 2, True), ("lt", 2, True), ("neq", 2, True), ("eq", 2, True), ("geq", 2, True), ("gt", 2, True)}
)

_ORDER = """
built_in @ leq(X, Y) <=> ground(X), ground(Y) | X @=< Y.
built_in @ lt(X, Y) <=> ground(X), ground(Y) | X @< Y.
built_in @ neq(X, Y) <=> ground(X), ground(Y) | X \\== Y.
alias @ geq(X, Y) <=> leq(Y, X).
alias @ gt(X, Y) <=> lt(Y, X).
reflexivity @ leq(X, X) <=> true.
irreflexivity @ lt(X, X) <=> fail.
irreflexivity @ neq(X, X) <=> fail.
antisymmetry @ leq(X, Y), leq(Y, X) <=> X = Y.
irreflexivity @ lt(X, Y), leq(Y, X) <=> fail.
irreflexivity @ lt(X, Y), lt(Y, X) <=> fail.
subsumption @ lt(X, Y) \\ leq(X, Y) <=> true.
subsumption @ leq(X, N1) \\ leq(X, N2) <=> ground(N1), ground(N2), N1 @< N2 | true.
subsumption @ leq(N1, X) \\ leq(N2, X) <=> ground(N1), ground(N2), N2 @< N1 | true.
subsumption @ lt(X, N1) \\ lt(X, N2) <=> ground(N1), ground(N2), N1 @< N2 | true.
subsumption @ lt(N1, X) \\ lt(N2, X) <=> ground(N1), ground(N2), N2 @< N1 | true.
commutativity @ neq(X, Y) \\ neq(Y, X) <=> true.
subsumption @ lt(X, Y) \\ neq(X, Y) <=> true.
subsumption @ lt(X, Y) \\ neq(Y, X) <=> true.
strict @ leq(X, Y), neq(X, Y) <=> lt(X, Y).
strict @ leq(X, Y), neq(Y, X) <=> lt(X, Y).
transitivity @ leq(X, Y), leq(Y, Z) ==> X \\== Y, Y \\== Z | leq(X, Z).
transitivity @ leq(X, Y), lt(Y, Z) ==> X \\== Y | lt(X, Z).
transitivity @ lt(X, Y), leq(Y, Z) ==> Y \\== Z | lt(X, Z).
transitivity @ lt(X, Y), lt(Y, Z) ==> lt(X, Z).
"""

_TIMED_EQUALITY = """
built_in @ eq(X, Y)@T <=> ground(X), ground(Y) | X = Y.
reflexivity @ eq(X, X)@T <=> true.
commutativity @ eq(X, Y)@T \\ eq(Y, X)@T <=> true.
subsumption @ eq(X, Y)@T \\ leq(Y, X)@T <=> X \\== Y | true.
subsumption @ eq(X, Y)@T \\ leq(X, Y)@T <=> X \\== Y | true.
irreflexivity @ eq(X, Y)@T, lt(Y, X)@T <=> fail.
irreflexivity @ eq(X, Y)@T, lt(X, Y)@T <=> fail.
irreflexivity @ eq(X, Y)@T, lt(Y, X) <=> fail.
irreflexivity @ eq(X, Y)@T, lt(X, Y) <=> fail.
tautology @ eq(X, Y)@T, neq(Y, X)@T <=> fail.
tautology @ eq(X, Y)@T, neq(X, Y)@T <=> fail.
tautology @ eq(X, Y)@T, neq(Y, X) <=> fail.
tautology @ eq(X, Y)@T, neq(X, Y) <=> fail.
with_self @ eq(X, Y)@T, eq(X, Z)@T ==> X \\== Y, X \\== Z, Y \\== Z | eq(Y, Z)@T.
with_self @ eq(X, Y)@T, eq(Y, Z)@T ==> X \\== Y, X \\== Z, Y \\== Z | eq(X, Z)@T.
with_self @ eq(X, Y)@T, eq(Z, X)@T ==> X \\== Y, X \\== Z, Y \\== Z | eq(Y, Z)@T.
with_self @ eq(X, Y)@T, eq(Z, Y)@T ==> X \\== Y, X \\== Z, Y \\== Z | eq(X, Z)@T.
w_less_or_equal @ eq(X, Y)@T, leq(X, Z)@T ==> X \\== Y, X \\== Z, Y \\== Z | leq(Y, Z)@T.
w_less_or_equal @ eq(X, Y)@T, leq(Y, Z)@T ==> X \\== Y, X \\== Z, Y \\== Z | leq(X, Z)@T.
w_less_or_equal @ eq(X, Y)@T, leq(Z, X)@T ==> X \\== Y, X \\== Z, Y \\== Z | leq(Z, Y)@T.
w_less_or_equal @ eq(X, Y)@T, leq(Z, Y)@T ==> X \\== Y, X \\== Z, Y \\== Z | leq(Z, X)@T.
w_less_or_equal @ eq(X, Y)@T, leq(X, Z) ==> X \\== Y, X \\== Z, Y \\== Z | leq(Y, Z)@T.
w_less_or_equal @ eq(X, Y)@T, leq(Y, Z) ==> X \\== Y, X \\== Z, Y \\== Z | leq(X, Z)@T.
w_less_or_equal @ eq(X, Y)@T, leq(Z, X) ==> X \\== Y, X \\== Z, Y \\== Z | leq(Z, Y)@T.
w_less_or_equal @ eq(X, Y)@T, leq(Z, Y) ==> X \\== Y, X \\== Z, Y \\== Z | leq(Z, X)@T.
w_less @ eq(X, Y)@T, lt(X, Z)@T ==> X \\== Y, X \\== Z, Y \\== Z | lt(Y, Z)@T.
w_less @ eq(X, Y)@T, lt(Y, Z)@T ==> X \\== Y, X \\== Z, Y \\== Z | lt(X, Z)@T.
w_less @ eq(X, Y)@T, lt(Z, X)@T ==> X \\== Y, X \\== Z, Y \\== Z | lt(Z, Y)@T.
w_less @ eq(X, Y)@T, lt(Z, Y)@T ==> X \\== Y, X \\== Z, Y \\== Z | lt(Z, X)@T.
w_less @ eq(X, Y)@T, lt(X, Z) ==> X \\== Y, X \\== Z, Y \\== Z | lt(Y, Z)@T.
w_less @ eq(X, Y)@T, lt(Y, Z) ==> X \\== Y, X \\== Z, Y \\== Z | lt(X, Z)@T.
w_less @ eq(X, Y)@T, lt(Z, X) ==> X \\== Y, X \\== Z, Y \\== Z | lt(Z, Y)@T.
w_less @ eq(X, Y)@T, lt(Z, Y) ==> X \\== Y, X \\== Z, Y \\== Z | lt(Z, X)@T.
w_not_equal @ eq(X, Y)@T, neq(X, Z)@T ==> X \\== Y, X \\== Z, Y \\== Z | neq(Y, Z)@T.
w_not_equal @ eq(X, Y)@T, neq(Z, X)@T ==> X \\== Y, X \\== Z, Y \\== Z | neq(Y, Z)@T.
w_not_equal @ eq(X, Y)@T, neq(Y, Z)@T ==> X \\== Y, X \\== Z, Y \\== Z | neq(X, Z)@T.
w_not_equal @ eq(X, Y)@T, neq(Z, Y)@T ==> X \\== Y, X \\== Z, Y \\== Z | neq(X, Z)@T.
w_not_equal @ eq(X, Y)@T, neq(X, Z) ==> X \\== Y, X \\== Z, Y \\== Z | neq(Y, Z)@T.
w_not_equal @ eq(X, Y)@T, neq(Z, X) ==> X \\== Y, X \\== Z, Y \\== Z | neq(Y, Z)@T.
w_not_equal @ eq(X, Y)@T, neq(Y, Z) ==> X \\== Y, X \\== Z, Y \\== Z | neq(X, Z)@T.
w_not_equal @ eq(X, Y)@T, neq(Z, Y) ==> X \\== Y, X \\== Z, Y \\== Z | neq(X, Z)@T.
"""

# The three rules used to introduce rule forms; kept separate because the
# first one treats two spellings of the same fact as a reason to unify.
RULE_FORMS_PROGRAM = """
simplification @ leq(A, B), geq(B, A) <=> A = B.
propagation @ leq(A, B), leq(B, C) ==> leq(A, C).
simpagation @ lt(X, Y) \\ neq(X, Y) <=> true.
"""


def order_rules(timed: bool = True):
    if not timed:
        return parse_rules(_ORDER)
    return with_timed(_ORDER)


def build_order_equality_pack(timed: bool = True) -> HandlerPack:
    """Timeless order rules, their timed variants and the timed-equality rules."""
    rules = list(order_rules(timed))
    if timed:
        rules += parse_rules(_TIMED_EQUALITY)
    return HandlerPack("order_equality", rules, ORDER_FUNCTORS)


def rule_forms_program() -> HandlerPack:
    return HandlerPack("rule_forms", parse_rules(RULE_FORMS_PROGRAM), ORDER_FUNCTORS)
