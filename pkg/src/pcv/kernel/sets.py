"""Membership, meet, union and restriction handler.

Sets are either literal lists (defined) or unbound variables (undefined).
Set relations are only used to derive membership facts; the disjunctive
rules wait for ``labeling``. Membership constraints are never removed and
no rule adds a set relation, which keeps the pack terminating.
"""

from __future__ import annotations

from ..engine.rules import parse_rules
from .pack import HandlerPack, with_timed

SET_RELATIONS = ("meet", "union", "restrict")

SET_FUNCTORS = frozenset(
    {
        ("in", 2, True),
        ("notin", 2, True),
        ("meet", 3, False),
        ("union", 3, False),
        ("restrict", 3, False),
        ("sat", 2, False),
        ("nsat", 2, False),
    }
)

_MEMBERSHIP = """
tautology @ in(X, G), notin(X, G) <=> fail.
defined @ in(X, L) ==> is_list(L), ground(X), not_member(X, L) | fail.
defined @ notin(X, L) ==> is_list(L), ground(X), member(X, L) | fail.
labeling @ labeling, in(X, L) ==> is_list(L), nonground(X) | member(X, L).
distributivity @ in(X, C), meet(C, A, B) ==> A \\== B | in(X, A), in(X, B).
rev_dist @ in(X, A), in(X, B), meet(C, A, B) ==> A \\== B | in(X, C).
rev_not_dist @ notin(X, A), meet(C, A, B) ==> notin(X, C).
rev_not_dist @ notin(X, B), meet(C, A, B) ==> notin(X, C).
not_distrib @ notin(X, C), in(X, A), meet(C, A, B) ==> notin(X, B).
not_distrib @ notin(X, C), in(X, B), meet(C, A, B) ==> notin(X, A).
rev_dist @ labeling, in(X, A), meet(C, A, B) ==> A \\== B | ((notin(X, B), notin(X, C)) ; (in(X, C), in(X, B))).
rev_dist @ labeling, in(X, B), meet(C, A, B) ==> A \\== B | ((notin(X, A), notin(X, C)) ; (in(X, A), in(X, C))).
not_distrib @ labeling, notin(X, C), meet(C, A, B) ==> A \\== B | (notin(X, A) ; notin(X, B)).
join_dist @ notin(X, C), union(C, A, B) ==> A \\== B | notin(X, A), notin(X, B).
join_rev_dist @ notin(X, A), notin(X, B), union(C, A, B) ==> A \\== B | notin(X, C).
join_rev_in @ in(X, A), union(C, A, B) ==> in(X, C).
join_rev_in @ in(X, B), union(C, A, B) ==> in(X, C).
join_not_distrib @ in(X, C), notin(X, A), union(C, A, B) ==> in(X, B).
join_not_distrib @ in(X, C), notin(X, B), union(C, A, B) ==> in(X, A).
join_rev_dist @ labeling, notin(X, A), union(C, A, B) ==> A \\== B | ((in(X, B), in(X, C)) ; (notin(X, C), notin(X, B))).
join_rev_dist @ labeling, notin(X, B), union(C, A, B) ==> A \\== B | ((in(X, A), in(X, C)) ; (notin(X, C), notin(X, A))).
join_not_distrib @ labeling, in(X, C), union(C, A, B) ==> A \\== B | (in(X, A) ; in(X, B)).
restriction @ in(X, C), restrict(C, A, R) ==> sat(R, X), in(X, A).
rev_restric @ labeling, in(X, A), restrict(C, A, R) ==> ((sat(R, X), in(X, C)) ; (notin(X, C), nsat(R, X))).
"""

_RELATIONS = """
identity @ meet(C, A, A) <=> C = A.
commutativity @ meet(C, A, B) \\ meet(C, B, A) <=> true.
identity @ union(C, A, A) <=> C = A.
commutativity @ union(C, A, B) \\ union(C, B, A) <=> true.
idempotent @ restrict(C, A, R) \\ restrict(D, A, R) <=> C = D.
predicate @ sat(any, X) <=> true.
predicate @ nsat(any, X) <=> fail.
predicate @ sat(pred(V, F), X) <=> subst(V, X, F, G), G.
predicate @ nsat(pred(V, F), X) <=> subst(V, X, F, G), not(G).
"""


def _membership(h) -> bool:
    return h.functor in ("in", "notin")


def build_set_pack(timed: bool = True) -> HandlerPack:
    """Membership rules (with timed membership variants) and set-relation rules.

    ``nsat`` of a user predicate produces a ``not/1`` constraint, which is
    solved by the logic pack when it is loaded.
    """
    relations = parse_rules(_RELATIONS)
    membership = with_timed(_MEMBERSHIP, _membership) if timed else parse_rules(_MEMBERSHIP)
    return HandlerPack("sets", relations + membership, SET_FUNCTORS)
