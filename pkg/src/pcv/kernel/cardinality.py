"""Cardinality handler: ``card(N, S)`` states N = |S|."""

from __future__ import annotations

from ..engine.rules import parse_rules
from .pack import HandlerPack
from .order import ORDER_FUNCTORS
from .sets import SET_FUNCTORS

CARD_FUNCTORS = frozenset({("card", 2, False), ("card_member", 2, False)}) | ORDER_FUNCTORS | SET_FUNCTORS

_CARDINALITY = """
identity @ card(N1, L) \\ card(N2, L) <=> N1 = N2.
meet @ card(NC, C), card(NA, A), meet(C, A, B) ==> leq(NC, NA).
meet @ card(NC, C), card(NB, B), meet(C, A, B) ==> leq(NC, NB).
join @ card(NC, C), card(NA, A), union(C, A, B) ==> leq(NA, NC).
join @ card(NC, C), card(NB, B), union(C, A, B) ==> leq(NB, NC).
restrict @ card(NA, A), card(NC, C), restrict(C, A, R) ==> leq(NC, NA).
less @ card(N, A) ==> integer(N), N @< 0 | fail.
eq_set_min @ card(N, L) ==> is_list(L) | length(L, N).
insert @ in(X, L), card(N, L) ==> not_list(L) | card_member(L, X).
eq_set_min @ labeling, card(N, L) ==> not_list(L), integer(N), 0 @=< N | cardinal(L, N).
lesser @ labeling, card(N, L), lt(N, N1) ==> not_list(L), integer(N1), 0 @< N1 | cardinal_lt(L, N1).
lesseq @ labeling, card(N, L), leq(N, N1) ==> not_list(L), integer(N1), 0 @=< N1 | cardinal(L, N1).
recount @ labeling, card(N, L), card_member(L, X) ==> integer(N) | cardinal(L, N).
"""


def build_cardinality_pack() -> HandlerPack:
    return HandlerPack("cardinality", parse_rules(_CARDINALITY), CARD_FUNCTORS)
