"""Security constraint handler: binary logic over constraints and tri-valued rules.

Formulas are ordinary terms built from ``and/2``, ``or/2``, ``xor/2``,
``not/1``, ``true``, ``fail`` and kernel constraints. A tri-valued rule is
``r(D, A)`` with applicability D and acceptability A.
"""

from __future__ import annotations

from ..engine.rules import parse_rules
from ..kernel.order import ORDER_FUNCTORS
from ..kernel.pack import HandlerPack, with_timed
from ..kernel.sets import SET_FUNCTORS

LOGIC_FUNCTORS = frozenset({("and", 2, False), ("or", 2, False), ("xor", 2, False), ("not", 1, False)})

_LOGIC = """
commutativity @ and(A, B) \\ and(B, A) <=> true.
commutativity @ or(A, B) \\ or(B, A) <=> true.
commutativity @ xor(A, B) \\ xor(B, A) <=> true.
identity @ and(A, A) <=> A.
identity @ or(A, A) <=> A.
irreflexivity @ xor(A, A) <=> fail.
unit @ and(true, B) <=> B.
unit @ and(A, true) <=> A.
zero @ and(fail, B) <=> fail.
zero @ and(A, fail) <=> fail.
unit @ or(fail, B) <=> B.
unit @ or(A, fail) <=> A.
zero @ or(true, B) <=> true.
zero @ or(A, true) <=> true.
definition @ and(A, B) <=> A \\== B | A, B.
definition @ xor(A, B) <=> A \\== B | or(and(A, not(B)), and(not(A), B)).
definition @ labeling \\ or(A, B) <=> A \\== B | (A ; (not(A), B)).
tautology @ not(true) <=> fail.
tautology @ not(fail) <=> true.
tautology @ not(not(A)) <=> A.
de_morgan @ not(and(A, B)) <=> or(not(A), not(B)).
de_morgan @ not(or(A, B)) <=> not(A), not(B).
definition @ not(xor(A, B)) <=> or(and(A, B), and(not(A), not(B))).
reduction @ not(lt(A, B)) <=> leq(B, A).
reduction @ not(leq(A, B)) <=> lt(B, A).
reduction @ not(gt(A, B)) <=> leq(A, B).
reduction @ not(geq(A, B)) <=> lt(A, B).
reduction @ not(A = B) <=> neq(A, B).
reduction @ not(neq(A, B)) <=> A = B.
reduction @ not(in(X, S)) <=> notin(X, S).
reduction @ not(notin(X, S)) <=> in(X, S).
reduction @ not(sat(R, X)) <=> nsat(R, X).
reduction @ not(nsat(R, X)) <=> sat(R, X).
reduction @ not(lt(A, B)@T) <=> leq(B, A)@T.
reduction @ not(leq(A, B)@T) <=> lt(B, A)@T.
reduction @ not((A = B)@T) <=> neq(A, B)@T.
reduction @ not(eq(A, B)@T) <=> neq(A, B)@T.
reduction @ not(neq(A, B)@T) <=> eq(A, B)@T.
reduction @ not(in(X, S)@T) <=> notin(X, S)@T.
reduction @ not(notin(X, S)@T) <=> in(X, S)@T.
"""

TRI_FUNCTORS = frozenset(
    {
        ("tri_not", 2, False),
        ("tri_and", 3, False),
        ("tri_or", 3, False),
        ("forallr", 3, True),
        ("forallr", 4, True),
        ("existsr", 3, True),
        ("existsr", 4, True),
        ("in", 2, True),
    }
)

_TRI = """
definition @ tri_not(r(D, A), R) <=> R = r(D, not(A)).
commutativity @ tri_and(R1, R2, R3) \\ tri_and(R2, R1, R4) <=> R4 = R3.
identity @ tri_and(R1, R1, R3) <=> R3 = R1.
neutral @ tri_and(r(fail, X), R2, R3) <=> R3 = R2.
neutral @ tri_and(R1, r(fail, X), R3) <=> R3 = R1.
absorb @ tri_and(r(true, fail), R2, R3) <=> R3 = r(true, fail).
absorb @ tri_and(R1, r(true, fail), R3) <=> R3 = r(true, fail).
default @ tri_and(r(true, true), r(D2, A2), R3) <=> R3 = r(true, or(not(D2), A2)).
default @ tri_and(r(D1, A1), r(true, true), R3) <=> R3 = r(true, or(not(D1), A1)).
definition @ tri_and(r(D1, A1), r(D2, A2), R3) <=> R3 = r(or(D1, D2), and(or(not(D1), A1), or(not(D2), A2))).
commutativity @ tri_or(R1, R2, R3) \\ tri_or(R2, R1, R4) <=> R4 = R3.
identity @ tri_or(R1, R1, R3) <=> R3 = R1.
neutral @ tri_or(r(fail, X), R2, R3) <=> R3 = R2.
neutral @ tri_or(R1, r(fail, X), R3) <=> R3 = R1.
absorb @ tri_or(r(true, true), R2, R3) <=> R3 = r(true, true).
absorb @ tri_or(R1, r(true, true), R3) <=> R3 = r(true, true).
default @ tri_or(r(true, fail), r(D2, A2), R3) <=> R3 = r(true, and(D2, A2)).
default @ tri_or(r(D1, A1), r(true, fail), R3) <=> R3 = r(true, and(D1, A1)).
definition @ tri_or(r(D1, A1), r(D2, A2), R3) <=> R3 = r(or(D1, D2), or(and(D1, A1), and(D2, A2))).
"""

_QUANTIFIERS = """
empty @ forallr(Set, Tr, R) <=> is_list(Set), Set == [] | R = r(fail, true).
for_each @ forallr(Set, Tr, R) <=> is_list(Set), Set \\== [] | Set = [X | Tail], call_tr(Tr, X, R1), tri_and(R1, R2, R), forallr(Tail, Tr, R2).
convert @ forallr(Set, Tr, R) <=> not_list(Set) | forallr(Set, Tr, R, []).
empty @ existsr(Set, Tr, R) <=> is_list(Set), Set == [] | R = r(fail, true).
for_each @ existsr(Set, Tr, R) <=> is_list(Set), Set \\== [] | Set = [X | Tail], call_tr(Tr, X, R1), tri_or(R1, R2, R), existsr(Tail, Tr, R2).
convert @ existsr(Set, Tr, R) <=> not_list(Set) | existsr(Set, Tr, R, []).
"""

_QUANTIFIERS_TIMED = """
empty @ forallr(Set, Tr, R)@T <=> is_list(Set), Set == [] | R = r(fail, true).
for_each @ forallr(Set, Tr, R)@T <=> is_list(Set), Set \\== [] | Set = [X | Tail], call_tr(Tr, X, R1), tri_and(R1, R2, R), forallr(Tail, Tr, R2)@T.
convert @ forallr(Set, Tr, R)@T <=> not_list(Set) | forallr(Set, Tr, R, [])@T.
empty @ existsr(Set, Tr, R)@T <=> is_list(Set), Set == [] | R = r(fail, true).
for_each @ existsr(Set, Tr, R)@T <=> is_list(Set), Set \\== [] | Set = [X | Tail], call_tr(Tr, X, R1), tri_or(R1, R2, R), existsr(Tail, Tr, R2)@T.
convert @ existsr(Set, Tr, R)@T <=> not_list(Set) | existsr(Set, Tr, R, [])@T.
insert @ in(X, Set) \\ forallr(Set, Tr, R, U) <=> not_member(X, U) | call_tr(Tr, X, R1), tri_and(R1, R2, R), forallr(Set, Tr, R2, [X | U]).
insert @ in(X, Set)@T \\ forallr(Set, Tr, R, U)@T <=> not_member(X, U) | call_tr(Tr, X, R1), tri_and(R1, R2, R), forallr(Set, Tr, R2, [X | U])@T.
insert @ in(X, Set) \\ forallr(Set, Tr, R, U)@T <=> not_member(X, U) | call_tr(Tr, X, R1), tri_and(R1, R2, R), forallr(Set, Tr, R2, [X | U])@T.
insert @ in(X, Set) \\ existsr(Set, Tr, R, U) <=> not_member(X, U) | call_tr(Tr, X, R1), tri_or(R1, R2, R), existsr(Set, Tr, R2, [X | U]).
insert @ in(X, Set)@T \\ existsr(Set, Tr, R, U)@T <=> not_member(X, U) | call_tr(Tr, X, R1), tri_or(R1, R2, R), existsr(Set, Tr, R2, [X | U])@T.
insert @ in(X, Set) \\ existsr(Set, Tr, R, U)@T <=> not_member(X, U) | call_tr(Tr, X, R1), tri_or(R1, R2, R), existsr(Set, Tr, R2, [X | U])@T.
no_more @ labeling \\ forallr(Set, Tr, R, U) <=> R = r(fail, true).
no_more @ labeling \\ forallr(Set, Tr, R, U)@T <=> R = r(fail, true).
no_more @ labeling \\ existsr(Set, Tr, R, U) <=> R = r(fail, true).
no_more @ labeling \\ existsr(Set, Tr, R, U)@T <=> R = r(fail, true).
"""


def build_logic_pack() -> HandlerPack:
    return HandlerPack("logic", parse_rules(_LOGIC), LOGIC_FUNCTORS | ORDER_FUNCTORS | SET_FUNCTORS)


def build_trilogic_pack() -> HandlerPack:
    rules = parse_rules(_TRI) + parse_rules(_QUANTIFIERS) + parse_rules(_QUANTIFIERS_TIMED)
    return HandlerPack("trilogic", rules, TRI_FUNCTORS)
