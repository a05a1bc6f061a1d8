"""Rule packs for order, equality, sets and cardinality."""

from .cardinality import build_cardinality_pack
from .order import build_order_equality_pack, rule_forms_program
from .pack import HandlerPack, merge, timed_expand
from .sets import build_set_pack


def build_kernel(timed: bool = True) -> HandlerPack:
    """All kernel packs in layer order."""
    return merge(
        "kernel",
        build_order_equality_pack(timed),
        build_set_pack(timed),
        build_cardinality_pack(),
    )


__all__ = [
    "HandlerPack", "merge", "timed_expand", "build_order_equality_pack", "rule_forms_program",
    "build_set_pack", "build_cardinality_pack", "build_kernel",
]
