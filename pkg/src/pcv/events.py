"""Ground events and the value order shared by the oracle and reports."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

Scalar = Union[str, int]


@dataclass(frozen=True)
class GroundEvent:
    actor: Scalar
    action: Scalar
    target: Scalar
    pars: tuple = ()
    time: int = 0

    def field(self, name: str, index: int = 0) -> Scalar:
        if name == "author":
            return self.actor
        if name == "par":
            if index < 1 or index > len(self.pars):
                raise IndexError(f"event has no par[{index}]")
            return self.pars[index - 1]
        return getattr(self, name)

    def as_dict(self) -> dict:
        return {
            "actor": self.actor,
            "action": self.action,
            "target": self.target,
            "pars": list(self.pars),
            "time": self.time,
        }


def order_key(v: Scalar) -> tuple:
    """Integers before strings, each in natural order (the engine's standard order)."""
    if isinstance(v, bool):
        raise TypeError("booleans are not event values")
    return (0, v, "") if isinstance(v, int) else (1, 0, v)
