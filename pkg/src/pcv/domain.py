"""Finite domains: the universes a goal's events are drawn from.

A domain file is TOML::

    actors = ["alice", "bob"]
    actions = ["SendEmail", "Read"]
    targets = ["d1", "d2"]
    pars = [["alice", "carol"]]   # one universe per event parameter
    horizon = 3                   # event times are 1..horizon

    [sets]                        # set contents; "Policy.Set" wins over "Set"
    OrgUsers = ["alice", "bob"]

    [values]                      # value parameters of policies
    Limit = 2

    [data]                        # workflow data universes
    cost = [500, 1500]

Sets that are not listed stay symbolic.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass, field
from typing import Iterator

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .events import GroundEvent, Scalar


class DomainError(ValueError):
    """Malformed or empty domain specification."""


def _scalar(v, where: str) -> Scalar:
    if isinstance(v, bool) or not isinstance(v, (str, int)):
        raise DomainError(f"{where}: values must be strings or integers, got {v!r}")
    return v


def _universe(raw, where: str, allow_empty: bool = False) -> tuple:
    if not isinstance(raw, list):
        raise DomainError(f"{where} must be a list")
    if not raw and not allow_empty:
        raise DomainError(f"{where} must not be empty")
    out = []
    for v in raw:
        v = _scalar(v, where)
        if v not in out:
            out.append(v)
    return tuple(out)


@dataclass(frozen=True)
class DomainSpec:
    actors: tuple
    actions: tuple
    targets: tuple
    pars: tuple = ()
    horizon: int = 1
    sets: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("actors", "actions", "targets"):
            object.__setattr__(self, name, _universe(list(getattr(self, name)), name))
        object.__setattr__(self, "pars", tuple(_universe(list(p), f"pars[{i + 1}]") for i, p in enumerate(self.pars)))
        if isinstance(self.horizon, bool) or not isinstance(self.horizon, int) or self.horizon < 1:
            raise DomainError("horizon must be an integer of at least 1")
        object.__setattr__(self, "sets", {k: _universe(list(v), f"sets.{k}", True) for k, v in self.sets.items()})
        object.__setattr__(self, "values", {k: _scalar(v, f"values.{k}") for k, v in self.values.items()})
        object.__setattr__(self, "data", {k: _universe(list(v), f"data.{k}") for k, v in self.data.items()})

    @property
    def size(self) -> int:
        n = len(self.actors) * len(self.actions) * len(self.targets) * self.horizon
        for p in self.pars:
            n *= len(p)
        return n

    def events(self) -> Iterator[GroundEvent]:
        """The full event universe in declaration order (time varies fastest)."""
        for actor, action, target in itertools.product(self.actors, self.actions, self.targets):
            for pars in itertools.product(*self.pars):
                for t in range(1, self.horizon + 1):
                    yield GroundEvent(actor, action, target, tuple(pars), t)

    def set_contents(self, policy: str, name: str):
        """Members of a policy's set, or None when the domain leaves it symbolic."""
        for key in (f"{policy}.{name}", name):
            if key in self.sets:
                return self.sets[key]
        return None

    def value(self, policy: str, name: str):
        for key in (f"{policy}.{name}", name):
            if key in self.values:
                return self.values[key]
        return None


def load_domain_text(text: str) -> DomainSpec:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as err:
        raise DomainError(f"invalid TOML: {err}") from None
    known = {"actors", "actions", "targets", "pars", "horizon", "sets", "values", "data"}
    extra = sorted(set(raw) - known)
    if extra:
        raise DomainError(f"unknown domain keys: {', '.join(extra)}")
    for key in ("actors", "actions", "targets"):
        if key not in raw:
            raise DomainError(f"missing {key}")
    return DomainSpec(
        raw["actors"],
        raw["actions"],
        raw["targets"],
        raw.get("pars", []),
        raw.get("horizon", 1),
        raw.get("sets", {}),
        raw.get("values", {}),
        raw.get("data", {}),
    )


def load_domain(path) -> DomainSpec:
    with open(path, encoding="utf-8") as fh:
        return load_domain_text(fh.read())
