"""Seeded generator of small policies, workflows and domains for cross-checking."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

ACTORS = ["ann", "bob", "cy", "dee"]
ACTIONS = ["read", "write", "send"]
TARGETS = ["doc", "memo", "log"]
RECIPIENTS = ["ann", "bob", "out"]


@dataclass
class Case:
    name: str
    policy_text: str
    domain_text: str
    target: str = ""
    workflow_text: str = ""
    meta: dict = field(default_factory=dict)


def _toml_list(items) -> str:
    return "[" + ", ".join(f'"{x}"' if isinstance(x, str) else str(x) for x in items) + "]"


class _PolicyGen:
    def __init__(self, rng: random.Random, name: str, with_pars: bool, all_defined: bool):
        self.rng = rng
        self.name = name
        self.with_pars = with_pars
        self.all_defined = all_defined
        self.users = rng.random() < 0.6
        self.docs = rng.random() < 0.6
        self.admins = rng.random() < 0.3
        self.limit = rng.random() < 0.4
        self.quantified: set[str] = set()

    def atom(self, bound: dict) -> str:
        r = self.rng
        options = [
            lambda: f'event.action = "{r.choice(ACTIONS + ["print"])}"',
            lambda: f'event.author != "{r.choice(ACTORS)}"',
            lambda: f"event.time {r.choice(['<', '<=', '>', '>='])} {r.randint(1, 3)}",
            lambda: f'event.target = "{r.choice(TARGETS)}"',
            lambda: r.choice(["true", "false"]),
        ]
        if self.users:
            options.append(lambda: "event.author IN Users")
            if self.with_pars:
                options.append(lambda: "event.par[1] IN Users")
        if self.docs:
            options.append(lambda: "event.target IN Docs")
            options.append(lambda: "event.target NOT IN Docs")
        if self.admins:
            options.append(lambda: "event.author IN Admins")
        if self.limit:
            options.append(lambda: "event.time < Limit")
        if self.with_pars:
            options.append(lambda: f'event.par[1] = "{r.choice(RECIPIENTS)}"')
        for var, kind in bound.items():
            if kind == "doc":
                options.append(lambda var=var: f"event.target = {var}")
            else:
                options.append(lambda var=var: f"event.author = {var}")
        return r.choice(options)()

    def bexpr(self, depth: int, bound: dict) -> str:
        r = self.rng
        roll = r.random()
        if depth <= 0 or roll < 0.5:
            return self.atom(bound)
        if roll < 0.7:
            return f"({self.bexpr(depth - 1, bound)} & {self.bexpr(depth - 1, bound)})"
        if roll < 0.9:
            return f"({self.bexpr(depth - 1, bound)} | {self.bexpr(depth - 1, bound)})"
        return f"!{self.atom(bound)}"

    def simple(self, bound: dict) -> str:
        return f"{self.bexpr(2, bound)} :: {self.bexpr(1, bound)}"

    def rexpr(self, depth: int, names: list[str], bound: dict) -> str:
        r = self.rng
        roll = r.random()
        if depth <= 0 or roll < 0.35:
            if names and r.random() < 0.5:
                return r.choice(names)
            return f"({self.simple(bound)})"
        if roll < 0.55:
            return f"({self.rexpr(depth - 1, names, bound)} AND {self.rexpr(depth - 1, names, bound)})"
        if roll < 0.75:
            return f"({self.rexpr(depth - 1, names, bound)} OR {self.rexpr(depth - 1, names, bound)})"
        if roll < 0.85:
            return f"NOT {self.rexpr(depth - 1, names, bound)}"
        sets = [s for s, ok in (("Docs", self.docs), ("Users", self.users)) if ok]
        if not sets or bound:
            return f"({self.simple(bound)})"
        s = r.choice(sets)
        self.quantified.add(s)
        q = r.choice(["FORALL", "EXISTS"])
        inner = {**bound, "x": "doc" if s == "Docs" else "user"}
        return f"{q} x IN {s} {{ {self.rexpr(depth - 1, [], inner)} }}"

    def text(self) -> str:
        params = []
        if self.users:
            params.append("user set Users")
        if self.limit:
            params.append("value Limit")
        lines = [f"policy {self.name}({', '.join(params)}) {{"]
        if self.docs:
            lines.append("    object set Docs;")
        if self.admins:
            lines.append("    global user set Admins;")
        names: list[str] = []
        for i in range(self.rng.randint(0, 2)):
            n = f"R{i}"
            lines.append(f"    {n}: {self.rexpr(1, [], {})};")
            names.append(n)
        lines.append(f"    ?Main: {self.rexpr(2, names, {})}")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def domain_sets(self) -> list[str]:
        r = self.rng
        out = []

        def maybe(name: str, pool: list):
            if self.all_defined or name in self.quantified or r.random() < 0.7:
                out.append(f"{name} = {_toml_list(sorted(r.sample(pool, r.randint(0, len(pool)))))}")

        if self.users:
            maybe("Users", ACTORS + ["out"])
        if self.docs:
            maybe("Docs", TARGETS)
        if self.admins:
            maybe("Admins", ACTORS)
        return out


def _domain(rng: random.Random, sets: list[str], with_pars: bool, limit: bool, data: bool = False,
            participants: dict | None = None) -> str:
    actors = ACTORS[: rng.randint(2, 4)] if participants is None else ACTORS
    lines = [
        f"actors = {_toml_list(actors)}",
        f"actions = {_toml_list(ACTIONS[: rng.randint(1, 3)] if participants is None else ACTIONS)}",
        f"targets = {_toml_list(TARGETS[: rng.randint(1, 3)] if participants is None else TARGETS)}",
        f"horizon = {rng.randint(1, 3) if participants is None else 3}",
    ]
    if with_pars:
        lines.append(f"pars = [{_toml_list(rng.sample(RECIPIENTS, 2))}]")
    lines.append("[sets]")
    lines.extend(sets)
    for name, members in (participants or {}).items():
        lines.append(f"{name} = {_toml_list(members)}")
    if limit:
        lines.append("[values]")
        lines.append(f"Limit = {rng.randint(1, 3)}")
    if data:
        lines.append("[data]")
        lines.append("cost = [500, 1500]")
    return "\n".join(lines) + "\n"


def policy_cases(n: int, seed: int = 7) -> list[Case]:
    rng = random.Random(seed)
    out = []
    for i in range(n):
        with_pars = rng.random() < 0.4
        g = _PolicyGen(rng, f"Gen{i}", with_pars, all_defined=False)
        text = g.text()
        domain = _domain(rng, g.domain_sets(), with_pars, g.limit)
        out.append(Case(f"policy-{i}", text, domain))
    return out


def workflow_text(rng: random.Random, name: str) -> str:
    n = rng.randint(2, 4)
    acts = [f"a{i}" for i in range(n)]
    lines = [f"workflow {name} {{", "    participant Staff role;", "    participant Lead role;", "    data cost;"]
    incoming: dict[str, list[str]] = {a: [] for a in acts}
    transitions = []
    for i in range(1, n):
        sources = rng.sample(acts[:i], min(i, rng.randint(1, 2)))
        for s in sources:
            t = f"t{len(transitions)}"
            transitions.append((t, s, acts[i]))
            incoming[acts[i]].append(t)
    outgoing: dict[str, list[str]] = {a: [t for t, s, _ in transitions if s == a] for a in acts}
    for a in acts:
        attrs = [
            f"performer {rng.choice(['Staff', 'Lead'])}",
            f'action "{rng.choice(ACTIONS)}"',
            f'target "{rng.choice(TARGETS)}"',
        ]
        if len(incoming[a]) > 1:
            attrs.append(f"join {rng.choice(['AND', 'XOR'])}")
        if len(outgoing[a]) > 1:
            if rng.random() < 0.5:
                order = list(outgoing[a])
                rng.shuffle(order)
                attrs.append(f"split XOR({', '.join(order)})")
            else:
                attrs.append("split AND")
        lines.append(f"    activity {a} atomic {' '.join(attrs)};")
    for t, s, d in transitions:
        cond = rng.choice(["", "", " when cost < 1000", " when cost >= 1000", " when !(cost < 600)"])
        lines.append(f"    transition {t} from {s} to {d}{cond};")
    sinks = [a for a in acts if not outgoing[a]]
    lines.append(f"    start {acts[0]};")
    lines.append(f"    end {', '.join(sinks)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def workflow_cases(n: int, seed: int = 11) -> list[Case]:
    rng = random.Random(seed)
    out = []
    for i in range(n):
        g = _PolicyGen(rng, f"Wp{i}", False, all_defined=True)
        text = g.text()
        participants = {
            "Staff": sorted(rng.sample(ACTORS, rng.randint(1, 3))),
            "Lead": sorted(rng.sample(ACTORS, rng.randint(1, 2))),
        }
        domain = _domain(rng, g.domain_sets(), False, g.limit, data=True, participants=participants)
        out.append(Case(f"workflow-{i}", text, domain, workflow_text=workflow_text(rng, f"Flow{i}")))
    return out


def kernel_goal(rng: random.Random) -> str:
    """A random kernel-only goal over at most 7 scalars, 4 sets and one time variable."""
    xs = [f"X{i}" for i in range(rng.randint(2, 7))]
    ss = [f"S{i}" for i in range(rng.randint(0, 4))]
    consts = ["1", "2", "3", "a"]

    def val():
        return rng.choice(consts) if rng.random() < 0.25 else rng.choice(xs)

    def set_term():
        if ss and rng.random() < 0.7:
            return rng.choice(ss)
        return "[" + ", ".join(rng.sample(consts, rng.randint(0, 3))) + "]"

    ops = ["leq", "lt", "neq", "eq", "geq", "gt", "in", "notin"] + (["meet", "union", "card"] if ss else [])
    out = []
    for _ in range(rng.randint(2, 14)):
        op = rng.choice(ops)
        if op in ("in", "notin"):
            c = f"{op}({val()}, {set_term()})"
        elif op in ("meet", "union"):
            c = f"{op}({rng.choice(ss)}, {set_term()}, {set_term()})"
        elif op == "card":
            c = f"card({rng.choice(xs + ['0', '1', '2'])}, {set_term()})"
        else:
            c = f"{op}({val()}, {val()})"
        if op not in ("meet", "union", "card") and rng.random() < 0.2:
            c += f"@{rng.choice(['T', '1', '2'])}"
        out.append(c)
    return ", ".join(out)
