"""First-order terms shared by every layer of the verifier.

Terms are immutable. Variables carry a globally unique id and are compared
by identity; everything else compares structurally. Compound terms cache
their hash and whether they contain variables, so ground subterms (the
event universe, set literals) cost nothing to dereference or copy.
"""

from __future__ import annotations

import itertools
import re
from typing import Iterable, Iterator, Union

_ids = itertools.count(1)


class Var:
    __slots__ = ("name", "id")

    def __init__(self, name: str = "_", id: int | None = None):
        self.name = name
        self.id = next(_ids) if id is None else id

    def __repr__(self) -> str:
        return f"{self.name}_{self.id}" if self.name != "_" else f"_G{self.id}"


class Atom:
    __slots__ = ("name",)
    has_vars = False

    def __init__(self, name: str):
        self.name = name

    def __eq__(self, other) -> bool:
        return type(other) is Atom and other.name == self.name

    def __hash__(self) -> int:
        return hash(("atom", self.name))

    def __repr__(self) -> str:
        return self.name


class Int:
    __slots__ = ("value",)
    has_vars = False

    def __init__(self, value: int):
        self.value = value

    def __eq__(self, other) -> bool:
        return type(other) is Int and other.value == self.value

    def __hash__(self) -> int:
        return hash(("int", self.value))

    def __repr__(self) -> str:
        return str(self.value)


class Str:
    __slots__ = ("value",)
    has_vars = False

    def __init__(self, value: str):
        self.value = value

    def __eq__(self, other) -> bool:
        return type(other) is Str and other.value == self.value

    def __hash__(self) -> int:
        return hash(("str", self.value))

    def __repr__(self) -> str:
        return '"' + self.value.replace("\\", "\\\\").replace('"', '\\"') + '"'


class Compound:
    __slots__ = ("functor", "args", "has_vars", "_hash", "_members")

    def __init__(self, functor: str, args: Iterable["Term"]):
        self.functor = functor
        self.args = tuple(args)
        self.has_vars = any(type(a) is Var or (type(a) is Compound and a.has_vars) for a in self.args)
        self._hash = None
        self._members = None

    @property
    def arity(self) -> int:
        return len(self.args)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if type(other) is not Compound or other.functor != self.functor:
            return False
        if hash(self) != hash(other):
            return False
        return self.args == other.args

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.functor, tuple(_key(a) for a in self.args)))
        return self._hash

    def __repr__(self) -> str:
        return format_term(self)


Term = Union[Var, Atom, Int, Str, Compound]


def _key(t):
    # Vars compare by identity, so hash by id to stay consistent with __eq__.
    return ("var", t.id) if type(t) is Var else t


NIL = Atom("[]")
TRUE = Atom("true")
FAIL = Atom("fail")


def cons(head: Term, tail: Term) -> Compound:
    return Compound(".", (head, tail))


def make_list(items: Iterable[Term], tail: Term = NIL) -> Term:
    result = tail
    for item in reversed(list(items)):
        result = cons(item, result)
    return result


def is_ground_static(t: Term) -> bool:
    """Groundness ignoring bindings (true only for variable-free terms)."""
    return type(t) is not Var and not (type(t) is Compound and t.has_vars)


def term_vars(t: Term) -> Iterator[Var]:
    stack = [t]
    while stack:
        x = stack.pop()
        if type(x) is Var:
            yield x
        elif type(x) is Compound and x.has_vars:
            stack.extend(reversed(x.args))


def substitute(t: Term, mapping: dict) -> Term:
    """Replace variables (keyed by Var object) throughout ``t``."""
    if type(t) is Var:
        return mapping.get(t, t)
    if type(t) is Compound and t.has_vars:
        return Compound(t.functor, [substitute(a, mapping) for a in t.args])
    return t


def mk(value) -> Term:
    """Coerce a Python value into a term: str -> Str, int -> Int, list -> list term."""
    if isinstance(value, (Var, Atom, Int, Str, Compound)):
        return value
    if isinstance(value, bool):
        return TRUE if value else FAIL
    if isinstance(value, int):
        return Int(value)
    if isinstance(value, str):
        return Str(value)
    if isinstance(value, (list, tuple)):
        return make_list([mk(v) for v in value])
    raise TypeError(f"cannot convert {value!r} to a term")


def f(functor: str, *args) -> Compound:
    return Compound(functor, [mk(a) for a in args])


_INFIX = {"=", ";", ",", "==", "\\==", "@<", "@=<"}


_PLAIN_ATOM = re.compile(r"[a-z][A-Za-z0-9_]*\Z")


def _atom_text(name: str) -> str:
    if name == "[]" or _PLAIN_ATOM.match(name):
        return name
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"


def format_term(t: Term, names: dict | None = None) -> str:
    """Render a term in the rule-language syntax (parseable by ``parse_term``)."""
    if type(t) is Var:
        if names is not None:
            return names.setdefault(t, f"_V{len(names)}")
        return repr(t)
    if type(t) is Atom:
        return _atom_text(t.name)
    if type(t) in (Int, Str):
        return repr(t)
    if t.functor == "." and len(t.args) == 2:
        items = []
        cur = t
        while type(cur) is Compound and cur.functor == "." and len(cur.args) == 2:
            items.append(format_term(cur.args[0], names))
            cur = cur.args[1]
        body = ", ".join(items)
        if cur == NIL:
            return f"[{body}]"
        return f"[{body} | {format_term(cur, names)}]"
    if t.functor in _INFIX and len(t.args) == 2:
        left = format_term(t.args[0], names)
        right = format_term(t.args[1], names)
        if t.functor not in (",", ";"):
            return f"{left} {t.functor} {right}"
        return f"({left}{t.functor} {right})"
    if t.functor == "at" and len(t.args) == 2:
        inner = format_term(t.args[0], names)
        c = t.args[0]
        if type(c) is Compound and c.functor in _INFIX and len(c.args) == 2 and c.functor not in (",", ";"):
            inner = f"({inner})"
        return f"{inner}@{format_term(t.args[1], names)}"
    inner = ", ".join(format_term(a, names) for a in t.args)
    return f"{_atom_text(t.functor)}({inner})"
