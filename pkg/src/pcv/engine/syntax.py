"""Reader for the textual rule language.

The syntax is the dump format of ``RuleProgram.dump``::

    name @ kept1, kept2 \\ removed1 <=> guard1, guard2 | body1, (b2 ; b3).
    name @ h1, h2 ==> guard | body.

Terms are Prolog-flavoured: ``Upper`` and ``_`` are variables, ``lower``
and ``'quoted'`` are atoms, ``"text"`` is a string, ``[a, b | T]`` a list.
A constraint may carry a time qualifier written ``c(X)@T``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .terms import NIL, Atom, Compound, Int, Str, Term, Var, cons

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<arrow><=>|==>)
  | (?P<op>\\==|==|@=<|@<|\\|\|)
  | (?P<str>"(?:[^"\\]|\\.)*")
  | (?P<qatom>'(?:[^'\\]|\\.)*')
  | (?P<int>-?\d+)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<atom>[a-z$][A-Za-z0-9_]*)
  | (?P<punct>[()\[\],;=@.])
    """,
    re.VERBOSE,
)


class SyntaxError_(ValueError):
    """Malformed rule or term text."""


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SyntaxError_(f"unexpected character {text[pos]!r} at offset {pos}")
        kind = m.lastgroup
        if kind != "ws":
            out.append(_Tok(kind, m.group(), pos))
        pos = m.end()
    out.append(_Tok("eof", "", pos))
    return out


def _unescape(body: str) -> str:
    return re.sub(r"\\(.)", r"\1", body)


_INFIX_700 = {"=", "==", "\\==", "@<", "@=<"}


class _Reader:
    def __init__(self, text: str, varmap: dict | None = None):
        self.toks = _tokenize(text)
        self.i = 0
        self.vars: dict[str, Var] = {} if varmap is None else varmap

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self, text: str | None = None) -> _Tok:
        t = self.tok
        if text is not None and t.text != text:
            raise SyntaxError_(f"expected {text!r} but found {t.text!r} at offset {t.pos}")
        self.i += 1
        return t

    def at(self, *texts: str) -> bool:
        return self.tok.text in texts and self.tok.kind not in ("str", "qatom")

    # term levels: 1200 full, 1000 conj, 999 arg, 700 comparison
    def term(self, level: int = 1200) -> Term:
        left = self.comparison()
        while True:
            if self.at(",") and level >= 1000:
                self.take()
                right = self.term(1000)
                left = Compound(",", (left, right))
            elif self.at(";") and level >= 1100:
                self.take()
                right = self.term(1100)
                left = Compound(";", (left, right))
            else:
                return left

    def comparison(self) -> Term:
        left = self.qualified()
        if self.tok.kind in ("op", "punct") and self.tok.text in _INFIX_700:
            op = self.take().text
            right = self.qualified()
            return Compound(op, (left, right))
        return left

    def qualified(self) -> Term:
        t = self.primary()
        if self.at("@") and self.peek().kind in ("var", "int", "atom"):
            self.take()
            time = self.primary()
            return Compound("at", (t, time))
        return t

    def primary(self) -> Term:
        t = self.tok
        if t.kind == "var":
            self.take()
            if t.text == "_":
                return Var("_")
            if t.text not in self.vars:
                self.vars[t.text] = Var(t.text)
            return self.vars[t.text]
        if t.kind == "int":
            self.take()
            return Int(int(t.text))
        if t.kind == "str":
            self.take()
            return Str(_unescape(t.text[1:-1]))
        if t.kind in ("atom", "qatom"):
            self.take()
            name = t.text if t.kind == "atom" else _unescape(t.text[1:-1])
            if self.at("(") and self.tok.pos == t.pos + len(t.text):
                self.take("(")
                args = [self.term(999)]
                while self.at(","):
                    self.take()
                    args.append(self.term(999))
                self.take(")")
                return Compound(name, args)
            return Atom(name)
        if self.at("("):
            self.take()
            inner = self.term(1200)
            self.take(")")
            return inner
        if self.at("["):
            self.take()
            if self.at("]"):
                self.take()
                return NIL
            items = [self.term(999)]
            while self.at(","):
                self.take()
                items.append(self.term(999))
            tail: Term = NIL
            if self.at("|"):
                self.take()
                tail = self.term(999)
            self.take("]")
            result = tail
            for item in reversed(items):
                result = cons(item, result)
            return result
        raise SyntaxError_(f"unexpected token {t.text!r} at offset {t.pos}")


def conj_list(t: Term) -> list[Term]:
    if type(t) is Compound and t.functor == "," and len(t.args) == 2:
        return conj_list(t.args[0]) + conj_list(t.args[1])
    if t == Atom("true"):
        return []
    return [t]


def parse_term(text: str, varmap: dict | None = None) -> Term:
    r = _Reader(text, varmap)
    t = r.term()
    if r.at("."):
        r.take()
    if r.tok.kind != "eof":
        raise SyntaxError_(f"trailing input at offset {r.tok.pos}")
    return t


def parse_goal(text: str, varmap: dict | None = None) -> list[Term]:
    """Parse a comma-separated goal into a list of goal terms."""
    return conj_list(parse_term(text, varmap))


@dataclass
class RuleText:
    name: str
    kept: list[Term]
    removed: list[Term]
    guard: list[Term]
    body: list[Term]
    propagation: bool


def parse_rule_text(text: str) -> RuleText:
    r = _Reader(text)
    name = ""
    if r.tok.kind == "atom" and r.peek().text == "@":
        name = r.take().text
        r.take("@")
    first = [r.term(999)]
    while r.at(","):
        r.take()
        first.append(r.term(999))
    kept: list[Term] = []
    removed: list[Term] = []
    if r.at("\\"):
        r.take()
        kept = first
        removed = [r.term(999)]
        while r.at(","):
            r.take()
            removed.append(r.term(999))
        heads_removed = True
    else:
        heads_removed = False
    arrow = r.take()
    if arrow.kind != "arrow":
        raise SyntaxError_(f"expected <=> or ==> at offset {arrow.pos}")
    propagation = arrow.text == "==>"
    if not heads_removed:
        if propagation:
            kept = first
        else:
            removed = first
    part = r.term(1200)
    guard: list[Term] = []
    if r.at("|"):
        r.take()
        guard = conj_list(part)
        part = r.term(1200)
    body = conj_list(part)
    r.take(".")
    if r.tok.kind != "eof":
        raise SyntaxError_(f"trailing input after rule at offset {r.tok.pos}")
    return RuleText(name, kept, removed, guard, body, propagation)


def split_rules(text: str) -> list[str]:
    """Split a multi-rule source into single rule texts (one per terminating '.')."""
    chunks = []
    start = 0
    for tok in _tokenize(text):
        if tok.kind == "punct" and tok.text == ".":
            chunk = text[start : tok.pos + 1].strip()
            if chunk:
                chunks.append(chunk)
            start = tok.pos + 1
    rest = re.sub(r"%[^\n]*", "", text[start:]).strip()
    if rest:
        raise SyntaxError_(f"unterminated rule: {rest[:40]!r}")
    return chunks
