"""Recursive-descent reader for the policy language.

::

    policy Private(user set OrgUsers) {
        object set IDocs;
        ?Private: event.action = "SendEmail" & event.target IN IDocs
                  :: event.par[1] IN OrgUsers
    }

Rule-level operators are the keywords AND, OR, NOT, FORALL x IN S {..}
and EXIST x IN S {..}; a bare rule name refers to another rule. Boolean
operators inside a simple rule are ``&``, ``|`` and ``!``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import (
    And, BAnd, BConst, BNot, BOr, Cmp, CyclicRule, DuplicateRule, EventProp, Exists, ForAll,
    InSet, Lit, MissingQueryRule, Name, Not, Or, RuleRef, SetDecl, Simple, SplError,
    SplPolicyModel, SplSyntaxError, UnboundSet, UnknownRule,
)

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|//[^\n]*)
  | (?P<str>"(?:[^"\\\n]|\\.)*")
  | (?P<int>\d+)
  | (?P<op>::|<=|>=|!=|[=<>&|!(){}\[\],;:?.\-])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)

KEYWORDS = {"policy", "set", "user", "object", "value", "global", "IN", "AND", "OR", "NOT", "FORALL", "EXIST", "EXISTS"}
FIELD_ALIASES = {"author": "author", "actor": "author", "action": "action", "target": "target", "par": "par", "time": "time"}


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    out = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SplSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Tok(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    out.append(Tok("eof", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.furthest: SplSyntaxError | None = None

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def error(self, message: str, tok: Tok | None = None) -> SplSyntaxError:
        tok = tok or self.tok
        err = SplSyntaxError(message, tok.line, tok.col)
        err.index = self.i
        return err

    def is_(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "ident")

    def accept(self, text: str) -> bool:
        if self.is_(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Tok:
        if not self.is_(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        t = self.tok
        self.i += 1
        return t

    def ident(self, what: str = "a name") -> Tok:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            raise self.error(f"expected {what}, found {t.text or 'end of input'!r}")
        self.i += 1
        return t

    # ---- policy structure ------------------------------------------------------------

    def policies(self) -> list[tuple[SplPolicyModel, dict]]:
        out = []
        while self.tok.kind != "eof":
            out.append(self.policy())
        return out

    def policy(self) -> tuple[SplPolicyModel, dict]:
        self.expect("policy")
        name_tok = self.ident("a policy name")
        model = SplPolicyModel(name_tok.text)
        where: dict = {"policy": name_tok}
        self.expect("(")
        if not self.is_(")"):
            while True:
                self.param(model)
                if not self.accept(","):
                    break
        self.expect(")")
        self.expect("{")
        queries = []
        while not self.is_("}"):
            if self.tok.kind == "eof":
                raise self.error("missing '}' at end of policy")
            if self.is_("global") or self.is_("set") or self.is_("user") or self.is_("object"):
                self.set_decl(model)
                continue
            query = self.accept("?")
            name = self.ident("a rule name")
            self.expect(":")
            if name.text in model.rules:
                raise DuplicateRule(f"duplicate rule {name.text}", name.line, name.col)
            expr = self.rule_expr()
            self.accept(";")
            model.rules[name.text] = expr
            where[name.text] = name
            if query:
                queries.append(name)
        self.expect("}")
        if not queries:
            raise MissingQueryRule(f"policy {model.name} has no query rule", name_tok.line, name_tok.col)
        if len(queries) > 1:
            q = queries[1]
            raise SplSyntaxError(f"policy {model.name} has more than one query rule", q.line, q.col)
        model.query = queries[0].text
        return model, where

    def param(self, model: SplPolicyModel) -> None:
        if self.accept("value"):
            t = self.ident("a parameter name")
            model.parameters.append((t.text, "value"))
            return
        sort = "any"
        if self.is_("user") or self.is_("object"):
            sort = self.tok.text
            self.i += 1
        self.expect("set")
        t = self.ident("a set name")
        model.parameters.append((t.text, f"{sort}-set"))
        model.sets.append(SetDecl(t.text, sort, "param"))

    def set_decl(self, model: SplPolicyModel) -> None:
        scope = "global" if self.accept("global") else "internal"
        sort = "any"
        if self.is_("user") or self.is_("object"):
            sort = self.tok.text
            self.i += 1
        self.expect("set")
        while True:
            t = self.ident("a set name")
            if model.set_decl(t.text):
                raise SplSyntaxError(f"set {t.text} declared twice", t.line, t.col)
            model.sets.append(SetDecl(t.text, sort, scope))
            if not self.accept(","):
                break
        self.expect(";")

    # ---- rule expressions -------------------------------------------------------------

    def rule_expr(self):
        left = self.rule_and()
        while self.accept("OR"):
            left = Or(left, self.rule_and())
        return left

    def rule_and(self):
        left = self.rule_unary()
        while self.accept("AND"):
            left = And(left, self.rule_unary())
        return left

    def rule_unary(self):
        if self.accept("NOT"):
            return Not(self.rule_unary())
        if self.is_("FORALL") or self.is_("EXIST") or self.is_("EXISTS"):
            kind = self.tok.text
            self.i += 1
            var = self.ident("a quantified variable").text
            self.expect("IN")
            set_name = self.ident("a set name").text
            self.expect("{")
            body = self.rule_expr()
            self.expect("}")
            return ForAll(var, set_name, body) if kind == "FORALL" else Exists(var, set_name, body)
        start = self.i
        try:
            domain = self.bool_expr()
            failure = None if self.is_("::") else self.error("expected '::' after the applicability expression")
        except SplSyntaxError as err:
            failure = err
        if failure is None:
            # past '::' the simple-rule reading is the only one left
            self.i += 1
            return Simple(domain, self.bool_expr())
        self._note(failure)
        self.i = start
        if self.accept("("):
            inner = self.rule_expr()
            self.expect(")")
            return inner
        t = self.tok
        if t.kind == "ident" and t.text not in KEYWORDS | {"true", "false"} and self.toks[self.i + 1].text not in (".", "["):
            self.i += 1
            if not (self.is_("=") or self.is_("IN") or self.is_("!=") or self.is_("<") or self.is_("<=")
                    or self.is_(">") or self.is_(">=")):
                return RuleRef(t.text)
            self.i -= 1
        raise self.furthest

    def _note(self, err: SplSyntaxError) -> None:
        if self.furthest is None or getattr(err, "index", 0) >= getattr(self.furthest, "index", 0):
            self.furthest = err

    # ---- boolean expressions ------------------------------------------------------------

    def bool_expr(self):
        left = self.bool_and()
        while self.accept("|"):
            left = BOr(left, self.bool_and())
        return left

    def bool_and(self):
        left = self.bool_not()
        while self.accept("&"):
            left = BAnd(left, self.bool_not())
        return left

    def bool_not(self):
        if self.accept("!"):
            return BNot(self.bool_not())
        return self.bool_atom()

    def bool_atom(self):
        if self.accept("true"):
            return BConst(True)
        if self.accept("false"):
            return BConst(False)
        if self.accept("("):
            inner = self.bool_expr()
            self.expect(")")
            return inner
        left = self.value()
        if self.accept("IN"):
            return InSet(left, self.ident("a set name").text)
        if self.is_("NOT") and self.toks[self.i + 1].text == "IN":
            self.i += 2
            return BNot(InSet(left, self.ident("a set name").text))
        for op in ("=", "!=", "<=", ">=", "<", ">"):
            if self.accept(op):
                return Cmp(op, left, self.value())
        raise self.error("expected a comparison or IN")

    def value(self):
        t = self.tok
        if t.kind == "str":
            self.i += 1
            return Lit(re.sub(r"\\(.)", r"\1", t.text[1:-1]))
        if t.kind == "int":
            self.i += 1
            return Lit(int(t.text))
        if self.is_("-") and self.toks[self.i + 1].kind == "int":
            self.i += 2
            return Lit(-int(self.toks[self.i - 1].text))
        if self.accept("event"):
            self.expect(".")
            ft = self.ident("an event property")
            field = FIELD_ALIASES.get(ft.text)
            if field is None:
                raise self.error(f"unknown event property {ft.text}", ft)
            if field == "par":
                self.expect("[")
                it = self.tok
                if it.kind != "int" or int(it.text) < 1:
                    raise self.error("par index must be a positive integer")
                self.i += 1
                self.expect("]")
                return EventProp("par", int(it.text))
            return EventProp(field)
        if t.kind == "ident" and t.text not in KEYWORDS and t.text not in ("true", "false"):
            self.i += 1
            return Name(t.text)
        raise self.error(f"expected a value, found {t.text or 'end of input'!r}")


def _check(model: SplPolicyModel, where: dict) -> None:
    sets = set(model.set_names)
    values = set(model.value_params)
    pos = where.get("policy")

    def loc(rule_name):
        t = where.get(rule_name, pos)
        return (t.line, t.col) if t else (0, 0)

    def check_value(v, scope, rule_name):
        if isinstance(v, Name) and v.name not in scope and v.name not in values:
            raise SplError(f"unbound name {v.name} in rule {rule_name}", *loc(rule_name))

    def check_bool(b, scope, rule_name):
        if isinstance(b, Cmp):
            check_value(b.left, scope, rule_name)
            check_value(b.right, scope, rule_name)
        elif isinstance(b, InSet):
            check_value(b.value, scope, rule_name)
            if b.set_name not in sets:
                raise UnboundSet(f"unbound set {b.set_name} in rule {rule_name}", *loc(rule_name))
        elif isinstance(b, (BAnd, BOr)):
            check_bool(b.left, scope, rule_name)
            check_bool(b.right, scope, rule_name)
        elif isinstance(b, BNot):
            check_bool(b.expr, scope, rule_name)

    def check_rule(e, scope, rule_name):
        if isinstance(e, Simple):
            check_bool(e.domain, scope, rule_name)
            check_bool(e.accept, scope, rule_name)
        elif isinstance(e, (And, Or)):
            check_rule(e.left, scope, rule_name)
            check_rule(e.right, scope, rule_name)
        elif isinstance(e, Not):
            check_rule(e.expr, scope, rule_name)
        elif isinstance(e, (ForAll, Exists)):
            if e.set_name not in sets:
                raise UnboundSet(f"unbound set {e.set_name} in rule {rule_name}", *loc(rule_name))
            check_rule(e.body, scope | {e.var}, rule_name)
        elif isinstance(e, RuleRef):
            if e.name not in model.rules:
                raise UnknownRule(f"rule {rule_name} refers to unknown rule {e.name}", *loc(rule_name))

    for name, expr in model.rules.items():
        check_rule(expr, frozenset(), name)
    for name in model.rules:
        try:
            model.resolve(RuleRef(name))
        except CyclicRule as err:
            raise CyclicRule(str(err), *loc(name)) from None


def parse_policies(text: str) -> list[SplPolicyModel]:
    out = []
    for model, where in _Parser(text).policies():
        _check(model, where)
        out.append(model)
    return out


def parse_spl(text: str) -> SplPolicyModel:
    """Parse exactly one policy."""
    models = parse_policies(text)
    if len(models) != 1:
        raise SplSyntaxError(f"expected one policy, found {len(models)}", 1, 1)
    return models[0]
