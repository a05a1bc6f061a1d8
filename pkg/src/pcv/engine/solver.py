"""Committed-choice execution of rule programs.

Execution follows the refined operational semantics: each added (or woken)
constraint becomes the active constraint and tries its rule occurrences in
textual order; the body of a fired rule runs before the active constraint
resumes. When nothing is left to do the distinguished ``labeling``
constraint is added once, which enables the rules delayed behind it.

Body disjunctions are the only choice points. All destructive updates
(bindings, constraint additions and removals, propagation history) are
trailed so a choice point can restore the store exactly.
"""

from __future__ import annotations

import time as _time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .rules import BODY_BUILTINS, LABELING, ChrRule, ProgramError, RuleProgram
from .syntax import parse_goal
from .terms import FAIL, NIL, TRUE, Atom, Compound, Int, Str, Term, Var, format_term

DEFAULT_BUDGET = 1_000_000

SATISFIABLE = "satisfiable"
UNSATISFIABLE = "unsatisfiable"
BUDGET_EXHAUSTED = "budget_exhausted"


class BudgetExhausted(Exception):
    """The step budget reached zero before a verdict was found."""


class Constraint:
    __slots__ = ("id", "functor", "args", "time", "alive", "key")

    def __init__(self, cid: int, functor: str, args: tuple, time: Term | None):
        self.id = cid
        self.functor = functor
        self.args = args
        self.time = time
        self.alive = True
        self.key = (functor, len(args), time is not None)

    def term(self) -> Term:
        base = Compound(self.functor, self.args) if self.args else Atom(self.functor)
        return base if self.time is None else Compound("at", (base, self.time))

    def __repr__(self) -> str:
        return f"#{self.id}:{format_term(self.term())}"


@dataclass
class Mark:
    trail_len: int
    serial: int


class ConstraintStore:
    """Live constraints, bindings, propagation history and the trail."""

    def __init__(self, program: RuleProgram):
        self.program = program
        self.constraints: dict[int, Constraint] = {}
        self.buckets: dict[tuple, list[Constraint]] = {}
        self.bindings: dict[Var, Term] = {}
        self.history: set[tuple] = set()
        self.trail: list[tuple] = []
        self.watch: dict[Var, set[int]] = {}
        self.failed = False
        self._next_id = 1
        self._marks: list[int] = []
        self._mark_serial = 0
        self.newly_bound: list[Var] = []

    @property
    def status(self) -> str:
        return "failed" if self.failed else "active"

    # ---- terms under bindings -------------------------------------------------

    def deref(self, t: Term) -> Term:
        b = self.bindings
        while type(t) is Var and t in b:
            t = b[t]
        return t

    def resolve(self, t: Term) -> Term:
        t = self.deref(t)
        if type(t) is Compound and t.has_vars:
            args = [self.resolve(a) for a in t.args]
            if all(x is y for x, y in zip(args, t.args)):
                return t
            return Compound(t.functor, args)
        return t

    def is_ground(self, t: Term) -> bool:
        t = self.deref(t)
        if type(t) is Var:
            return False
        if type(t) is Compound and t.has_vars:
            return all(self.is_ground(a) for a in t.args)
        return True

    def vars_of(self, t: Term, out: set) -> None:
        t = self.deref(t)
        if type(t) is Var:
            out.add(t)
        elif type(t) is Compound and t.has_vars:
            for a in t.args:
                self.vars_of(a, out)

    def identical(self, a: Term, b: Term) -> bool:
        a = self.deref(a)
        b = self.deref(b)
        if a is b:
            return True
        ta = type(a)
        if ta is not type(b):
            return False
        if ta is Var:
            return False
        if ta is Compound:
            if a.functor != b.functor or len(a.args) != len(b.args):
                return False
            if not a.has_vars and not b.has_vars:
                return a == b
            return all(self.identical(x, y) for x, y in zip(a.args, b.args))
        return a == b

    def list_items(self, t: Term) -> list[Term] | None:
        """Elements of a proper list, or None when ``t`` is not one."""
        t = self.deref(t)
        if type(t) is Compound and not t.has_vars and t.functor == ".":
            if t._members is None:
                items = []
                cur = t
                while type(cur) is Compound and cur.functor == "." and len(cur.args) == 2:
                    items.append(cur.args[0])
                    cur = cur.args[1]
                t._members = (items, frozenset(items)) if cur == NIL else False
            return None if t._members is False else t._members[0]
        items = []
        while type(t) is Compound and t.functor == "." and len(t.args) == 2:
            items.append(t.args[0])
            t = self.deref(t.args[1])
        return items if t == NIL else None

    def in_list(self, x: Term, lst: Term) -> bool | None:
        lst = self.deref(lst)
        items = self.list_items(lst)
        if items is None:
            return None
        if type(lst) is Compound and lst._members and self.is_ground(x):
            return self.resolve(x) in lst._members[1]
        return any(self.identical(x, i) for i in items)

    # ---- unification ----------------------------------------------------------

    def bind(self, v: Var, t: Term) -> None:
        self.bindings[v] = t
        self.trail.append(("bind", v))
        self.newly_bound.append(v)

    def occurs(self, v: Var, t: Term) -> bool:
        t = self.deref(t)
        if t is v:
            return True
        if type(t) is Compound and t.has_vars:
            return any(self.occurs(v, a) for a in t.args)
        return False

    def unify(self, a: Term, b: Term) -> bool:
        """Unify with occurs-check. On clash the partial bindings stay on the trail."""
        stack = [(a, b)]
        while stack:
            x, y = stack.pop()
            x = self.deref(x)
            y = self.deref(y)
            if x is y:
                continue
            tx, ty = type(x), type(y)
            if tx is Var and ty is Var:
                if x.id < y.id:
                    x, y = y, x
                self.bind(x, y)
            elif tx is Var:
                if self.occurs(x, y):
                    return False
                self.bind(x, y)
            elif ty is Var:
                if self.occurs(y, x):
                    return False
                self.bind(y, x)
            elif tx is Compound and ty is Compound:
                if x.functor != y.functor or len(x.args) != len(y.args):
                    return False
                if not x.has_vars and not y.has_vars:
                    if x != y:
                        return False
                    continue
                stack.extend(zip(reversed(x.args), reversed(y.args)))
            elif x != y:
                return False
        return True

    # ---- constraints ----------------------------------------------------------

    def find_identical(self, functor: str, args: tuple, time: Term | None, exclude: int = 0) -> Constraint | None:
        key = (functor, len(args), time is not None)
        for c in self.buckets.get(key, ()):
            if not c.alive or c.id == exclude:
                continue
            if time is not None and not self.identical(c.time, time):
                continue
            if all(self.identical(x, y) for x, y in zip(c.args, args)):
                return c
            if functor in self.program.symmetric and len(args) == 2:
                if self.identical(c.args[0], args[1]) and self.identical(c.args[1], args[0]):
                    return c
        return None

    def add(self, functor: str, args: tuple, time: Term | None) -> Constraint:
        c = Constraint(self._next_id, functor, args, time)
        self._next_id += 1
        self.constraints[c.id] = c
        self.buckets.setdefault(c.key, []).append(c)
        self.trail.append(("add", c))
        self.register(c)
        return c

    def register(self, c: Constraint) -> None:
        vs: set = set()
        for a in c.args:
            self.vars_of(a, vs)
        if c.time is not None:
            self.vars_of(c.time, vs)
        for v in vs:
            self.watch.setdefault(v, set()).add(c.id)

    def kill(self, c: Constraint) -> None:
        c.alive = False
        self.trail.append(("kill", c))

    def record(self, key: tuple) -> None:
        self.history.add(key)
        self.trail.append(("hist", key))

    def alive(self) -> list[Constraint]:
        return [c for c in self.constraints.values() if c.alive]

    def undo_to(self, n: int) -> None:
        trail = self.trail
        while len(trail) > n:
            op, x = trail.pop()
            if op == "bind":
                del self.bindings[x]
            elif op == "add":
                x.alive = False
                bucket = self.buckets[x.key]
                bucket.pop()
                del self.constraints[x.id]
            elif op == "kill":
                x.alive = True
            else:
                self.history.discard(x)
        self.failed = False

    # ---- snapshots --------------------------------------------------------------

    def snapshot(self) -> Mark:
        self._mark_serial += 1
        self._marks.append(self._mark_serial)
        return Mark(len(self.trail), self._mark_serial)

    def backtrack(self, mark: Mark) -> None:
        if mark.serial not in self._marks:
            raise ProgramError("stale snapshot mark")
        while self._marks[-1] != mark.serial:
            self._marks.pop()
        self._marks.pop()
        self.undo_to(mark.trail_len)

    # ---- reporting ------------------------------------------------------------

    def residual(self) -> list[Term]:
        return [self.resolve(c.term()) for c in self.alive() if c.functor != LABELING]

    def canonical(self) -> list[str]:
        """Residual constraints rendered with canonical variable names, sorted."""
        names: dict = {}
        rendered = [format_term(t, names) for t in self.residual()]
        return sorted(rendered)


# ---- standard order of terms --------------------------------------------------

def _order_class(t: Term) -> int:
    tt = type(t)
    if tt is Var:
        return 0
    if tt is Int:
        return 1
    if tt is Atom:
        return 2
    if tt is Str:
        return 3
    return 4


def compare_terms(a: Term, b: Term) -> int:
    ca, cb = _order_class(a), _order_class(b)
    if ca != cb:
        return -1 if ca < cb else 1
    if ca == 0:
        return (a.id > b.id) - (a.id < b.id)
    if ca == 1:
        return (a.value > b.value) - (a.value < b.value)
    if ca == 2:
        return (a.name > b.name) - (a.name < b.name)
    if ca == 3:
        return (a.value > b.value) - (a.value < b.value)
    ka = (len(a.args), a.functor)
    kb = (len(b.args), b.functor)
    if ka != kb:
        return -1 if ka < kb else 1
    for x, y in zip(a.args, b.args):
        r = compare_terms(x, y)
        if r:
            return r
    return 0


# ---- search -----------------------------------------------------------------------

@dataclass
class ChoicePoint:
    trail_len: int
    agenda: tuple | None
    branches: list
    next_branch: int
    labeling_active: bool


@dataclass
class Stats:
    firings: int = 0
    choice_points: int = 0
    backtracks: int = 0
    elapsed: float = 0.0


@dataclass
class SolveResult:
    status: str
    bindings: dict = field(default_factory=dict)
    residual: list = field(default_factory=list)
    stats: Stats = field(default_factory=Stats)
    state: "SearchState | None" = None

    @property
    def satisfiable(self) -> bool:
        return self.status == SATISFIABLE


class SearchState:
    """A store plus the agenda, choice points and step budget of one solve."""

    def __init__(self, program: RuleProgram, budget: int = DEFAULT_BUDGET):
        if budget < 0:
            raise ProgramError("budget must be non-negative")
        self.program = program
        self.store = ConstraintStore(program)
        self.budget = budget
        self.choice_points: list[ChoicePoint] = []
        self.labeling_active = False
        self.agenda: tuple | None = None
        self.stats = Stats()

    # ---- public helpers -----------------------------------------------------------

    def unify(self, a: Term, b: Term) -> bool:
        mark = len(self.store.trail)
        if self.store.unify(a, b):
            return True
        self.store.undo_to(mark)
        return False

    def snapshot(self) -> Mark:
        return self.store.snapshot()

    def backtrack(self, mark: Mark) -> None:
        self.store.backtrack(mark)

    # ---- matching ---------------------------------------------------------------------

    def _match(self, pat: Term, t: Term, s: dict, added: list) -> bool:
        tp = type(pat)
        if tp is Var:
            if pat in s:
                return self.store.identical(s[pat], t)
            s[pat] = t
            added.append(pat)
            return True
        t = self.store.deref(t)
        if tp is Compound:
            if type(t) is not Compound or t.functor != pat.functor or len(t.args) != len(pat.args):
                return False
            if not pat.has_vars:
                return self.store.identical(pat, t)
            for pa, ta in zip(pat.args, t.args):
                if not self._match(pa, ta, s, added):
                    return False
            return True
        return pat == t

    def _match_head(self, head, c: Constraint, s: dict, added: list) -> bool:
        if head.time is not None:
            if not self._match(head.time, c.time, s, added):
                return False
        for pa, ta in zip(head.args, c.args):
            if not self._match(pa, ta, s, added):
                return False
        return True

    def match_heads(self, rule: ChrRule) -> list[dict]:
        """All injective head assignments of ``rule`` over live constraints.

        Returns dicts with ``constraints`` (one per head, head order) and
        ``subst``. Propagation matches already in the history are excluded.
        """
        ri = self._rule_index(rule)
        out = []
        heads = rule.heads

        def rec(i, chosen, s):
            if i == len(heads):
                ids = tuple(c.id for c in chosen)
                if rule.kind == "propagation" and (ri, ids) in self.store.history:
                    return
                out.append({"constraints": list(chosen), "subst": dict(s)})
                return
            for c in self.store.buckets.get(heads[i].key, ()):
                if not c.alive or c in chosen:
                    continue
                added: list = []
                if self._match_head(heads[i], c, s, added):
                    chosen.append(c)
                    rec(i + 1, chosen, s)
                    chosen.pop()
                for v in added:
                    del s[v]

        rec(0, [], {})
        return out

    def _rule_index(self, rule: ChrRule) -> int:
        for i, r in enumerate(self.program.rules):
            if r is rule:
                return i
        raise ProgramError(f"rule {rule.name!r} is not part of the loaded program")

    # ---- guards -------------------------------------------------------------------------

    def check_guard(self, guard: Sequence[Term], subst: dict) -> bool:
        """Entailment check; never binds store variables."""
        for g in guard:
            if not self._guard(_subst(g, subst)):
                return False
        return True

    def _guard(self, g: Term) -> bool:
        st = self.store
        if type(g) is Atom:
            if g.name == "true":
                return True
            raise ProgramError(f"unknown guard built-in {g.name!r}")
        if type(g) is not Compound:
            raise ProgramError(f"guard {g!r} is not a built-in test")
        name, args = g.functor, g.args
        if name == ",":
            return self._guard(args[0]) and self._guard(args[1])
        if name == "ground":
            return st.is_ground(args[0])
        if name == "nonground":
            return not st.is_ground(args[0])
        if name == "var":
            return type(st.deref(args[0])) is Var
        if name == "nonvar":
            return type(st.deref(args[0])) is not Var
        if name == "integer":
            return type(st.deref(args[0])) is Int
        if name == "is_list":
            return st.list_items(args[0]) is not None
        if name == "not_list":
            return st.list_items(args[0]) is None
        if name == "==":
            return st.identical(args[0], args[1])
        if name in ("\\==", "neq"):
            return not st.identical(args[0], args[1])
        if name in ("@<", "@=<"):
            if not (st.is_ground(args[0]) and st.is_ground(args[1])):
                return False
            r = compare_terms(st.resolve(args[0]), st.resolve(args[1]))
            return r < 0 if name == "@<" else r <= 0
        if name == "member":
            return bool(st.in_list(args[0], args[1]))
        if name == "not_member":
            r = st.in_list(args[0], args[1])
            return r is False
        if name == "callable_goal":
            t = st.deref(args[0])
            if type(t) is Var:
                return False
            if type(t) is Compound and t.functor == "at" and len(t.args) == 2:
                return type(st.deref(t.args[0])) is not Var
            return True
        raise ProgramError(f"unknown guard built-in {name!r}")

    # ---- firing -------------------------------------------------------------------------

    def fire(self, rule: ChrRule, match: dict) -> None:
        """Apply ``rule`` to a match from ``match_heads`` and run to quiescence."""
        ri = self._rule_index(rule)
        if not self.check_guard(rule.guard, match["subst"]):
            raise ProgramError("guard not entailed for this match")
        self._fire(ri, rule, match["constraints"], match["subst"])
        self._run_agenda_once()

    def _fire(self, ri: int, rule: ChrRule, chosen: Sequence[Constraint], s: dict) -> None:
        if self.budget <= 0:
            raise BudgetExhausted()
        self.budget -= 1
        self.stats.firings += 1
        st = self.store
        if rule.kind == "propagation":
            st.record((ri, tuple(c.id for c in chosen)))
        nk = len(rule.kept)
        for c in chosen[nk:]:
            st.kill(c)
        fresh: dict = {}
        goals = [_instantiate(b, s, fresh) for b in rule.body]
        for goal in reversed(goals):
            self.agenda = (("g", goal), self.agenda)

    # ---- goal execution --------------------------------------------------------------------

    def add_goal(self, goals: Iterable[Term]) -> None:
        for goal in reversed(list(goals)):
            self.agenda = (("g", goal), self.agenda)

    def _fail(self) -> None:
        self.store.failed = True

    def _wake(self) -> None:
        st = self.store
        bound = st.newly_bound
        if not bound:
            return
        st.newly_bound = []
        ids: set = set()
        for v in bound:
            w = st.watch.get(v)
            if w:
                ids.update(w)
        for cid in sorted(ids, reverse=True):
            c = st.constraints.get(cid)
            if c is not None and c.alive:
                self.agenda = (("a", c, -1), self.agenda)

    def _unify_goal(self, a: Term, b: Term) -> None:
        if self.store.unify(a, b):
            self._wake()
        else:
            self.store.newly_bound = []
            self._fail()

    def _push_choice(self, branches: list) -> None:
        if not branches:
            self._fail()
            return
        self.stats.choice_points += 1
        if len(branches) > 1:
            self.choice_points.append(
                ChoicePoint(len(self.store.trail), self.agenda, branches, 1, self.labeling_active)
            )
        self.agenda = (("g", branches[0]), self.agenda)

    def _execute(self, goal: Term, time: Term | None = None) -> None:
        st = self.store
        goal = st.deref(goal)
        tg = type(goal)
        if tg is Var:
            wrapped = goal if time is None else Compound("at", (goal, time))
            self._add_constraint("$call", (wrapped,), None)
            return
        if tg is Atom:
            name, args = goal.name, ()
        elif tg is Compound:
            name, args = goal.functor, goal.args
        else:
            raise ProgramError(f"cannot execute {goal!r} as a goal")

        if name == "true" and not args:
            return
        if name == "fail" and not args:
            self._fail()
            return
        if name == "," and len(args) == 2:
            self.agenda = (("t", args[1], time), self.agenda)
            self.agenda = (("t", args[0], time), self.agenda)
            return
        if name == ";" and len(args) == 2:
            branches = []
            cur = goal
            while type(cur) is Compound and cur.functor == ";" and len(cur.args) == 2:
                branches.append(cur.args[0])
                cur = st.deref(cur.args[1])
            branches.append(cur)
            if time is not None:
                branches = [Compound("at", (b, time)) for b in branches]
            self._push_choice(branches)
            return
        if name == "at" and len(args) == 2:
            if time is not None:
                raise ProgramError("nested time qualifiers")
            self._execute(args[0], args[1])
            return
        if name == "=" and len(args) == 2:
            if time is None:
                self._unify_goal(args[0], args[1])
            else:
                self._add_constraint("eq", args, time)
            return
        if name in BODY_BUILTINS:
            self._builtin(name, args)
            return
        self._add_constraint(name, args, time)

    def _add_constraint(self, functor: str, args: tuple, time: Term | None) -> None:
        st = self.store
        if self.program.dedupes(functor) and st.find_identical(functor, args, time) is not None:
            return
        c = st.add(functor, args, time)
        self.agenda = (("a", c, 0), self.agenda)

    def _builtin(self, name: str, args: tuple) -> None:
        st = self.store
        if name == "member":
            items = st.list_items(args[1])
            if items is None:
                raise ProgramError("member/2 needs a proper list")
            self._push_choice([Compound("=", (args[0], i)) for i in items if self._unifiable(args[0], i)])
        elif name == "length":
            items = st.list_items(args[0])
            if items is None:
                raise ProgramError("length/2 needs a proper list")
            self._unify_goal(args[1], Int(len(items)))
        elif name == "lookup":
            self._lookup(*args)
        elif name == "call_tr":
            self._call_tr(*args)
        elif name == "subst":
            param, value, template, out = args
            param = st.deref(param)
            if type(param) is not Var:
                raise ProgramError("subst/4 parameter must be an unbound variable")
            self._unify_goal(out, _replace(st.resolve(template), {param: value}))
        elif name in ("cardinal", "cardinal_lt"):
            self._cardinal(args[0], args[1], strict=name == "cardinal_lt")
        else:
            if not self._guard(Compound(name, args)):
                self._fail()

    def _unifiable(self, a: Term, b: Term) -> bool:
        st = self.store
        mark = len(st.trail)
        ok = st.unify(a, b)
        st.undo_to(mark)
        st.newly_bound = []
        return ok

    def _lookup(self, key: Term, assoc: Term, value: Term) -> None:
        st = self.store
        assoc = st.deref(assoc)
        if type(assoc) is Compound and len(assoc.args) == 1 and assoc.functor != ".":
            assoc = assoc.args[0]
        items = st.list_items(assoc)
        if items is None:
            raise ProgramError("lookup/3 needs an association list")
        for item in items:
            item = st.deref(item)
            if type(item) is Compound and item.functor == "kv" and st.identical(item.args[0], key):
                self._unify_goal(value, item.args[1])
                return
        raise ProgramError(f"lookup/3: no entry for {format_term(st.resolve(key))}")

    def _call_tr(self, tr: Term, x: Term, r: Term) -> None:
        st = self.store
        tr = st.deref(tr)
        if not (type(tr) is Compound and tr.functor == "tr" and len(tr.args) == 4):
            raise ProgramError("call_tr/3 expects tr(Param, Locals, Goal, Result)")
        param, local_list, goal, result = tr.args
        mapping = {st.deref(param): x}
        for v in st.list_items(local_list) or ():
            v = st.deref(v)
            if type(v) is Var:
                mapping[v] = Var(v.name)
        goal = _replace(goal, mapping)
        result = _replace(result, mapping)
        self.agenda = (("g", goal), self.agenda)
        self.agenda = (("g", Compound("=", (r, result))), self.agenda)

    def _cardinal(self, lst: Term, n: Term, strict: bool) -> None:
        st = self.store
        n = st.deref(n)
        if type(n) is not Int:
            raise ProgramError("cardinal/2 needs an integer bound")
        members = []
        for c in st.buckets.get(("card_member", 2, False), ()):
            if c.alive and st.identical(c.args[0], lst):
                members.append(c.args[1])
        neqs = [
            (c.args[0], c.args[1])
            for key in (("neq", 2, False), ("lt", 2, False))
            for c in st.buckets.get(key, ())
            if c.alive
        ]

        def distinct(a, b):
            if st.is_ground(a) and st.is_ground(b):
                return not st.identical(a, b)
            return any(
                (st.identical(x, a) and st.identical(y, b)) or (st.identical(x, b) and st.identical(y, a))
                for x, y in neqs
            )

        chosen: list = []
        for m in members:
            if all(distinct(m, o) for o in chosen):
                chosen.append(m)
        count = len(chosen)
        if count > n.value or (strict and count >= n.value):
            self._fail()

    # ---- activation -----------------------------------------------------------------------

    def _activate(self, c: Constraint, start: int) -> None:
        st = self.store
        if not c.alive:
            return
        if start < 0:
            # woken by a binding: restore the already-in-store invariant first
            if self.program.dedupes(c.functor) and st.find_identical(c.functor, c.args, c.time, exclude=c.id):
                st.kill(c)
                return
            st.register(c)
            start = 0
        occs = self.program.occurrences.get(c.key, ())
        rules = self.program.rules
        for oi in range(start, len(occs)):
            ri, hi = occs[oi]
            rule = rules[ri]
            found = self._try_occurrence(ri, rule, hi, c)
            if found is not None:
                if c.alive:
                    self.agenda = (("a", c, oi), self.agenda)
                chosen, s = found
                # the body runs before the active constraint resumes
                self._fire(ri, rule, chosen, s)
                return

    def _try_occurrence(self, ri: int, rule: ChrRule, hi: int, active: Constraint):
        heads = rule.heads
        s: dict = {}
        added: list = []
        if not self._match_head(heads[hi], active, s, added):
            return None
        order = [i for i in range(len(heads)) if i != hi]
        chosen: list = [None] * len(heads)
        chosen[hi] = active
        st = self.store
        propagation = rule.kind == "propagation"

        def rec(k):
            if k == len(order):
                if propagation and (ri, tuple(c.id for c in chosen)) in st.history:
                    return False
                return self.check_guard(rule.guard, s)
            i = order[k]
            for c in st.buckets.get(heads[i].key, ()):
                if not c.alive or any(c is x for x in chosen):
                    continue
                added2: list = []
                if self._match_head(heads[i], c, s, added2):
                    chosen[i] = c
                    if rec(k + 1):
                        return True
                    chosen[i] = None
                for v in added2:
                    del s[v]
            return False

        if rec(0):
            return list(chosen), s
        return None

    # ---- main loop ------------------------------------------------------------------------

    def _step(self) -> None:
        task, self.agenda = self.agenda
        kind = task[0]
        if kind == "a":
            self._activate(task[1], task[2])
        elif kind == "g":
            self._execute(task[1])
        else:
            self._execute(task[1], task[2])

    def _run_agenda_once(self) -> None:
        while self.agenda is not None and not self.store.failed:
            self._step()

    def _backtrack_choice(self) -> bool:
        st = self.store
        while self.choice_points:
            cp = self.choice_points[-1]
            st.undo_to(cp.trail_len)
            st.newly_bound = []
            self.stats.backtracks += 1
            branch = cp.branches[cp.next_branch]
            cp.next_branch += 1
            if cp.next_branch >= len(cp.branches):
                self.choice_points.pop()
            self.labeling_active = cp.labeling_active
            self.agenda = (("g", branch), cp.agenda)
            return True
        return False

    def run(self) -> str:
        started = _time.perf_counter()
        try:
            while True:
                if self.store.failed:
                    if not self._backtrack_choice():
                        return UNSATISFIABLE
                    continue
                if self.agenda is None:
                    if self.labeling_active:
                        return SATISFIABLE
                    self.labeling_active = True
                    self._add_constraint(LABELING, (), None)
                    continue
                self._step()
        except BudgetExhausted:
            return BUDGET_EXHAUSTED
        finally:
            self.stats.elapsed += _time.perf_counter() - started


def _subst(t: Term, s: dict) -> Term:
    if type(t) is Var:
        return s.get(t, t)
    if type(t) is Compound and t.has_vars:
        return Compound(t.functor, [_subst(a, s) for a in t.args])
    return t


def _instantiate(t: Term, s: dict, fresh: dict) -> Term:
    if type(t) is Var:
        if t in s:
            return s[t]
        v = fresh.get(t)
        if v is None:
            v = fresh[t] = Var(t.name)
        return v
    if type(t) is Compound and t.has_vars:
        return Compound(t.functor, [_instantiate(a, s, fresh) for a in t.args])
    return t


def _replace(t: Term, mapping: dict) -> Term:
    if type(t) is Var:
        return mapping.get(t, t)
    if type(t) is Compound and t.has_vars:
        return Compound(t.functor, [_replace(a, mapping) for a in t.args])
    return t


def _as_goals(goal) -> list[Term]:
    if isinstance(goal, str):
        return parse_goal(goal)
    return list(goal)


def solve(
    goal: str | Sequence[Term],
    program: RuleProgram,
    budget: int = DEFAULT_BUDGET,
    query_vars: dict | None = None,
) -> SolveResult:
    """Run ``goal`` against ``program`` until a verdict.

    When ``goal`` is text, its named variables are reported in
    ``bindings`` (resolved); pass ``query_vars`` to choose them explicitly.
    """
    varmap: dict = {} if query_vars is None else dict(query_vars)
    if isinstance(goal, str):
        goals = parse_goal(goal, varmap)
    else:
        goals = list(goal)
    state = SearchState(program, budget)
    state.add_goal(goals)
    status = state.run()
    result = SolveResult(status, stats=state.stats, state=state)
    if status == SATISFIABLE:
        st = state.store
        result.bindings = {name: st.resolve(v) for name, v in varmap.items()}
        result.residual = st.residual()
    return result
