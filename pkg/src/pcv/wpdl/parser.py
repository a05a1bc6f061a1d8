"""Reader for the workflow description format.

::

    workflow Budget {
        participant Clerk role;
        participant Boss role;
        data cost;
        activity a0 atomic performer Clerk action "Build" target "Budget" split XOR(t0, t1);
        activity a1 atomic performer Clerk action "Approve" target "Budget";
        activity a2 atomic performer Boss action "Approve" target "Budget";
        transition t0 from a0 to a1 when cost < 1000;
        transition t1 from a0 to a2;
        start a0;
        end a1, a2;
    }

Activities are ``atomic`` or ``dummy``; ``join`` and ``split`` take AND
or XOR (a split may list its transitions in priority order). A
transition without ``when`` is unconditional. ``end`` lists the
activities whose completion completes the workflow. A ``subflow`` block
declares activities and transitions that an activity of kind
``subflow Name`` expands to in place; loop activities are rejected.
"""

from __future__ import annotations

from ..spl.model import BAnd, BNot, BOr, Cmp, EventProp, InSet, Lit, Name
from ..spl.parser import _Parser
from .model import (
    Activity, CyclicWorkflow, DanglingReference, DataRef, MissingStartActivity, Participant,
    Transition, UnsupportedActivity, WorkflowModel, WorkflowSyntaxError,
)

_KINDS = {"person": "person", "role": "role", "application": "application", "org_unit": "org-unit", "orgunit": "org-unit"}


class _Block:
    def __init__(self):
        self.activities: list[Activity] = []
        self.transitions: list[Transition] = []
        self.subflow_refs: dict[str, str] = {}
        self.start = ""
        self.ends: list[str] = []
        self.where: dict = {}


class _WfParser(_Parser):
    def name(self, what: str):
        t = self.tok
        if t.kind != "ident":
            raise self.error(f"expected {what}, found {t.text or 'end of input'!r}")
        self.i += 1
        return t

    def workflow(self) -> tuple[WorkflowModel, _Block, dict]:
        self.expect("workflow")
        name = self.name("a workflow name")
        model = WorkflowModel(name.text)
        self.expect("{")
        main = _Block()
        subflows: dict[str, _Block] = {}
        while not self.accept("}"):
            if self.tok.kind == "eof":
                raise self.error("missing '}' at end of workflow")
            if self.accept("participant"):
                p = self.name("a participant name")
                kind = self.participant_kind()
                model.participants.append(Participant(p.text, kind))
                main.where[p.text] = p
                self.expect(";")
            elif self.accept("data"):
                while True:
                    d = self.name("a data name")
                    model.data.append(d.text)
                    if not self.accept(","):
                        break
                self.expect(";")
            elif self.accept("subflow"):
                s = self.name("a subflow name")
                block = _Block()
                self.expect("{")
                while not self.accept("}"):
                    if self.is_("subflow"):
                        raise UnsupportedActivity("subflows nest only one level", self.tok.line, self.tok.col)
                    self.block_item(block)
                subflows[s.text] = block
            else:
                self.block_item(main)
        if self.tok.kind != "eof":
            raise self.error("trailing input after workflow")
        return model, main, subflows

    def participant_kind(self) -> str:
        t = self.name("a participant kind")
        text = t.text
        if text == "org" and self.accept("-"):
            text = "org_" + self.name("unit").text
        kind = _KINDS.get(text)
        if kind is None:
            raise WorkflowSyntaxError(f"unknown participant kind {t.text}", t.line, t.col)
        return kind

    def block_item(self, block: _Block) -> None:
        if self.accept("activity"):
            self.activity(block)
        elif self.accept("transition"):
            t = self.name("a transition name")
            self.expect("from")
            src = self.name("an activity name").text
            self.expect("to")
            dst = self.name("an activity name").text
            cond = None
            if self.accept("when"):
                cond = self.bool_expr()
            tr = Transition(t.text, src, dst) if cond is None else Transition(t.text, src, dst, cond)
            block.transitions.append(tr)
            block.where[t.text] = t
            self.expect(";")
        elif self.accept("start"):
            block.start = self.name("an activity name").text
            self.expect(";")
        elif self.accept("end"):
            while True:
                block.ends.append(self.name("an activity name").text)
                if not self.accept(","):
                    break
            self.expect(";")
        else:
            raise self.error(f"unexpected {self.tok.text or 'end of input'!r}")

    def activity(self, block: _Block) -> None:
        n = self.name("an activity name")
        kind_tok = self.name("an activity kind")
        kind = kind_tok.text
        if kind == "loop":
            raise UnsupportedActivity(f"loop activity {n.text} is not supported", kind_tok.line, kind_tok.col)
        if kind not in ("atomic", "dummy", "subflow"):
            raise WorkflowSyntaxError(f"unknown activity kind {kind}", kind_tok.line, kind_tok.col)
        act = Activity(n.text, kind if kind != "subflow" else "dummy")
        if kind == "subflow":
            block.subflow_refs[n.text] = self.name("a subflow name").text
        while not self.accept(";"):
            key = self.name("an activity attribute")
            if key.text == "performer":
                act.performer = self.name("a participant name").text
            elif key.text == "action":
                act.action = self.literal()
            elif key.text == "target":
                if self.tok.kind == "ident":
                    act.target = DataRef(self.name("a data name").text)
                else:
                    act.target = self.literal()
            elif key.text == "join":
                act.join = self.route()
            elif key.text == "split":
                act.split = self.route()
                if act.split == "XOR" and self.accept("("):
                    order = [self.name("a transition name").text]
                    while self.accept(","):
                        order.append(self.name("a transition name").text)
                    self.expect(")")
                    act.priority = tuple(order)
            else:
                raise WorkflowSyntaxError(f"unknown activity attribute {key.text}", key.line, key.col)
        if kind == "atomic" and (act.performer is None or act.action is None or act.target is None):
            raise WorkflowSyntaxError(f"atomic activity {n.text} needs performer, action and target", n.line, n.col)
        block.activities.append(act)
        block.where[n.text] = n

    def route(self) -> str:
        t = self.name("AND or XOR")
        if t.text not in ("AND", "XOR"):
            raise WorkflowSyntaxError(f"expected AND or XOR, found {t.text}", t.line, t.col)
        return t.text

    def literal(self):
        v = self.value()
        if not isinstance(v, Lit):
            raise self.error("expected a literal")
        return v.value


def _inline(model: WorkflowModel, main: _Block, subflows: dict) -> None:
    acts = list(main.activities)
    trans = list(main.transitions)
    for act_name, sub_name in main.subflow_refs.items():
        if sub_name not in subflows:
            raise DanglingReference(f"unknown subflow {sub_name}")
        sub = subflows[sub_name]
        if not sub.start or not sub.ends:
            raise MissingStartActivity(f"subflow {sub_name} needs start and end")
        prefix = f"{act_name}_"
        for a in sub.activities:
            acts.append(Activity(prefix + a.name, a.kind, a.performer, a.action, a.target, a.join, a.split,
                                 tuple(prefix + p for p in a.priority)))
        for t in sub.transitions:
            trans.append(Transition(prefix + t.name, prefix + t.source, prefix + t.dest, t.condition))
        # the subflow activity becomes a routing point after the subflow's end
        entry = f"{act_name}_enter"
        outer = next(a for a in acts if a.name == act_name)
        acts.append(Activity(entry, "dummy", join=outer.join))
        for t in trans:
            if t.dest == act_name and not t.name.startswith(prefix):
                t.dest = entry
        trans.append(Transition(f"{act_name}_begin", entry, prefix + sub.start))
        outer.join = "XOR" if len(sub.ends) > 1 else "AND"
        for i, e in enumerate(sub.ends):
            trans.append(Transition(f"{act_name}_done{i}", prefix + e, act_name))
    model.activities = acts
    model.transitions = trans
    model.start = main.start
    model.ends = tuple(main.ends)


def _validate(model: WorkflowModel, where: dict) -> None:
    def pos(name):
        t = where.get(name)
        return (t.line, t.col) if t else (0, 0)

    if not model.activities or not model.start:
        raise MissingStartActivity(f"workflow {model.name} has no start activity")
    if not model.ends:
        raise MissingStartActivity(f"workflow {model.name} has no end activity")
    names = [a.name for a in model.activities] + [t.name for t in model.transitions]
    seen = set()
    for n in names:
        if n in seen:
            raise WorkflowSyntaxError(f"name {n} declared twice", *pos(n))
        seen.add(n)
    acts = {a.name: a for a in model.activities}
    people = {p.name for p in model.participants}
    for n in (model.start, *model.ends):
        if n not in acts:
            raise DanglingReference(f"unknown activity {n}")
    for n in model.ends:
        if acts[n].kind != "atomic":
            raise WorkflowSyntaxError(f"end activity {n} must be atomic", *pos(n))
    for a in model.activities:
        if a.kind == "atomic" and a.performer not in people:
            raise DanglingReference(f"activity {a.name} names unknown participant {a.performer}", *pos(a.name))
        if isinstance(a.target, DataRef) and a.target.name not in model.data:
            raise DanglingReference(f"activity {a.name} names unknown data {a.target.name}", *pos(a.name))
    for t in model.transitions:
        for end in (t.source, t.dest):
            if end not in acts:
                raise DanglingReference(f"transition {t.name} refers to unknown activity {end}", *pos(t.name))
        _check_condition(t.condition, model, t.name, pos(t.name))
    for a in model.activities:
        if a.split == "XOR" and a.priority:
            out = sorted(t.name for t in model.outgoing(a.name))
            if sorted(a.priority) != out:
                raise WorkflowSyntaxError(
                    f"split priority of {a.name} must list exactly its outgoing transitions", *pos(a.name)
                )
    # acyclicity
    state: dict = {}

    def visit(n):
        state[n] = 1
        for t in model.outgoing(n):
            if state.get(t.dest) == 1:
                raise CyclicWorkflow(f"transition {t.name} closes a cycle", *pos(t.name))
            if t.dest not in state:
                visit(t.dest)
        state[n] = 2

    for a in model.activities:
        if a.name not in state:
            visit(a.name)


def _check_condition(b, model, tname, pos) -> None:
    if isinstance(b, Cmp):
        for v in (b.left, b.right):
            if isinstance(v, EventProp):
                raise WorkflowSyntaxError(f"transition {tname}: conditions may not use event properties", *pos)
            if isinstance(v, Name) and v.name not in model.data:
                raise DanglingReference(f"transition {tname}: unknown data {v.name}", *pos)
    elif isinstance(b, InSet):
        raise WorkflowSyntaxError(f"transition {tname}: set membership is not allowed in conditions", *pos)
    elif isinstance(b, (BAnd, BOr)):
        _check_condition(b.left, model, tname, pos)
        _check_condition(b.right, model, tname, pos)
    elif isinstance(b, BNot):
        _check_condition(b.expr, model, tname, pos)


def parse_workflow(text: str) -> WorkflowModel:
    p = _WfParser(text)
    if p.tok.kind == "eof":
        raise MissingStartActivity("empty workflow")
    model, main, subflows = p.workflow()
    where = dict(main.where)
    _inline(model, main, subflows)
    _validate(model, where)
    return model
