"""Policy frontend: reader, model, direct evaluation and rule compiler.

The compiler and the handler packs load the rewriting engine, so they are
imported on first use; the model, reader and evaluator stay engine-free.
"""

from .evaluate import (
    EvaluationError, TriValue, close_allows, eval_condition, evaluate_tri, open_allows, tri_and, tri_diff,
    tri_not, tri_or,
)
from .model import (
    NEVER, And, BAnd, BConst, BNot, BOr, Cmp, CyclicRule, DuplicateRule, EventProp, Exists, ForAll, InSet,
    Lit, MissingQueryRule, Name, Not, Or, RuleRef, SetDecl, Simple, SplError, SplPolicyModel, SplSyntaxError,
    UnboundSet, UnknownRule, rule_paths,
)
from .parser import parse_policies, parse_spl

_LAZY = {
    "CompiledPolicy": "compiler",
    "CompileError": "compiler",
    "compile_policy": "compiler",
    "functor_name": "compiler",
    "build_logic_pack": "handler",
    "build_trilogic_pack": "handler",
}


def __getattr__(name):
    if name in _LAZY:
        import importlib

        module = importlib.import_module(f".{_LAZY[name]}", __name__)
        return getattr(module, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
