"""Guarded constraint-rewriting engine."""

from .rules import LABELING, ChrRule, Head, ProgramError, RuleProgram, parse_rules, program
from .solver import (
    BUDGET_EXHAUSTED,
    DEFAULT_BUDGET,
    SATISFIABLE,
    UNSATISFIABLE,
    BudgetExhausted,
    ConstraintStore,
    SearchState,
    SolveResult,
    compare_terms,
    solve,
)
from .syntax import SyntaxError_, parse_goal, parse_term
from .terms import FAIL, NIL, TRUE, Atom, Compound, Int, Str, Term, Var, f, format_term, make_list, mk

__all__ = [
    "LABELING", "ChrRule", "Head", "ProgramError", "RuleProgram", "parse_rules", "program",
    "BUDGET_EXHAUSTED", "DEFAULT_BUDGET", "SATISFIABLE", "UNSATISFIABLE", "BudgetExhausted",
    "ConstraintStore", "SearchState", "SolveResult", "compare_terms", "solve",
    "SyntaxError_", "parse_goal", "parse_term",
    "FAIL", "NIL", "TRUE", "Atom", "Compound", "Int", "Str", "Term", "Var", "f", "format_term",
    "make_list", "mk",
]
