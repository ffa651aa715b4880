"""Satisfiability solver for timed propositional temporal logic with
freeze quantifiers, and for its bounded extension with past operators."""

from .formula import (
    Diagnostic,
    Formula,
    Interner,
    Logic,
    alpha_rename,
    check_wellformed,
    delta_bound,
    nnf,
)
from .model import (
    TimedLassoModel,
    bounded_model_search,
    evaluate,
    evaluate_env,
    extract_model,
    model_from_json,
    model_to_json,
)
from .shift import Shifter, ShiftVariant, window
from .solver import InputError, Prepared, prepare, solve_formula, solve_text
from .syntax import ParseError, parse, print_formula
from .tableau import Engine, SolverConfig, Verdict, export_dot
from .translate import to_gtptlp

__all__ = [
    "Diagnostic",
    "Engine",
    "Formula",
    "InputError",
    "Interner",
    "Logic",
    "ParseError",
    "Prepared",
    "Shifter",
    "ShiftVariant",
    "SolverConfig",
    "TimedLassoModel",
    "Verdict",
    "alpha_rename",
    "bounded_model_search",
    "check_wellformed",
    "delta_bound",
    "evaluate",
    "evaluate_env",
    "export_dot",
    "extract_model",
    "model_from_json",
    "model_to_json",
    "nnf",
    "parse",
    "prepare",
    "print_formula",
    "solve_formula",
    "solve_text",
    "to_gtptlp",
    "window",
]

__version__ = "0.1.0"
