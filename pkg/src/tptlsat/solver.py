"""End-to-end pipeline: well-formedness, renaming, normal form,
translation for the bounded logic, and the tableau search."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .formula import (
    Diagnostic,
    Formula,
    Freeze,
    Interner,
    Logic,
    alpha_rename,
    check_wellformed,
    delta_bound,
    nnf,
)
from .shift import Shifter, ShiftVariant, window
from .syntax import parse
from .tableau import Engine, SolverConfig, Verdict
from .translate import guarded_operator_bounds, to_gtptlp


class InputError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(str(d) for d in diagnostics))


@dataclass
class Prepared:
    """Everything the engine needs for one problem."""

    logic: Logic
    engine_formula: Formula  # closed, negated normal form, freeze-rooted
    delta: int
    variant: ShiftVariant
    window: Optional[int]


def prepare(
    f: Formula,
    logic: Logic,
    delta_override: Optional[int] = None,
    spans: Optional[dict] = None,
) -> Prepared:
    diags = check_wellformed(f, logic, spans)
    if diags:
        raise InputError(diags)
    g = nnf(alpha_rename(f))
    delta = delta_override if delta_override is not None else delta_bound(g)
    if logic is Logic.TPTLBP:
        bounds = guarded_operator_bounds(g)
        eng = to_gtptlp(g)
        variant = ShiftVariant.GTPTLP
        win = window(bounds, delta)
    else:
        eng = g
        variant = ShiftVariant.TPTL
        win = None
    if not isinstance(eng, Freeze):
        eng = Freeze("_z", eng)
    return Prepared(logic, eng, delta, variant, win)


def build_engine(prep: Prepared, config: Optional[SolverConfig] = None) -> Engine:
    interner = Interner()
    shifter = Shifter(interner, prep.variant, prep.window)
    return Engine(interner, shifter, prep.delta, config)


def solve_formula(
    f: Formula, logic: Logic, config: Optional[SolverConfig] = None
) -> Verdict:
    config = config or SolverConfig()
    prep = prepare(f, logic, config.delta_override)
    engine = build_engine(prep, config)
    return engine.solve(prep.engine_formula)


def solve_text(
    text: str, logic: Logic, config: Optional[SolverConfig] = None
) -> Verdict:
    config = config or SolverConfig()
    source = parse(text)
    prep = prepare(source.root, logic, config.delta_override, source.spans)
    engine = build_engine(prep, config)
    return engine.solve(prep.engine_formula)
