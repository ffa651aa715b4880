"""Command-line front end.

Reads one formula (file or stdin), runs the pipeline, and reports the
verdict.  Exit codes: 10 satisfiable, 20 unsatisfiable, 30 search budget
exhausted, 1 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .formula import Logic
from .model import model_to_json
from .solver import InputError, solve_text
from .syntax import ParseError
from .tableau import SolverConfig, export_dot

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_EXHAUSTED = 30
EXIT_INPUT = 1

_OUTCOME_TEXT = {"SAT": "SAT", "UNSAT": "UNSAT", "RESOURCE_EXHAUSTED": "UNKNOWN"}
_OUTCOME_CODE = {"SAT": EXIT_SAT, "UNSAT": EXIT_UNSAT, "RESOURCE_EXHAUSTED": EXIT_EXHAUSTED}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tptlsat",
        description="Satisfiability of timed temporal logic with freeze quantifiers.",
    )
    p.add_argument("input", help="formula file, or - for stdin")
    p.add_argument(
        "--logic",
        required=True,
        choices=["tptl", "tptlbp"],
        help="input language (never inferred)",
    )
    p.add_argument("--delta", type=int, help="override the per-step time bound (>= 1)")
    p.add_argument("--max-nodes", type=int, default=1_000_000, help="node budget")
    p.add_argument(
        "--child-order",
        choices=["asc-delta", "desc-delta"],
        default="asc-delta",
        help="exploration order of step children",
    )
    p.add_argument("--model", action="store_true", help="print the witness model as JSON")
    p.add_argument("--dot", metavar="PATH", help="write the tableau in DOT format")
    p.add_argument("--json", action="store_true", help="one JSON document on stdout")
    p.add_argument("--threads", type=int, default=1, help="parallel branch exploration")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            text = Path(args.input).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        config = SolverConfig(
            delta_override=args.delta,
            max_nodes=args.max_nodes,
            child_order=args.child_order,
            threads=max(1, args.threads),
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    logic = Logic.TPTL if args.logic == "tptl" else Logic.TPTLBP
    try:
        verdict = solve_text(text, logic, config)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InputError as exc:
        for diag in exc.diagnostics:
            print(f"error: {diag}", file=sys.stderr)
        return EXIT_INPUT

    if args.dot:
        Path(args.dot).write_text(
            export_dot(verdict.tableau, verdict.interner), encoding="utf-8"
        )
    model_doc = model_to_json(verdict.model) if verdict.model else None
    if args.json:
        doc = {
            "verdict": _OUTCOME_TEXT[verdict.outcome],
            "stats": verdict.stats,
            "model": model_doc,
        }
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(_OUTCOME_TEXT[verdict.outcome])
        if args.model and model_doc is not None:
            print(json.dumps(model_doc, indent=2, sort_keys=True))
    return _OUTCOME_CODE[verdict.outcome]


if __name__ == "__main__":
    sys.exit(main())
