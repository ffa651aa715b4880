"""Seeded random formulae and models shared by the property suites."""

from __future__ import annotations

import itertools
import random

from tptlsat.formula import (
    And,
    Cong,
    Formula,
    Freeze,
    Implies,
    Logic,
    Next,
    Not,
    Or,
    Prev,
    Prop,
    Rel,
    Release,
    Since,
    Triggered,
    Until,
    WeakNext,
    WeakPrev,
)
from tptlsat.model import TimedLassoModel

PROPS = ["p", "q", "r"]


def random_formula(
    rng: random.Random,
    logic: Logic,
    max_depth: int = 4,
    n_props: int = 2,
    max_const: int = 3,
    max_constraints: int = 1,
    max_bound: int = None,
) -> Formula:
    """A closed random formula of the given logic.  Constraint leaves are
    rationed by ``max_constraints``; ``max_bound`` caps operator bounds
    separately from constraint constants (bounds multiply into the
    per-step estimate, so search-heavy suites keep them at 1)."""
    names = PROPS[:n_props]
    fresh = itertools.count()
    budget = {"constraints": max_constraints}
    if max_bound is None:
        max_bound = max_const

    def leaf(env: tuple[str, ...]) -> Formula:
        if env and budget["constraints"] > 0 and rng.random() < 0.4:
            budget["constraints"] -= 1
            x, y = rng.choice(env), rng.choice(env)
            if rng.random() < 0.25:
                m = rng.randint(1, max_const)
                node: Formula = Cong(x, m, y, rng.randint(0, m - 1))
            else:
                node = Rel(x, y, rng.randint(-max_const, max_const))
            return Not(node) if rng.random() < 0.4 else node
        p = Prop(rng.choice(names))
        return Not(p) if rng.random() < 0.4 else p

    def gen(depth: int, env: tuple[str, ...]) -> Formula:
        if depth <= 0 or rng.random() < 0.25:
            return leaf(env)
        kinds = ["and", "or", "not", "implies", "freeze", "next", "until", "release"]
        if logic is Logic.TPTLBP:
            kinds += ["wnext", "prev", "wprev", "since", "triggered"]
        kind = rng.choice(kinds)
        if kind == "freeze":
            v = f"g{next(fresh)}"
            return Freeze(v, gen(depth - 1, env + (v,)))
        if kind == "not":
            return Not(gen(depth - 1, env))
        if kind in ("and", "or", "implies"):
            cls = {"and": And, "or": Or, "implies": Implies}[kind]
            return cls(gen(depth - 1, env), gen(depth - 1, env))
        if logic is Logic.TPTL:
            bound = None
        elif rng.random() < 0.85:
            bound = rng.randint(0, max_bound)
        else:
            bound = None
            env = ()  # unbounded operators need closed operands
        if kind in ("next", "wnext", "prev", "wprev"):
            cls = {
                "next": Next,
                "wnext": WeakNext,
                "prev": Prev,
                "wprev": WeakPrev,
            }[kind]
            return cls(bound, gen(depth - 1, env))
        cls = {"until": Until, "release": Release, "since": Since, "triggered": Triggered}[
            kind
        ]
        return cls(bound, gen(depth - 1, env), gen(depth - 1, env))

    return gen(max_depth, ())


def random_frozen(
    rng: random.Random,
    max_depth: int = 3,
    n_props: int = 2,
    max_const: int = 3,
    with_past: bool = False,
    congruences: bool = True,
) -> Freeze:
    """A closed formula of the shape x.body where constraints may relate
    inner freezes to the outer variable; used by the shift suites."""
    names = PROPS[:n_props]
    fresh = itertools.count()
    outer = "s0"

    def leaf(env: tuple[str, ...]) -> Formula:
        r = rng.random()
        if r < 0.45:
            x, y = rng.choice(env), rng.choice(env)
            if congruences and rng.random() < 0.3:
                m = rng.randint(1, max_const)
                node: Formula = Cong(x, m, y, rng.randint(0, m - 1))
            else:
                node = Rel(x, y, rng.randint(-max_const, max_const))
            return Not(node) if rng.random() < 0.4 else node
        p = Prop(rng.choice(names))
        return Not(p) if rng.random() < 0.5 else p

    def gen(depth: int, env: tuple[str, ...]) -> Formula:
        if depth <= 0 or rng.random() < 0.25:
            return leaf(env)
        kinds = ["and", "or", "freeze", "next", "until", "release"]
        if with_past:
            kinds += ["prev", "wprev", "since", "triggered"]
        kind = rng.choice(kinds)
        if kind == "freeze":
            v = f"s{next(fresh) + 1}"
            return Freeze(v, gen(depth - 1, env + (v,)))
        if kind in ("and", "or"):
            return (And if kind == "and" else Or)(
                gen(depth - 1, env), gen(depth - 1, env)
            )
        if kind == "next":
            return Next(None, gen(depth - 1, env))
        if kind == "prev":
            return Prev(None, gen(depth - 1, env))
        if kind == "wprev":
            return WeakPrev(None, gen(depth - 1, env))
        cls = {"until": Until, "release": Release, "since": Since, "triggered": Triggered}[
            kind
        ]
        return cls(None, gen(depth - 1, env), gen(depth - 1, env))

    return Freeze(outer, gen(max_depth, (outer,)))


def random_model(
    rng: random.Random,
    n_props: int = 2,
    max_states: int = 4,
    max_gap: int = 2,
) -> TimedLassoModel:
    names = PROPS[:n_props]
    n = rng.randint(1, max_states)
    letters = [
        frozenset(p for p in names if rng.random() < 0.5) for _ in range(n)
    ]
    times = [0]
    for _ in range(n - 1):
        times.append(times[-1] + rng.randint(0, max_gap))
    loop_start = rng.randrange(n)
    span = times[-1] - times[loop_start]
    wrap = rng.randint(0, max_gap)
    advance = max(1, span + wrap)
    return TimedLassoModel(tuple(zip(letters, times)), loop_start, advance)
