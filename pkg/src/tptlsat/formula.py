"""Formula AST and the operations the solver pipeline needs.

The same node types cover all three input languages: the future-only
timed logic (no past operators, no bounds), the bounded logic with past
(every operator may carry a bound, written ``w``), and the guarded
fragment the bounded logic is translated into.  A bound of ``None``
means "unbounded".
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional

Bound = Optional[int]  # None = unbounded


class Logic(Enum):
    TPTL = "tptl"
    TPTLBP = "tptlbp"


@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class FalseF(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Freeze(Formula):
    """``x.f``: binds ``var`` to the timestamp of the current state."""

    var: str
    sub: Formula


@dataclass(frozen=True)
class Rel(Formula):
    """Relative timing constraint ``x <= y + c``."""

    x: str
    y: str
    c: int


@dataclass(frozen=True)
class Abs(Formula):
    """Absolute timing constraint ``x <= c``; parsed but rejected downstream."""

    x: str
    c: int


@dataclass(frozen=True)
class Cong(Formula):
    """Congruence constraint ``x == y + c  (mod m)``."""

    x: str
    m: int
    y: str
    c: int


@dataclass(frozen=True)
class Next(Formula):
    bound: Bound
    sub: Formula


@dataclass(frozen=True)
class WeakNext(Formula):
    bound: Bound
    sub: Formula


@dataclass(frozen=True)
class Prev(Formula):
    bound: Bound
    sub: Formula


@dataclass(frozen=True)
class WeakPrev(Formula):
    bound: Bound
    sub: Formula


@dataclass(frozen=True)
class Until(Formula):
    bound: Bound
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Release(Formula):
    bound: Bound
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Since(Formula):
    bound: Bound
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Triggered(Formula):
    bound: Bound
    left: Formula
    right: Formula


TRUE = TrueF()
FALSE = FalseF()

UNARY_TEMPORAL = (Next, WeakNext, Prev, WeakPrev)
BINARY_TEMPORAL = (Until, Release, Since, Triggered)
PAST_TEMPORAL = (Prev, WeakPrev, Since, Triggered)
CONSTRAINTS = (Rel, Abs, Cong)


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class Diagnostic:
    message: str
    span: Optional[tuple[int, int]] = None  # (line, column), 1-based

    def __str__(self) -> str:
        if self.span is None:
            return self.message
        return f"{self.span[0]}:{self.span[1]}: {self.message}"


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Not, Freeze) + UNARY_TEMPORAL):
        return (f.sub,)
    if isinstance(f, (And, Or, Implies) + BINARY_TEMPORAL):
        return (f.left, f.right)
    return ()


def subformulae(f: Formula) -> Iterator[Formula]:
    """Yields f and every node below it, parents first."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def propositions(f: Formula) -> set[str]:
    return {g.name for g in subformulae(f) if isinstance(g, Prop)}


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, Rel):
        return {f.x, f.y}
    if isinstance(f, Abs):
        return {f.x}
    if isinstance(f, Cong):
        return {f.x, f.y}
    if isinstance(f, Freeze):
        return free_vars(f.sub) - {f.var}
    out: set[str] = set()
    for c in children(f):
        out |= free_vars(c)
    return out


def is_closed(f: Formula) -> bool:
    return not free_vars(f)


# ---------------------------------------------------------------------------
# Well-formedness


def check_wellformed(
    f: Formula,
    logic: Logic,
    spans: Optional[dict[int, tuple[int, int]]] = None,
) -> list[Diagnostic]:
    """Checks closedness, the absolute-constraint ban, and the per-logic
    operator restrictions.  Returns one diagnostic per violation; an empty
    list means the formula is accepted.
    """
    diags: list[Diagnostic] = []

    def span(node: Formula) -> Optional[tuple[int, int]]:
        return spans.get(id(node)) if spans else None

    def walk(node: Formula, bound_vars: frozenset[str]) -> None:
        if isinstance(node, Abs):
            diags.append(
                Diagnostic(
                    "absolute constraints are unsupported; only relative"
                    " constraints between frozen variables are allowed",
                    span(node),
                )
            )
        if isinstance(node, (Rel, Cong)):
            for v in (node.x, node.y):
                if v not in bound_vars:
                    diags.append(Diagnostic(f"unbound variable {v!r}", span(node)))
        if isinstance(node, Abs) and node.x not in bound_vars:
            diags.append(Diagnostic(f"unbound variable {node.x!r}", span(node)))
        if isinstance(node, Cong) and node.m < 1:
            diags.append(Diagnostic("congruence modulus must be >= 1", span(node)))
        if logic is Logic.TPTL:
            if isinstance(node, PAST_TEMPORAL):
                diags.append(
                    Diagnostic("past operators are not available in tptl mode", span(node))
                )
            if isinstance(node, WeakNext):
                diags.append(
                    Diagnostic("weak tomorrow is not available in tptl mode", span(node))
                )
            if isinstance(node, UNARY_TEMPORAL + BINARY_TEMPORAL) and node.bound is not None:
                diags.append(
                    Diagnostic("operator bounds are not available in tptl mode", span(node))
                )
        else:
            if isinstance(node, UNARY_TEMPORAL + BINARY_TEMPORAL) and node.bound is None:
                if any(free_vars(c) for c in children(node)):
                    diags.append(
                        Diagnostic(
                            "an unbounded operator is only allowed on closed operands",
                            span(node),
                        )
                    )
        if isinstance(node, Freeze):
            bound_vars = bound_vars | {node.var}
        for c in children(node):
            walk(c, bound_vars)

    walk(f, frozenset())
    return diags


# ---------------------------------------------------------------------------
# Alpha renaming and substitution


def alpha_rename(f: Formula) -> Formula:
    """Gives every freeze quantifier a fresh, globally unique variable."""
    counter = 0

    def go(node: Formula, env: dict[str, str]) -> Formula:
        nonlocal counter
        if isinstance(node, Freeze):
            fresh = f"_a{counter}"
            counter += 1
            return Freeze(fresh, go(node.sub, {**env, node.var: fresh}))
        if isinstance(node, Rel):
            return Rel(env.get(node.x, node.x), env.get(node.y, node.y), node.c)
        if isinstance(node, Abs):
            return Abs(env.get(node.x, node.x), node.c)
        if isinstance(node, Cong):
            return Cong(env.get(node.x, node.x), node.m, env.get(node.y, node.y), node.c)
        return map_children(node, lambda c: go(c, env))

    return go(f, {})


def substitute(f: Formula, old: str, new: str) -> Formula:
    """Replaces every free occurrence of variable ``old`` by ``new``.

    ``new`` must not be captured by a binder inside ``f``; the solver only
    calls this on alpha-renamed formulae where that cannot happen.
    """
    if isinstance(f, Freeze):
        if f.var == old:
            return f
        return Freeze(f.var, substitute(f.sub, old, new))
    if isinstance(f, Rel):
        return Rel(new if f.x == old else f.x, new if f.y == old else f.y, f.c)
    if isinstance(f, Abs):
        return Abs(new if f.x == old else f.x, f.c)
    if isinstance(f, Cong):
        return Cong(new if f.x == old else f.x, f.m, new if f.y == old else f.y, f.c)
    return map_children(f, lambda c: substitute(c, old, new))


def map_children(f: Formula, fn) -> Formula:
    if isinstance(f, Not):
        return Not(fn(f.sub))
    if isinstance(f, And):
        return And(fn(f.left), fn(f.right))
    if isinstance(f, Or):
        return Or(fn(f.left), fn(f.right))
    if isinstance(f, Implies):
        return Implies(fn(f.left), fn(f.right))
    if isinstance(f, Freeze):
        return Freeze(f.var, fn(f.sub))
    if isinstance(f, UNARY_TEMPORAL):
        return type(f)(f.bound, fn(f.sub))
    if isinstance(f, BINARY_TEMPORAL):
        return type(f)(f.bound, fn(f.left), fn(f.right))
    return f


# ---------------------------------------------------------------------------
# Negated normal form


def nnf(f: Formula) -> Formula:
    """Pushes negation down to proposition and constraint leaves.

    Implications are expanded.  Temporal negation uses the dual pairs:
    until/release, since/triggered, tomorrow/weak tomorrow (an unbounded
    tomorrow is its own dual because every state has a successor), and
    yesterday/weak yesterday.
    """
    if isinstance(f, Not):
        return _nnf_neg(f.sub)
    if isinstance(f, Implies):
        return Or(_nnf_neg(f.left), nnf(f.right))
    return map_children(f, nnf)


def _nnf_neg(f: Formula) -> Formula:
    if isinstance(f, TrueF):
        return FALSE
    if isinstance(f, FalseF):
        return TRUE
    if isinstance(f, (Prop,) + CONSTRAINTS):
        return Not(f)
    if isinstance(f, Not):
        return nnf(f.sub)
    if isinstance(f, And):
        return Or(_nnf_neg(f.left), _nnf_neg(f.right))
    if isinstance(f, Or):
        return And(_nnf_neg(f.left), _nnf_neg(f.right))
    if isinstance(f, Implies):
        return And(nnf(f.left), _nnf_neg(f.right))
    if isinstance(f, Freeze):
        return Freeze(f.var, _nnf_neg(f.sub))
    if isinstance(f, Next):
        if f.bound is None:
            return Next(None, _nnf_neg(f.sub))
        return WeakNext(f.bound, _nnf_neg(f.sub))
    if isinstance(f, WeakNext):
        if f.bound is None:
            return Next(None, _nnf_neg(f.sub))
        return Next(f.bound, _nnf_neg(f.sub))
    if isinstance(f, Prev):
        return WeakPrev(f.bound, _nnf_neg(f.sub))
    if isinstance(f, WeakPrev):
        return Prev(f.bound, _nnf_neg(f.sub))
    if isinstance(f, Until):
        return Release(f.bound, _nnf_neg(f.left), _nnf_neg(f.right))
    if isinstance(f, Release):
        return Until(f.bound, _nnf_neg(f.left), _nnf_neg(f.right))
    if isinstance(f, Since):
        return Triggered(f.bound, _nnf_neg(f.left), _nnf_neg(f.right))
    if isinstance(f, Triggered):
        return Since(f.bound, _nnf_neg(f.left), _nnf_neg(f.right))
    raise FormulaError(f"cannot negate {f!r}")


# ---------------------------------------------------------------------------
# Boolean simplification (used after shifting introduces true/false)


def simplify(f: Formula) -> Formula:
    """One bottom-up pass of true/false absorption.

    Applied when formulae are interned so that labels stay canonical:
    boolean absorption, x.true -> true, x.false -> false, plus the
    temporal absorptions that are sound over infinite timed sequences
    (e.g. an until whose right operand is false is false, a release
    whose right operand is true is true).  Without the temporal rules,
    shift-collapsed remnants defer forever and branches only die by
    pruning, which blows the tree up.
    """
    f = map_children(f, simplify)
    if isinstance(f, And):
        if isinstance(f.left, FalseF) or isinstance(f.right, FalseF):
            return FALSE
        if isinstance(f.left, TrueF):
            return f.right
        if isinstance(f.right, TrueF):
            return f.left
    if isinstance(f, Or):
        if isinstance(f.left, TrueF) or isinstance(f.right, TrueF):
            return TRUE
        if isinstance(f.left, FalseF):
            return f.right
        if isinstance(f.right, FalseF):
            return f.left
    if isinstance(f, Freeze) and isinstance(f.sub, (TrueF, FalseF)):
        return f.sub
    if isinstance(f, Not):
        if isinstance(f.sub, TrueF):
            return FALSE
        if isinstance(f.sub, FalseF):
            return TRUE
    if isinstance(f, (Until, Since)):
        if isinstance(f.right, (TrueF, FalseF)):
            return f.right
        if isinstance(f.left, FalseF):
            return f.right
    if isinstance(f, (Release, Triggered)):
        if isinstance(f.right, (TrueF, FalseF)):
            return f.right
        if isinstance(f.left, TrueF):
            return f.right
    if isinstance(f, (Next, WeakNext)):
        # a bounded hop carries a gap condition; only the definite cases fold
        if isinstance(f.sub, FalseF) and (f.bound is None or isinstance(f, Next)):
            return FALSE
        if isinstance(f.sub, TrueF) and (f.bound is None or isinstance(f, WeakNext)):
            return TRUE
    if isinstance(f, Prev) and isinstance(f.sub, FalseF):
        return FALSE
    if isinstance(f, WeakPrev) and isinstance(f.sub, TrueF):
        return TRUE
    return f


def trivial_truth(f: Formula) -> Optional[bool]:
    """Truth value of a formula that is decidable without any state: a
    truth constant, or a possibly negated single-variable constraint
    (``x <= x + c`` holds iff c >= 0, ``x == x + c mod m`` iff c is a
    multiple of m) under any freeze prefixes.  None when undecidable.
    """
    while isinstance(f, Freeze):
        f = f.sub
    neg = False
    while isinstance(f, Not):
        neg = not neg
        f = f.sub
        while isinstance(f, Freeze):
            f = f.sub
    if isinstance(f, TrueF):
        value = True
    elif isinstance(f, FalseF):
        value = False
    elif isinstance(f, Rel) and f.x == f.y:
        value = f.c >= 0
    elif isinstance(f, Cong) and f.x == f.y:
        value = f.c % f.m == 0
    else:
        return None
    return value != neg


# ---------------------------------------------------------------------------
# Per-step time bound


def delta_bound(f: Formula) -> int:
    """Largest per-step time increment the search has to consider.

    Computed as max(1, product over every constant occurrence k of
    max(|k|, 1)), where the occurrences are relative-constraint constants,
    congruence offsets and moduli, and finite operator bounds.  A safe
    over-approximation: larger values only widen the search.
    """
    factors: list[int] = []
    for g in subformulae(f):
        if isinstance(g, Rel):
            factors.append(max(abs(g.c), 1))
        elif isinstance(g, Abs):
            factors.append(max(abs(g.c), 1))
        elif isinstance(g, Cong):
            factors.append(max(abs(g.c), 1))
            factors.append(max(g.m, 1))
        elif isinstance(g, UNARY_TEMPORAL + BINARY_TEMPORAL) and g.bound is not None:
            factors.append(max(g.bound, 1))
    return max(1, math.prod(factors))


# ---------------------------------------------------------------------------
# Interning of closed formulae

ClosureFormulaId = int


def canonicalize(f: Formula) -> Formula:
    """Renames binders to a canonical numbering so that formulae equal up
    to binder names intern to the same id.  Congruence offsets are reduced
    into [0, m)."""

    counter = 0

    def go(node: Formula, env: dict[str, str]) -> Formula:
        nonlocal counter
        if isinstance(node, Freeze):
            name = f"_c{counter}"
            counter += 1
            return Freeze(name, go(node.sub, {**env, node.var: name}))
        if isinstance(node, Rel):
            return Rel(env.get(node.x, node.x), env.get(node.y, node.y), node.c)
        if isinstance(node, Abs):
            return Abs(env.get(node.x, node.x), node.c)
        if isinstance(node, Cong):
            return Cong(
                env.get(node.x, node.x), node.m, env.get(node.y, node.y), node.c % node.m
            )
        return map_children(node, lambda c: go(c, env))

    return go(f, {})


class Interner:
    """Append-only table mapping canonical closed formulae to dense ids.

    Formulae are simplified and binder-renamed before lookup, so two
    structurally equal inputs always receive the same id.  Inserts are
    guarded by a lock; lookups of existing entries are safe from any
    thread.
    """

    def __init__(self) -> None:
        self._by_formula: dict[Formula, int] = {}
        self._by_id: list[Formula] = []
        self._lock = threading.Lock()

    def intern(self, f: Formula) -> ClosureFormulaId:
        canon = canonicalize(simplify(f))
        hit = self._by_formula.get(canon)
        if hit is not None:
            return hit
        with self._lock:
            hit = self._by_formula.get(canon)
            if hit is not None:
                return hit
            fid = len(self._by_id)
            self._by_id.append(canon)
            self._by_formula[canon] = fid
            return fid

    def formula(self, fid: ClosureFormulaId) -> Formula:
        return self._by_id[fid]

    def __len__(self) -> int:
        return len(self._by_id)


def closure_children(fid: ClosureFormulaId, interner: Interner) -> set[ClosureFormulaId]:
    """Immediate decomposition successors of an interned closed formula.

    Successors of tomorrow/yesterday formulae are shift-indexed and are
    produced on demand by the shifter, not enumerated here.
    """
    f = interner.formula(fid)
    if not isinstance(f, Freeze):
        return set()
    x, body = f.var, f.sub
    out: set[ClosureFormulaId] = set()
    if isinstance(body, (And, Or)):
        out.add(interner.intern(Freeze(x, body.left)))
        out.add(interner.intern(Freeze(x, body.right)))
    elif isinstance(body, Freeze):
        out.add(interner.intern(Freeze(x, substitute(body.sub, body.var, x))))
    elif isinstance(body, (Until, Release)):
        out.add(interner.intern(Freeze(x, body.left)))
        out.add(interner.intern(Freeze(x, body.right)))
        out.add(interner.intern(Freeze(x, Next(None, body))))
    elif isinstance(body, Since):
        out.add(interner.intern(Freeze(x, body.left)))
        out.add(interner.intern(Freeze(x, body.right)))
        out.add(interner.intern(Freeze(x, Prev(None, body))))
    elif isinstance(body, Triggered):
        out.add(interner.intern(Freeze(x, body.left)))
        out.add(interner.intern(Freeze(x, body.right)))
        out.add(interner.intern(Freeze(x, WeakPrev(None, body))))
    return out


class Closure:
    """The set of formula ids reachable from a root; grown lazily as the
    search decomposes and shifts formulae.  Used as a debug check that
    every tableau label stays inside it."""

    def __init__(self, root: ClosureFormulaId) -> None:
        self.root = root
        self.ids: set[ClosureFormulaId] = {root}

    def add(self, fid: ClosureFormulaId) -> ClosureFormulaId:
        self.ids.add(fid)
        return fid

    def __contains__(self, fid: ClosureFormulaId) -> bool:
        return fid in self.ids
