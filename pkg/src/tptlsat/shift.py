"""Time-shift rewriting of closed formulae.

``shift(f, d)`` rewrites a closed formula ``x.body`` so that it means
"body, with x bound to a timestamp d time units in the past".  Constraints
relating the outer variable to another variable absorb the shift into
their constant; constants that grow past the point where the constraint
is decided collapse to true/false, which keeps the set of shifted
variants of any formula finite.

Two variants exist.  The future-only variant decides a constraint as soon
as its sign does (every other variable is bound at the current state or
later), and only accepts non-negative shifts.  The guarded variant works
for formulae with past operators: it decides constraints against a window
``W`` within which any two frozen timestamps must fall, and accepts
shifts in both directions.
"""

from __future__ import annotations

import math
import threading
from enum import Enum
from typing import Optional, Sequence

from .formula import (
    FALSE,
    TRUE,
    ClosureFormulaId,
    Cong,
    Formula,
    Freeze,
    Interner,
    Next,
    Prev,
    Rel,
    Release,
    Since,
    Triggered,
    Until,
    WeakNext,
    WeakPrev,
    children,
    map_children,
    subformulae,
)

_FUTURE_OPS = (Next, WeakNext, Until, Release)
_PAST_OPS = (Prev, WeakPrev, Since, Triggered)


def _binder_directions(body: Formula) -> dict[str, str]:
    """Temporal direction of every freeze binder relative to the root:
    'none' (same state), 'future', 'past', or 'mixed'.  A variable bound
    on a future-only path can never be frozen before the root state, so
    constraints against it are decidable by sign alone; same mirrored for
    past-only paths."""
    out: dict[str, str] = {}

    def join(a: str, b: str) -> str:
        if a == "none" or a == b:
            return b
        return "mixed"

    def walk(node: Formula, direction: str) -> None:
        if isinstance(node, Freeze):
            out[node.var] = direction
            walk(node.sub, direction)
            return
        if isinstance(node, _FUTURE_OPS):
            step = join(direction, "future")
        elif isinstance(node, _PAST_OPS):
            step = join(direction, "past")
        else:
            step = direction
        for child in children(node):
            walk(child, step)

    walk(body, "none")
    return out


class ShiftVariant(Enum):
    TPTL = "tptl"
    GTPTLP = "gtptlp"


class ShiftDomainError(ValueError):
    pass


def window(guard_bounds: Sequence[int], delta: int) -> int:
    """Window within which the two sides of any timing constraint of a
    guarded formula must fall: max of the guard bounds and the per-step
    bound, times the guarded-operator count plus one."""
    m = len(guard_bounds)
    w0 = max([delta, *guard_bounds])
    return w0 * (m + 1)


class Shifter:
    """Memoizing shift operator over interned formulae.

    The memo table is append-only; reads are safe from any thread and
    inserts are idempotent, so repeated calls always return the same id.
    """

    def __init__(
        self,
        interner: Interner,
        variant: ShiftVariant,
        window: Optional[int] = None,
    ) -> None:
        if variant is ShiftVariant.GTPTLP and window is None:
            raise ValueError("the guarded variant needs a window")
        self.interner = interner
        self.variant = variant
        self.window = window
        self._memo: dict[tuple[ClosureFormulaId, int], ClosureFormulaId] = {}
        self._lock = threading.Lock()

    def shift(self, fid: ClosureFormulaId, delta: int) -> ClosureFormulaId:
        if self.variant is ShiftVariant.TPTL and delta < 0:
            raise ShiftDomainError("the future-only variant cannot shift backwards")
        key = (fid, delta)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        f = self.interner.formula(fid)
        if isinstance(f, Freeze):
            dirs = _binder_directions(f.sub)
            shifted = Freeze(f.var, self._rewrite(f.sub, f.var, delta, dirs))
        else:
            shifted = f  # no outer variable, nothing to rewrite
        out = self.interner.intern(shifted)
        with self._lock:
            self._memo.setdefault(key, out)
        return out

    def _rewrite(self, node: Formula, x: str, delta: int, dirs: dict[str, str]) -> Formula:
        if isinstance(node, Rel):
            if node.x == x and node.y != x:
                return self._decide(
                    Rel(node.x, node.y, node.c + delta), True, dirs.get(node.y, "mixed"), delta
                )
            if node.y == x and node.x != x:
                return self._decide(
                    Rel(node.x, node.y, node.c - delta), False, dirs.get(node.x, "mixed"), delta
                )
            return node
        if isinstance(node, Cong):
            if node.x == x and node.y != x:
                return Cong(node.x, node.m, node.y, (node.c + delta) % node.m)
            if node.y == x and node.x != x:
                return Cong(node.x, node.m, node.y, (node.c - delta) % node.m)
            return node
        return map_children(node, lambda c: self._rewrite(c, x, delta, dirs))

    def _decide(self, rel: Rel, left_is_outer: bool, direction: str, delta: int) -> Formula:
        # The outer variable of the rewritten formula is bound at the
        # evaluation state; an inner variable on a future-only path is
        # never bound earlier than that, one on a past-only path never
        # later.  Constraints against those are decided by sign; the
        # window decides the mixed-direction rest (guarded formulae keep
        # any two bindings within it).  Each sign rule applies only in
        # the shift direction under which its verdict is stable, which
        # keeps same-sign shift compositions associative.
        future_ok = self.variant is ShiftVariant.TPTL or (
            delta >= 0 and direction in ("none", "future")
        )
        if future_ok:
            if left_is_outer and rel.c >= 0:
                return TRUE
            if not left_is_outer and rel.c < 0:
                return FALSE
        if self.variant is ShiftVariant.GTPTLP and delta < 0 and direction in ("none", "past"):
            if left_is_outer and rel.c < 0:
                return FALSE
            if not left_is_outer and rel.c >= 0:
                return TRUE
        if self.variant is ShiftVariant.GTPTLP:
            if rel.c >= self.window:
                return TRUE
            if rel.c < -self.window:
                return FALSE
        return rel

    # -- convergence -------------------------------------------------

    def convergence_bound(self, fid: ClosureFormulaId) -> int:
        """A shift amount past which further shifting changes nothing up
        to the congruence-residue cycle (see :meth:`period`): every
        constraint on the outer variable has collapsed by then."""
        f = self.interner.formula(fid)
        if not isinstance(f, Freeze):
            return 0
        cs = [
            abs(g.c)
            for g in subformulae(f.sub)
            if isinstance(g, Rel) and (g.x == f.var) != (g.y == f.var)
        ]
        has_cong = any(
            isinstance(g, Cong) and (g.x == f.var) != (g.y == f.var)
            for g in subformulae(f.sub)
        )
        if not cs and not has_cong:
            return 0
        base = max(cs, default=0) + 1
        if self.variant is ShiftVariant.GTPTLP:
            base += self.window
        return base

    def period(self, fid: ClosureFormulaId) -> int:
        """Least common multiple of the moduli of congruences on the outer
        variable; shifted variants repeat with this stride once the
        convergence bound is passed.  1 when there are none."""
        f = self.interner.formula(fid)
        if not isinstance(f, Freeze):
            return 1
        out = 1
        for g in subformulae(f.sub):
            if isinstance(g, Cong) and (g.x == f.var) != (g.y == f.var):
                out = math.lcm(out, g.m)
        return out
