"""Timed lasso models, the semantic evaluator, witness extraction, and
the brute-force search oracle.

The evaluator implements the satisfaction relation directly over
ultimately periodic timed state sequences, with explicit environments.
Unbounded future operators are decided by scanning to a saturation
horizon: past that point every timing constraint against the already
bound variables is decided and the word is periodic, so a missing
witness within one extra period is missing for good.  Bounded operators
and past operators are decided by finite scans.  None of this shares
code with the solver's shift machinery, so it can serve as an
independent check of the solver's verdicts.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Optional

from .formula import (
    FALSE,
    Abs,
    And,
    ClosureFormulaId,
    Cong,
    FalseF,
    Formula,
    FormulaError,
    Freeze,
    Implies,
    Interner,
    Next,
    Not,
    Or,
    Prev,
    Prop,
    Rel,
    Release,
    Since,
    Triggered,
    TrueF,
    Until,
    WeakNext,
    WeakPrev,
    nnf,
    propositions,
    subformulae,
    substitute,
    trivial_truth,
    BINARY_TEMPORAL,
    UNARY_TEMPORAL,
)
from .shift import Shifter


class ModelError(ValueError):
    pass


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class TimedLassoModel:
    """Ultimately periodic timed state sequence.

    ``states`` holds the prefix and the first traversal of the loop;
    ``loop_start`` indexes the first looping state; each further
    traversal replays the loop states with timestamps advanced by
    ``loop_advance``.
    """

    states: tuple[tuple[frozenset[str], int], ...]
    loop_start: int
    loop_advance: int

    def __post_init__(self) -> None:
        if not self.states:
            raise ModelError("a model needs at least one state")
        if not 0 <= self.loop_start < len(self.states):
            raise ModelError("loop start out of range")
        times = [t for _, t in self.states]
        if any(b < a for a, b in zip(times, times[1:])):
            raise ModelError("timestamps must be monotone")
        if self.loop_advance < 1:
            raise ModelError("the loop must advance time")
        wrap = self.loop_advance - (times[-1] - times[self.loop_start])
        if wrap < 0:
            raise ModelError("loop advance smaller than the loop span")

    @property
    def loop_length(self) -> int:
        return len(self.states) - self.loop_start

    def _map(self, i: int) -> tuple[int, int]:
        """Maps a position to (state index, traversal count)."""
        if i < len(self.states):
            return i, 0
        off = i - self.loop_start
        return self.loop_start + off % self.loop_length, off // self.loop_length

    def letters(self, i: int) -> frozenset[str]:
        j, _ = self._map(i)
        return self.states[j][0]

    def time(self, i: int) -> int:
        j, q = self._map(i)
        return self.states[j][1] + q * self.loop_advance

    def max_time(self) -> int:
        return self.states[-1][1]


def model_to_json(m: TimedLassoModel) -> dict:
    def block(states):
        return [{"letters": sorted(ls), "time": t} for ls, t in states]

    return {
        "prefix": block(m.states[: m.loop_start]),
        "loop": block(m.states[m.loop_start :]),
        "loop_advance": m.loop_advance,
    }


def model_from_json(data: dict) -> TimedLassoModel:
    states = tuple(
        (frozenset(s["letters"]), int(s["time"]))
        for s in itertools.chain(data["prefix"], data["loop"])
    )
    return TimedLassoModel(states, len(data["prefix"]), int(data["loop_advance"]))


# ---------------------------------------------------------------------------
# Exact evaluation


def evaluate_env(
    model: TimedLassoModel, i: int, f: Formula, env: dict[str, int]
) -> bool:
    """Satisfaction of ``f`` at position ``i`` under environment ``env``
    (variables to timestamps).  Raises EvaluationError if ``env`` misses a
    free variable of ``f``."""
    return _Evaluator(model, f).eval(f, i, tuple(sorted(env.items())))


def evaluate(model: TimedLassoModel, i: int, f: Formula) -> bool:
    """Satisfaction of a closed formula; ``evaluate(m, 0, f)`` is model
    acceptance."""
    return evaluate_env(model, i, f, {})


def _constants(f: Formula) -> tuple[int, int]:
    """(largest constant magnitude, lcm of congruence moduli)."""
    c, m = 0, 1
    for g in subformulae(f):
        if isinstance(g, Rel):
            c = max(c, abs(g.c))
        elif isinstance(g, Abs):
            c = max(c, abs(g.c))
        elif isinstance(g, Cong):
            c = max(c, abs(g.c))
            m = math.lcm(m, g.m)
        elif isinstance(g, UNARY_TEMPORAL + BINARY_TEMPORAL) and g.bound is not None:
            c = max(c, g.bound)
    return c, m


class _Evaluator:
    def __init__(self, model: TimedLassoModel, f: Formula) -> None:
        self.model = model
        self.cmax, mods = _constants(f)
        d = model.loop_advance
        # positions after which the suffix repeats with matching congruence
        # residues
        self.period = model.loop_length * (mods // math.gcd(d, mods))
        self.memo: dict[tuple[int, int, tuple], bool] = {}

    def _env_get(self, env: tuple, var: str) -> int:
        for k, v in env:
            if k == var:
                return v
        raise EvaluationError(f"environment does not bind {var!r}")

    def _horizon(self, i: int, env: tuple) -> int:
        """Last position an unbounded future scan needs to inspect."""
        base = max([v for _, v in env], default=0)
        base = max(base, self.model.max_time()) + self.cmax + 1
        j = max(i, self.model.loop_start)
        while self.model.time(j) <= base:
            j += 1
        return j + 2 * self.period

    def eval(self, f: Formula, i: int, env: tuple) -> bool:
        key = (id(f), i, env)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out = self._eval(f, i, env)
        self.memo[key] = out
        return out

    def _eval(self, f: Formula, i: int, env: tuple) -> bool:
        m = self.model
        if isinstance(f, Prop):
            return f.name in m.letters(i)
        if isinstance(f, TrueF):
            return True
        if isinstance(f, FalseF):
            return False
        if isinstance(f, Not):
            return not self.eval(f.sub, i, env)
        if isinstance(f, And):
            return self.eval(f.left, i, env) and self.eval(f.right, i, env)
        if isinstance(f, Or):
            return self.eval(f.left, i, env) or self.eval(f.right, i, env)
        if isinstance(f, Implies):
            return not self.eval(f.left, i, env) or self.eval(f.right, i, env)
        if isinstance(f, Freeze):
            inner = tuple(sorted([(k, v) for k, v in env if k != f.var] + [(f.var, m.time(i))]))
            return self.eval(f.sub, i, inner)
        if isinstance(f, Rel):
            return self._env_get(env, f.x) <= self._env_get(env, f.y) + f.c
        if isinstance(f, Abs):
            return self._env_get(env, f.x) <= f.c
        if isinstance(f, Cong):
            return (self._env_get(env, f.x) - self._env_get(env, f.y) - f.c) % f.m == 0
        if isinstance(f, Next):
            if f.bound is not None and m.time(i + 1) - m.time(i) > f.bound:
                return False
            return self.eval(f.sub, i + 1, env)
        if isinstance(f, WeakNext):
            if f.bound is not None and m.time(i + 1) - m.time(i) > f.bound:
                return True
            return self.eval(f.sub, i + 1, env)
        if isinstance(f, Prev):
            if i == 0:
                return False
            if f.bound is not None and m.time(i) - m.time(i - 1) > f.bound:
                return False
            return self.eval(f.sub, i - 1, env)
        if isinstance(f, WeakPrev):
            if i == 0:
                return True
            if f.bound is not None and m.time(i) - m.time(i - 1) > f.bound:
                return True
            return self.eval(f.sub, i - 1, env)
        if isinstance(f, Until):
            limit = self._horizon(i, env) if f.bound is None else None
            j = i
            while True:
                if f.bound is not None and m.time(j) - m.time(i) > f.bound:
                    return False
                if limit is not None and j > limit:
                    return False
                if self.eval(f.right, j, env):
                    return True
                if not self.eval(f.left, j, env):
                    return False
                j += 1
        if isinstance(f, Release):
            limit = self._horizon(i, env) if f.bound is None else None
            j = i
            while True:
                if f.bound is not None and m.time(j) - m.time(i) > f.bound:
                    return True
                if limit is not None and j > limit:
                    return True
                if not self.eval(f.right, j, env):
                    return False
                if self.eval(f.left, j, env):
                    return True
                j += 1
        if isinstance(f, Since):
            for j in range(i, -1, -1):
                if f.bound is not None and m.time(i) - m.time(j) > f.bound:
                    return False
                if self.eval(f.right, j, env):
                    return True
                if not self.eval(f.left, j, env):
                    return False
            return False
        if isinstance(f, Triggered):
            for j in range(i, -1, -1):
                if f.bound is not None and m.time(i) - m.time(j) > f.bound:
                    return True
                if not self.eval(f.right, j, env):
                    return False
                if self.eval(f.left, j, env):
                    return True
            return True
        raise FormulaError(f"cannot evaluate {f!r}")


# ---------------------------------------------------------------------------
# Naive unrolling evaluation (cross-check oracle)


def default_horizon(model: TimedLassoModel, f: Formula) -> int:
    """Window size covering the scans the exact evaluator can perform on
    small inputs: enough loop traversals to exceed every constant and the
    congruence-residue cycle, with slack for nesting."""
    cmax, mods = _constants(f)
    d = model.loop_advance
    per = mods // math.gcd(d, mods)
    depth = sum(1 for _ in subformulae(f))
    burn = (model.max_time() + (cmax + 1) * (depth + 2)) // d + 1
    return len(model.states) + model.loop_length * (burn + 2 * per + 2)


def unroll_evaluate(
    model: TimedLassoModel, i: int, f: Formula, horizon: Optional[int] = None
) -> bool:
    """Decides satisfaction by brute scanning: unbounded untils that find
    no witness before the horizon count as false, unbounded releases that
    see no violation up to it count as true.  Next and yesterday read the
    lasso directly, so only the fixpoint cut-off is approximate; with the
    default horizon this agrees with :func:`evaluate` and serves as its
    independently coded cross-check."""
    h = default_horizon(model, f) if horizon is None else horizon
    return _Naive(model, h).eval(f, i, ())


class _Naive:
    def __init__(self, model: TimedLassoModel, horizon: int) -> None:
        self.model = model
        self.h = horizon
        self.memo: dict[tuple[int, int, tuple], bool] = {}

    def _env_get(self, env: tuple, var: str) -> int:
        for k, v in env:
            if k == var:
                return v
        raise EvaluationError(f"environment does not bind {var!r}")

    def eval(self, f: Formula, i: int, env: tuple) -> bool:
        key = (id(f), i, env)
        hit = self.memo.get(key)
        if hit is None:
            hit = self._eval(f, i, env)
            self.memo[key] = hit
        return hit

    def _eval(self, f: Formula, i: int, env: tuple) -> bool:
        m = self.model
        if isinstance(f, Prop):
            return f.name in m.letters(i)
        if isinstance(f, TrueF):
            return True
        if isinstance(f, FalseF):
            return False
        if isinstance(f, Not):
            return not self.eval(f.sub, i, env)
        if isinstance(f, And):
            return self.eval(f.left, i, env) and self.eval(f.right, i, env)
        if isinstance(f, Or):
            return self.eval(f.left, i, env) or self.eval(f.right, i, env)
        if isinstance(f, Implies):
            return not self.eval(f.left, i, env) or self.eval(f.right, i, env)
        if isinstance(f, Freeze):
            inner = tuple(
                sorted([(k, v) for k, v in env if k != f.var] + [(f.var, m.time(i))])
            )
            return self.eval(f.sub, i, inner)
        if isinstance(f, Rel):
            return self._env_get(env, f.x) <= self._env_get(env, f.y) + f.c
        if isinstance(f, Abs):
            return self._env_get(env, f.x) <= f.c
        if isinstance(f, Cong):
            return (self._env_get(env, f.x) - self._env_get(env, f.y) - f.c) % f.m == 0
        if isinstance(f, Next):
            if f.bound is not None and m.time(i + 1) - m.time(i) > f.bound:
                return False
            return self.eval(f.sub, i + 1, env)
        if isinstance(f, WeakNext):
            if f.bound is not None and m.time(i + 1) - m.time(i) > f.bound:
                return True
            return self.eval(f.sub, i + 1, env)
        if isinstance(f, Prev):
            if i == 0 or (f.bound is not None and m.time(i) - m.time(i - 1) > f.bound):
                return False
            return self.eval(f.sub, i - 1, env)
        if isinstance(f, WeakPrev):
            if i == 0 or (f.bound is not None and m.time(i) - m.time(i - 1) > f.bound):
                return True
            return self.eval(f.sub, i - 1, env)
        if isinstance(f, Until):
            for j in range(i, self.h + 1):
                if f.bound is not None and m.time(j) - m.time(i) > f.bound:
                    return False
                if self.eval(f.right, j, env):
                    return True
                if not self.eval(f.left, j, env):
                    return False
            return False
        if isinstance(f, Release):
            for j in range(i, self.h + 1):
                if f.bound is not None and m.time(j) - m.time(i) > f.bound:
                    return True
                if not self.eval(f.right, j, env):
                    return False
                if self.eval(f.left, j, env):
                    return True
            return True
        if isinstance(f, Since):
            for j in range(i, -1, -1):
                if f.bound is not None and m.time(i) - m.time(j) > f.bound:
                    return False
                if self.eval(f.right, j, env):
                    return True
                if not self.eval(f.left, j, env):
                    return False
            return False
        if isinstance(f, Triggered):
            for j in range(i, -1, -1):
                if f.bound is not None and m.time(i) - m.time(j) > f.bound:
                    return True
                if not self.eval(f.right, j, env):
                    return False
                if self.eval(f.left, j, env):
                    return True
            return True
        raise FormulaError(f"cannot evaluate {f!r}")


# ---------------------------------------------------------------------------
# Brute-force model search


def bounded_model_search(
    f: Formula, max_states: int, max_delta: int
) -> Optional[TimedLassoModel]:
    """Exhaustively enumerates lasso models over the propositions of ``f``
    with at most ``max_states`` states and per-step time increments up to
    ``max_delta``, and returns the first one accepted by the evaluator.
    One-sided: returning None does not prove unsatisfiability."""
    g = nnf(f)  # candidates are pre-screened optimistically, which needs NNF
    props = sorted(propositions(f))
    letter_choices = [
        frozenset(s) for r in range(len(props) + 1) for s in itertools.combinations(props, r)
    ]
    for n in range(1, max_states + 1):
        for gaps in itertools.product(range(max_delta + 1), repeat=n - 1):
            times = [0]
            for gap in gaps:
                times.append(times[-1] + gap)
            for loop_start in range(n):
                for wrap in range(max_delta + 1):
                    advance = times[-1] - times[loop_start] + wrap
                    if advance < 1:
                        continue
                    for letters in itertools.product(letter_choices, repeat=n):
                        model = TimedLassoModel(
                            tuple(zip(letters, times)), loop_start, advance
                        )
                        if _optimistic(model, g, 0, (), n + 2 * (n - loop_start) + 2) and evaluate(
                            model, 0, f
                        ):
                            return model
    return None


def _optimistic(m: TimedLassoModel, f: Formula, i: int, env: tuple, h: int) -> bool:
    """Cheap upper bound on satisfaction for formulae in negated normal
    form: fixpoint scans cut off optimistically, so a False is definite
    and screens the candidate out before the exact evaluation runs."""
    if isinstance(f, Prop):
        return f.name in m.letters(i)
    if isinstance(f, TrueF):
        return True
    if isinstance(f, FalseF):
        return False
    if isinstance(f, Not):
        return not _pessimistic_leaf(m, f.sub, i, env)
    if isinstance(f, And):
        return _optimistic(m, f.left, i, env, h) and _optimistic(m, f.right, i, env, h)
    if isinstance(f, Or):
        return _optimistic(m, f.left, i, env, h) or _optimistic(m, f.right, i, env, h)
    if isinstance(f, Freeze):
        return _optimistic(m, f.sub, i, env + ((f.var, m.time(i)),), h)
    if isinstance(f, (Rel, Abs, Cong)):
        return _constraint_value(f, env)
    if isinstance(f, Next):
        if f.bound is not None and m.time(i + 1) - m.time(i) > f.bound:
            return False
        return _optimistic(m, f.sub, i + 1, env, h)
    if isinstance(f, WeakNext):
        if f.bound is not None and m.time(i + 1) - m.time(i) > f.bound:
            return True
        return _optimistic(m, f.sub, i + 1, env, h)
    if isinstance(f, Prev):
        if i == 0 or (f.bound is not None and m.time(i) - m.time(i - 1) > f.bound):
            return False
        return _optimistic(m, f.sub, i - 1, env, h)
    if isinstance(f, WeakPrev):
        if i == 0 or (f.bound is not None and m.time(i) - m.time(i - 1) > f.bound):
            return True
        return _optimistic(m, f.sub, i - 1, env, h)
    if isinstance(f, Until):
        for j in range(i, i + h):
            if f.bound is not None and m.time(j) - m.time(i) > f.bound:
                return False
            if _optimistic(m, f.right, j, env, h):
                return True
            if not _optimistic(m, f.left, j, env, h):
                return False
        return True  # undecided within the window: optimistic
    if isinstance(f, Release):
        for j in range(i, i + h):
            if f.bound is not None and m.time(j) - m.time(i) > f.bound:
                return True
            if not _optimistic(m, f.right, j, env, h):
                return False
            if _optimistic(m, f.left, j, env, h):
                return True
        return True
    if isinstance(f, Since):
        for j in range(i, -1, -1):
            if f.bound is not None and m.time(i) - m.time(j) > f.bound:
                return False
            if _optimistic(m, f.right, j, env, h):
                return True
            if not _optimistic(m, f.left, j, env, h):
                return False
        return False
    if isinstance(f, Triggered):
        for j in range(i, -1, -1):
            if f.bound is not None and m.time(i) - m.time(j) > f.bound:
                return True
            if not _optimistic(m, f.right, j, env, h):
                return False
            if _optimistic(m, f.left, j, env, h):
                return True
        return True
    raise FormulaError(f"cannot evaluate {f!r}")


def _pessimistic_leaf(m: TimedLassoModel, f: Formula, i: int, env: tuple) -> bool:
    # NNF puts negation only on propositions and constraints
    if isinstance(f, Prop):
        return f.name in m.letters(i)
    if isinstance(f, (Rel, Abs, Cong)):
        return _constraint_value(f, env)
    raise FormulaError("optimistic screening expects negated normal form")


def _constraint_value(f: Formula, env: tuple) -> bool:
    def get(var: str) -> int:
        for k, v in env:
            if k == var:
                return v
        raise EvaluationError(f"environment does not bind {var!r}")

    if isinstance(f, Rel):
        return get(f.x) <= get(f.y) + f.c
    if isinstance(f, Abs):
        return get(f.x) <= f.c
    return (get(f.x) - get(f.y) - f.c) % f.m == 0


# ---------------------------------------------------------------------------
# Witness extraction from accepted branches


@dataclass(frozen=True)
class SegmentView:
    """One state of an accepted branch: a step node's label, its
    timestamp, and the union of the labels over its segment."""

    node_id: int
    label: frozenset[ClosureFormulaId]
    time: int
    union: frozenset[ClosureFormulaId]


@dataclass
class BranchTrace:
    """Step-node view of an accepted branch; the ticked leaf is the last
    segment.  ``anchor`` is the loop anchor segment for a loop-accepted
    branch and None for an empty-label acceptance."""

    segments: list[SegmentView]
    rule: str  # 'EMPTY' or 'LOOP2'
    anchor: Optional[int]
    interner: Interner


def _segment_letters(seg: SegmentView, interner: Interner) -> frozenset[str]:
    out = set()
    for fid in seg.union:
        g = interner.formula(fid)
        if isinstance(g, Freeze) and isinstance(g.sub, Prop):
            out.add(g.sub.name)
        elif isinstance(g, Prop):
            out.add(g.name)
    return frozenset(out)


def extract_model(trace: BranchTrace) -> TimedLassoModel:
    """Builds the witness model: one state per segment (letters are the
    propositions committed in the segment, everything else false), plus
    either a repetition of the loop segments or an empty tail advancing
    one time unit per state."""
    states = [
        (_segment_letters(seg, trace.interner), seg.time) for seg in trace.segments
    ]
    if trace.rule == "EMPTY":
        states.append((frozenset(), states[-1][1] + 1))
        return TimedLassoModel(tuple(states), len(states) - 1, 1)
    if trace.rule == "LOOP2":
        assert trace.anchor is not None
        advance = trace.segments[-1].time - trace.segments[trace.anchor].time
        return TimedLassoModel(tuple(states), trace.anchor + 1, advance)
    raise ModelError(f"not an accepting rule: {trace.rule}")


# ---------------------------------------------------------------------------
# Atoms and pre-models

Norm = Callable[[ClosureFormulaId], ClosureFormulaId]


def _identity(fid: ClosureFormulaId) -> ClosureFormulaId:
    return fid


def _decomposable(f: Formula) -> bool:
    if not isinstance(f, Freeze):
        return False
    return isinstance(f.sub, (And, Or, Until, Release, Since, Triggered, Freeze))


def _justified(
    fid: ClosureFormulaId, atom: frozenset[int] | set[int], interner: Interner, norm: Norm
) -> bool:
    """Whether the elementary/step content of ``atom`` licenses ``fid``
    under the saturation conditions."""
    f = interner.formula(fid)
    if not isinstance(f, Freeze):
        return False
    x, body = f.var, f.sub

    def part(g: Formula) -> bool:
        pid = norm(interner.intern(Freeze(x, g)))
        return pid in atom or trivial_truth(interner.formula(pid)) is True

    if isinstance(body, And):
        return part(body.left) and part(body.right)
    if isinstance(body, Or):
        return part(body.left) or part(body.right)
    if isinstance(body, Until):
        return part(body.right) or (part(body.left) and part(Next(None, body)))
    if isinstance(body, Release):
        return (part(body.left) and part(body.right)) or (
            part(body.right) and part(Next(None, body))
        )
    if isinstance(body, Since):
        return part(body.right) or (part(body.left) and part(Prev(None, body)))
    if isinstance(body, Triggered):
        return (part(body.left) and part(body.right)) or (
            part(body.right) and part(WeakPrev(None, body))
        )
    if isinstance(body, Freeze):
        return part(substitute(body.sub, body.var, x))
    return False


def complete_atom(
    label: frozenset[ClosureFormulaId],
    interner: Interner,
    props: set[str],
    norm: Norm = _identity,
) -> frozenset[ClosureFormulaId]:
    """Closes a step-node label into an atom: unmentioned propositions are
    completed negatively, and every formula the content justifies is
    added, to a fixpoint."""
    atom = {norm(fid) for fid in label}
    for p in props:
        pos = norm(interner.intern(Freeze("_v", Prop(p))))
        neg = norm(interner.intern(Freeze("_v", Not(Prop(p)))))
        if pos not in atom and neg not in atom:
            atom.add(neg)
    changed = True
    while changed:
        changed = False
        for fid in range(len(interner)):
            if fid in atom:
                continue
            nf = norm(fid)
            if nf in atom:
                continue
            if _decomposable(interner.formula(nf)) and _justified(nf, atom, interner, norm):
                atom.add(nf)
                changed = True
    return frozenset(atom)


def is_atom(
    atom: frozenset[ClosureFormulaId], interner: Interner, norm: Norm = _identity
) -> bool:
    """Saturation check: literals are consistent, every decomposable
    member is licensed by its parts, and every decomposable formula of the
    known closure that is licensed is present."""
    pos, neg = set(), set()
    for fid in atom:
        f = interner.formula(fid)
        if isinstance(f, FalseF):
            return False
        core = f
        while isinstance(core, Freeze):
            core = core.sub
        if isinstance(core, Prop):
            pos.add(core.name)
        elif isinstance(core, Not) and isinstance(core.sub, Prop):
            neg.add(core.sub.name)
    if pos & neg:
        return False
    for fid in range(len(interner)):
        nf = norm(fid)
        if not _decomposable(interner.formula(nf)):
            continue
        if (nf in atom) != _justified(nf, atom, interner, norm):
            return False
    return True


@dataclass(frozen=True)
class AtomSequence:
    """Lasso-shaped sequence of atoms with timestamps; the loop repeats
    with timestamps advanced by ``loop_advance`` per traversal."""

    atoms: tuple[frozenset[ClosureFormulaId], ...]
    times: tuple[int, ...]
    loop_start: int
    loop_advance: int

    def _map(self, i: int) -> tuple[int, int]:
        if i < len(self.atoms):
            return i, 0
        length = len(self.atoms) - self.loop_start
        off = i - self.loop_start
        return self.loop_start + off % length, off // length

    def atom(self, i: int) -> frozenset[ClosureFormulaId]:
        j, _ = self._map(i)
        return self.atoms[j]

    def time(self, i: int) -> int:
        j, q = self._map(i)
        return self.times[j] + q * self.loop_advance

    def pos_class(self, i: int) -> int:
        j, _ = self._map(i)
        return j


def atoms_from_trace(trace: BranchTrace, shifter: Shifter, props: set[str]) -> AtomSequence:
    """Atom sequence the accepted branch stands for: completed step-node
    labels, in shift-normal form, with the tail dictated by the accepting
    rule."""
    norm: Norm = lambda fid: shifter.shift(fid, 0)
    interner = trace.interner
    atoms = [
        complete_atom(seg.label, interner, props, norm) for seg in trace.segments
    ]
    times = [seg.time for seg in trace.segments]
    if trace.rule == "EMPTY":
        atoms.append(complete_atom(frozenset(), interner, props, norm))
        times.append(times[-1] + 1)
        return AtomSequence(tuple(atoms), tuple(times), len(atoms) - 1, 1)
    assert trace.anchor is not None
    advance = times[-1] - times[trace.anchor]
    return AtomSequence(tuple(atoms), tuple(times), trace.anchor + 1, advance)


def check_premodel(
    seq: AtomSequence, root: ClosureFormulaId, shifter: Shifter
) -> bool:
    """Checks the abstract-model conditions over the lasso: the root is in
    the first atom, tomorrow formulae propagate shifted into the next
    atom, yesterday formulae shifted into the previous, and until/since
    members reach a shifted witness.  Forward witness scans stop when the
    scan state (lasso position plus shifted operand pair) repeats, which
    is exact because shifting is additive."""
    interner = shifter.interner

    def holds(atom: frozenset[int], fid: ClosureFormulaId) -> bool:
        tv = trivial_truth(interner.formula(fid))
        if tv is not None:
            return tv
        return fid in atom

    if not holds(seq.atom(0), shifter.shift(root, 0)):
        return False

    member_ids = {fid for atom in seq.atoms for fid in atom}
    cb = max((shifter.convergence_bound(fid) for fid in member_ids), default=0)
    per = 1
    for fid in member_ids:
        per = math.lcm(per, shifter.period(fid))
    d = seq.loop_advance
    length = len(seq.atoms) - seq.loop_start
    burn = cb // d + 1
    n_per = per // math.gcd(d, per)
    limit = len(seq.atoms) + (burn + 2 * n_per + 2) * length

    def until_ok(i: int, x: str, body: Until) -> bool:
        qa = shifter.shift(interner.intern(Freeze(x, body.left)), 0)
        qb = shifter.shift(interner.intern(Freeze(x, body.right)), 0)
        seen = set()
        j = i
        while True:
            if holds(seq.atom(j), qb):
                return True
            if not holds(seq.atom(j), qa):
                return False
            state = (seq.pos_class(j), qa, qb)
            if state in seen:
                return False
            seen.add(state)
            gap = seq.time(j + 1) - seq.time(j)
            qa = shifter.shift(qa, gap)
            qb = shifter.shift(qb, gap)
            j += 1

    def since_ok(i: int, x: str, body: Since) -> bool:
        for j in range(i, -1, -1):
            delta = seq.time(i) - seq.time(j)
            if holds(seq.atom(j), shifter.shift(interner.intern(Freeze(x, body.right)), -delta)):
                return True
            if not holds(seq.atom(j), shifter.shift(interner.intern(Freeze(x, body.left)), -delta)):
                return False
        return False

    for i in range(limit):
        atom = seq.atom(i)
        for fid in atom:
            f = interner.formula(fid)
            if not isinstance(f, Freeze):
                continue
            x, body = f.var, f.sub
            if isinstance(body, Next) and body.bound is None:
                gap = seq.time(i + 1) - seq.time(i)
                q = shifter.shift(interner.intern(Freeze(x, body.sub)), gap)
                if not holds(seq.atom(i + 1), q):
                    return False
            elif isinstance(body, Prev) and body.bound is None:
                if i == 0:
                    return False
                gap = seq.time(i) - seq.time(i - 1)
                q = shifter.shift(interner.intern(Freeze(x, body.sub)), -gap)
                if not holds(seq.atom(i - 1), q):
                    return False
            elif isinstance(body, WeakPrev) and body.bound is None:
                if i > 0:
                    gap = seq.time(i) - seq.time(i - 1)
                    q = shifter.shift(interner.intern(Freeze(x, body.sub)), -gap)
                    if not holds(seq.atom(i - 1), q):
                        return False
            elif isinstance(body, Until) and body.bound is None:
                if not until_ok(i, x, body):
                    return False
            elif isinstance(body, Since) and body.bound is None:
                if not since_ok(i, x, body):
                    return False
    return True
