"""One-pass tree tableau search.

A branch alternates expansion phases, which decompose the label of a node
until only elementary formulae remain, with step transitions that guess
the time increment to the next state and carry the tomorrow formulae
over, shifted by the guess.  Poised leaves are closed or accepted by the
termination rules, checked in the order: contradiction, constraint sync,
empty label, unmet yesterday obligations, loop acceptance/rejection, and
pruning of repeated label stretches that fulfil nothing new.

A poised leaf whose yesterday obligations are not covered by the previous
state's segment is crossed, and the missing obligations are replayed as
an extra child of the previous step node.  Those retry children are
attached lazily, after the step children of that node have all failed,
and are deduplicated by label so the tree stays finite.
"""

from __future__ import annotations

import sys
import threading
import time as time_mod
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from .formula import (
    Abs,
    And,
    ClosureFormulaId,
    Closure,
    Cong,
    FalseF,
    Formula,
    FormulaError,
    Freeze,
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
    substitute,
    trivial_truth,
)
from .model import BranchTrace, SegmentView, TimedLassoModel, extract_model
from .shift import Shifter
from .syntax import print_formula

_LITERAL_CORES = (Prop, Rel, Abs, Cong)
_STACK_SIZE = 128 * 1024 * 1024


@dataclass
class SolverConfig:
    delta_override: Optional[int] = None
    max_nodes: int = 1_000_000
    child_order: str = "asc-delta"  # or "desc-delta"
    threads: int = 1
    debug_checks: bool = False

    def __post_init__(self) -> None:
        if self.delta_override is not None and self.delta_override < 1:
            raise ValueError("delta override must be >= 1")
        if self.child_order not in ("asc-delta", "desc-delta"):
            raise ValueError(f"unknown child order {self.child_order!r}")


@dataclass
class TableauNode:
    id: int
    parent: Optional[int]
    label: frozenset[ClosureFormulaId]
    time: int
    bottom: bool = False
    step_delta: Optional[int] = None
    retry: bool = False
    poised: bool = False
    step: bool = False
    mark: Optional[tuple[str, str]] = None  # ('ticked'|'crossed', rule)
    children: list[int] = field(default_factory=list)


class Tableau:
    def __init__(self) -> None:
        self.nodes: list[TableauNode] = []

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, nid: int) -> TableauNode:
        return self.nodes[nid]


@dataclass(frozen=True)
class Segment:
    """A step node on the current branch: its label, timestamp, and the
    union of all labels over the stretch since the previous step node."""

    node_id: int
    label: frozenset[ClosureFormulaId]
    time: int
    union: frozenset[ClosureFormulaId]


class BranchContext:
    """Per-branch bookkeeping: the stack of step-node segments and a
    multiset of the labels on the stretch since the last step node."""

    def __init__(self) -> None:
        self.segments: list[Segment] = []
        self._counts: dict[ClosureFormulaId, int] = {}
        self._saved: list[dict[ClosureFormulaId, int]] = []
        self.depth = 0

    def push(self, label: frozenset[ClosureFormulaId]) -> None:
        for fid in label:
            self._counts[fid] = self._counts.get(fid, 0) + 1
        self.depth += 1

    def pop(self, label: frozenset[ClosureFormulaId]) -> None:
        for fid in label:
            n = self._counts[fid] - 1
            if n:
                self._counts[fid] = n
            else:
                del self._counts[fid]
        self.depth -= 1

    def union(self) -> frozenset[ClosureFormulaId]:
        return frozenset(self._counts)

    def push_segment(self, seg: Segment) -> None:
        self.segments.append(seg)
        self._saved.append(self._counts)
        self._counts = {}

    def pop_segment(self) -> None:
        self.segments.pop()
        self._counts = self._saved.pop()

    def clone(self) -> "BranchContext":
        out = BranchContext()
        out.segments = list(self.segments)
        out._counts = dict(self._counts)
        out._saved = [dict(d) for d in self._saved]
        out.depth = self.depth
        return out


@dataclass
class Verdict:
    outcome: str  # 'SAT' | 'UNSAT' | 'RESOURCE_EXHAUSTED'
    model: Optional[TimedLassoModel]
    trace: Optional[BranchTrace]
    stats: dict
    tableau: Tableau
    interner: Interner


@dataclass(frozen=True)
class _Retry:
    target: int
    label: frozenset[ClosureFormulaId]


class _Budget(Exception):
    pass


class _Cancelled(Exception):
    pass


class Engine:
    """Search engine over the interned closure of one root formula."""

    def __init__(
        self,
        interner: Interner,
        shifter: Shifter,
        delta: int,
        config: Optional[SolverConfig] = None,
    ) -> None:
        self.interner = interner
        self.shifter = shifter
        self.delta = delta
        self.config = config or SolverConfig()
        self.tableau = Tableau()
        self.closure: Optional[Closure] = None
        self.accepted: Optional[BranchTrace] = None
        self.rule_fires: Counter = Counter()
        self.stats = {
            "nodes_created": 0,
            "poised_nodes": 0,
            "step_applications": 0,
            "max_depth": 0,
        }
        self.cancel = threading.Event()
        self._lock = threading.Lock()
        self._trivial: dict[ClosureFormulaId, Optional[bool]] = {}
        self._elementary: dict[ClosureFormulaId, bool] = {}
        self._expansion: dict[ClosureFormulaId, tuple[str, list[tuple[int, ...]]]] = {}
        self._step_base: dict[ClosureFormulaId, ClosureFormulaId] = {}
        self._ev_parts: dict[ClosureFormulaId, tuple[int, int]] = {}

    # -- label helpers -------------------------------------------------

    def _truth(self, fid: ClosureFormulaId) -> Optional[bool]:
        if fid not in self._trivial:
            self._trivial[fid] = trivial_truth(self.interner.formula(fid))
        return self._trivial[fid]

    def normalize(
        self, ids
    ) -> tuple[frozenset[ClosureFormulaId], bool]:
        """Drops trivially true members; reports a trivially false one."""
        out = set()
        bottom = False
        for fid in ids:
            tv = self._truth(fid)
            if tv is True:
                continue
            if tv is False:
                bottom = True
                continue
            out.add(fid)
        return frozenset(out), bottom

    def holds(self, union: frozenset[ClosureFormulaId], fid: ClosureFormulaId) -> bool:
        tv = self._truth(fid)
        if tv is not None:
            return tv
        return fid in union

    def is_elementary(self, fid: ClosureFormulaId) -> bool:
        hit = self._elementary.get(fid)
        if hit is not None:
            return hit
        f = self.interner.formula(fid)
        if not isinstance(f, Freeze):
            raise FormulaError(f"label member without a freeze prefix: {f!r}")
        body = f.sub
        if isinstance(body, _LITERAL_CORES):
            out = True
        elif isinstance(body, Not) and isinstance(body.sub, _LITERAL_CORES):
            out = True
        elif isinstance(body, (Next, Prev, WeakPrev)) and body.bound is None:
            out = True
        elif isinstance(body, (And, Or, Until, Release, Since, Triggered, Freeze)):
            if isinstance(body, (Until, Release, Since, Triggered)) and body.bound is not None:
                raise FormulaError("bounded operators must be translated away first")
            out = False
        else:
            raise FormulaError(f"unexpected formula in a label: {f!r}")
        self._elementary[fid] = out
        return out

    def pick_nonelementary(self, label) -> Optional[ClosureFormulaId]:
        picks = [fid for fid in label if not self.is_elementary(fid)]
        return min(picks) if picks else None

    def _register(self, fid: ClosureFormulaId) -> ClosureFormulaId:
        if self.closure is not None:
            self.closure.add(fid)
        return fid

    # -- expansion -----------------------------------------------------

    def expansion(self, fid: ClosureFormulaId) -> tuple[str, list[tuple[int, ...]]]:
        """Rule name and the one or two part sets replacing the formula."""
        hit = self._expansion.get(fid)
        if hit is not None:
            return hit
        f = self.interner.formula(fid)
        x, body = f.var, f.sub
        wrap = lambda g: self._register(self.interner.intern(Freeze(x, g)))
        if isinstance(body, And):
            out = ("CONJUNCTION", [(wrap(body.left), wrap(body.right))])
        elif isinstance(body, Or):
            out = ("DISJUNCTION", [(wrap(body.left),), (wrap(body.right),)])
        elif isinstance(body, Freeze):
            out = ("FREEZE", [(wrap(substitute(body.sub, body.var, x)),)])
        elif isinstance(body, Until):
            out = (
                "UNTIL",
                [(wrap(body.right),), (wrap(body.left), wrap(Next(None, body)))],
            )
        elif isinstance(body, Since):
            out = (
                "SINCE",
                [(wrap(body.right),), (wrap(body.left), wrap(Prev(None, body)))],
            )
        elif isinstance(body, Release):
            out = (
                "RELEASE",
                [
                    (wrap(body.left), wrap(body.right)),
                    (wrap(body.right), wrap(Next(None, body))),
                ],
            )
        elif isinstance(body, Triggered):
            # The deferral uses the weak yesterday: at the first state a
            # triggered formula needs only its right operand.
            out = (
                "TRIGGERED",
                [
                    (wrap(body.left), wrap(body.right)),
                    (wrap(body.right), wrap(WeakPrev(None, body))),
                ],
            )
        else:
            raise FormulaError(f"no expansion rule for {f!r}")
        self._expansion[fid] = out
        return out

    def expand(self, label: frozenset[ClosureFormulaId]):
        """Expansion step on a label: picks the lowest-id non-elementary
        member and returns (rule, child labels with bottom flags), or None
        when the label is poised."""
        pick = self.pick_nonelementary(label)
        if pick is None:
            return None
        rule, alts = self.expansion(pick)
        rest = label - {pick}
        return rule, [self.normalize(rest | set(parts)) for parts in alts]

    # -- step ----------------------------------------------------------

    def step_base(self, fid: ClosureFormulaId) -> Optional[ClosureFormulaId]:
        """For a tomorrow member x.X psi, the id of x.psi; None otherwise."""
        if fid in self._step_base:
            return self._step_base[fid]
        f = self.interner.formula(fid)
        out = None
        if isinstance(f, Freeze) and isinstance(f.sub, Next) and f.sub.bound is None:
            out = self._register(self.interner.intern(Freeze(f.var, f.sub.sub)))
        self._step_base[fid] = out
        return out

    def step_label(self, label, delta: int):
        """Label of the step child at time increment ``delta``."""
        ids = set()
        for fid in label:
            base = self.step_base(fid)
            if base is not None:
                ids.add(self._register(self.shifter.shift(base, delta)))
        return self.normalize(ids)

    # -- termination rules ----------------------------------------------

    def check_contradiction(self, label) -> bool:
        pos, neg = set(), set()
        for fid in label:
            f = self.interner.formula(fid)
            if isinstance(f, FalseF):
                return True
            while isinstance(f, Freeze):
                f = f.sub
            if isinstance(f, Prop):
                pos.add(f.name)
            elif isinstance(f, Not) and isinstance(f.sub, Prop):
                neg.add(f.sub.name)
        return bool(pos & neg)

    def check_sync(self, label) -> bool:
        return any(self._truth(fid) is False for fid in label)

    def check_empty(self, label) -> bool:
        return not label

    def yesterday_members(self, label) -> tuple[list[int], list[int]]:
        strong, weak = [], []
        for fid in label:
            f = self.interner.formula(fid)
            if isinstance(f, Freeze):
                if isinstance(f.sub, Prev) and f.sub.bound is None:
                    strong.append(fid)
                elif isinstance(f.sub, WeakPrev) and f.sub.bound is None:
                    weak.append(fid)
        return strong, weak

    def check_yesterday(
        self, label, time: int, segments: list[Segment]
    ) -> Optional[list[_Retry]]:
        """None = pass.  A list = the leaf is crossed; when non-empty it
        carries the retry child to attach to the previous step node."""
        strong, weak = self.yesterday_members(label)
        if not strong and not weak:
            return None
        if not segments:
            if strong:
                return []  # nothing precedes the first state
            return None  # weak obligations hold vacuously at the start
        seg = segments[-1]
        duv = time - seg.time
        omega = set()
        for fid in strong + weak:
            f = self.interner.formula(fid)
            base = self._register(self.interner.intern(Freeze(f.var, f.sub.sub)))
            omega.add(self._register(self.shifter.shift(base, -duv)))
        if all(self.holds(seg.union, q) for q in omega):
            return None
        return [_Retry(seg.node_id, frozenset(seg.label | omega))]

    def is_eventuality(self, fid: ClosureFormulaId) -> bool:
        f = self.interner.formula(fid)
        return (
            isinstance(f, Freeze)
            and isinstance(f.sub, Next)
            and f.sub.bound is None
            and isinstance(f.sub.sub, Until)
            and f.sub.sub.bound is None
        )

    def _ev_components(self, fid: ClosureFormulaId) -> tuple[int, int]:
        hit = self._ev_parts.get(fid)
        if hit is not None:
            return hit
        f = self.interner.formula(fid)
        until = f.sub.sub
        xa = self._register(self.interner.intern(Freeze(f.var, until.left)))
        xb = self._register(self.interner.intern(Freeze(f.var, until.right)))
        self._ev_parts[fid] = (xa, xb)
        return xa, xb

    def eventuality_fulfilled(
        self, views: list[Segment], i: int, ev: ClosureFormulaId, lo: int, hi: int
    ) -> bool:
        """Whether the eventuality requested at segment ``i`` is fulfilled
        at some segment in (lo, hi]: the shifted right operand appears
        there and the shifted left operand appears at every segment
        strictly between the request and the fulfilment."""
        xa, xb = self._ev_components(ev)
        t0 = views[i].time
        for j in range(i + 1, hi + 1):
            dj = views[j].time - t0
            if j > lo and self.holds(
                views[j].union, self._register(self.shifter.shift(xb, dj))
            ):
                return True
            if not self.holds(views[j].union, self._register(self.shifter.shift(xa, dj))):
                return False
        return False

    def _all_fulfilled(self, views, i: int, lo: int, hi: int) -> bool:
        return all(
            self.eventuality_fulfilled(views, i, ev, lo, hi)
            for ev in views[i].label
            if self.is_eventuality(ev)
        )

    def check_loop(
        self, label, time: int, segments: list[Segment], union
    ) -> Optional[tuple[str, Optional[int]]]:
        """Scans ancestor step nodes with an equal label whose requested
        eventualities are all fulfilled up to here.  Prefers accepting on
        the most recent anchor that advanced time; rejects when only a
        zero-advance match exists."""
        views = segments + [Segment(-1, label, time, union)]
        cur = len(segments)
        saw_equal_time = False
        for i in range(len(segments) - 1, -1, -1):
            if segments[i].label != label:
                continue
            if not self._all_fulfilled(views, i, i, cur):
                continue
            if segments[i].time < time:
                return ("LOOP2", i)
            saw_equal_time = True
        if saw_equal_time:
            return ("LOOP1", None)
        return None

    def check_prune(self, label, time: int, segments: list[Segment], union) -> bool:
        """Crosses a poised leaf that is the third occurrence of a step
        label where the second stretch fulfilled nothing the first one
        did not."""
        views = segments + [Segment(-1, label, time, union)]
        cur = len(segments)
        cands = [i for i, seg in enumerate(segments) if seg.label == label]
        for ai in range(len(cands)):
            for bi in range(ai + 1, len(cands)):
                a, b = cands[ai], cands[bi]
                evs = [ev for ev in views[a].label if self.is_eventuality(ev)]
                if all(
                    not self.eventuality_fulfilled(views, a, ev, b, cur)
                    or self.eventuality_fulfilled(views, a, ev, a, b)
                    for ev in evs
                ):
                    return True
        return False

    # -- tree building ---------------------------------------------------

    def _new_node(
        self,
        parent: Optional[TableauNode],
        label,
        bottom: bool,
        time: int,
        step_delta: Optional[int] = None,
        retry: bool = False,
    ) -> TableauNode:
        if self.cancel.is_set():
            raise _Cancelled
        with self._lock:
            if len(self.tableau) >= self.config.max_nodes:
                raise _Budget
            node = TableauNode(
                id=len(self.tableau),
                parent=parent.id if parent else None,
                label=label,
                time=time,
                bottom=bottom,
                step_delta=step_delta,
                retry=retry,
            )
            self.tableau.nodes.append(node)
            if parent:
                parent.children.append(node.id)
            self.stats["nodes_created"] += 1
        if self.config.debug_checks and self.closure is not None:
            missing = [fid for fid in label if fid not in self.closure]
            assert not missing, f"label escapes the closure: {missing}"
        return node

    def _mark(self, node: TableauNode, status: str, rule: str) -> None:
        node.mark = (status, rule)
        with self._lock:
            self.rule_fires[rule] += 1

    def _accept(self, node: TableauNode, ctx: BranchContext, rule: str, anchor) -> None:
        segs = [
            SegmentView(s.node_id, s.label, s.time, s.union) for s in ctx.segments
        ]
        segs.append(SegmentView(node.id, node.label, node.time, ctx.union()))
        trace = BranchTrace(segs, rule, anchor, self.interner)
        with self._lock:
            if self.accepted is None:
                self.accepted = trace
        self.cancel.set()

    # -- search ----------------------------------------------------------

    def _search(
        self, node: TableauNode, ctx: BranchContext, fork: bool = False
    ) -> tuple[bool, list[_Retry]]:
        if self.cancel.is_set():
            raise _Cancelled
        ctx.push(node.label)
        if ctx.depth > self.stats["max_depth"]:
            self.stats["max_depth"] = ctx.depth
        seg_pushed = False
        try:
            if node.bottom:
                self._mark(node, "crossed", "CONTRADICTION")
                return False, []
            expanded = self.expand(node.label)
            if expanded is not None:
                rule, alts = expanded
                with self._lock:
                    self.rule_fires[rule] += 1
                jobs = [
                    self._child_job(node, lbl, bot, node.time) for lbl, bot in alts
                ]
                return self._run_children(jobs, ctx, fork)
            node.poised = True
            self.stats["poised_nodes"] += 1
            if self.check_contradiction(node.label):
                self._mark(node, "crossed", "CONTRADICTION")
                return False, []
            if self.check_sync(node.label):
                self._mark(node, "crossed", "SYNC")
                return False, []
            if self.check_empty(node.label):
                self._mark(node, "ticked", "EMPTY")
                self._accept(node, ctx, "EMPTY", None)
                return True, []
            yres = self.check_yesterday(node.label, node.time, ctx.segments)
            if yres is not None:
                self._mark(node, "crossed", "YESTERDAY")
                return False, yres
            loop = self.check_loop(node.label, node.time, ctx.segments, ctx.union())
            if loop is not None:
                kind, anchor = loop
                if kind == "LOOP2":
                    self._mark(node, "ticked", "LOOP2")
                    self._accept(node, ctx, "LOOP2", anchor)
                    return True, []
                self._mark(node, "crossed", "LOOP1")
                return False, []
            if self.check_prune(node.label, node.time, ctx.segments, ctx.union()):
                self._mark(node, "crossed", "PRUNE")
                return False, []
            # step to the next state
            with self._lock:
                self.rule_fires["STEP"] += 1
            self.stats["step_applications"] += 1
            node.step = True
            seg = Segment(node.id, node.label, node.time, ctx.union())
            ctx.push_segment(seg)
            seg_pushed = True
            deltas = list(range(self.delta + 1))
            if self.config.child_order == "desc-delta":
                deltas.reverse()
            jobs = []
            for d in deltas:
                lbl, bot = self.step_label(node.label, d)
                jobs.append(self._child_job(node, lbl, bot, node.time + d, step_delta=d))
            sat, reqs = self._run_children(jobs, ctx, fork)
            if sat:
                return True, []
            local = [r for r in reqs if r.target == node.id]
            collected = [r for r in reqs if r.target != node.id]
            ctx.pop_segment()
            seg_pushed = False
            # replay missing yesterday obligations as fresh children
            seen: set = set()
            queue = [r.label for r in local]
            qi = 0
            while qi < len(queue):
                raw = queue[qi]
                qi += 1
                lbl, bot = self.normalize(raw)
                if (lbl, bot) in seen:
                    continue
                seen.add((lbl, bot))
                child = self._new_node(node, lbl, bot, node.time, retry=True)
                sat, reqs = self._search(child, ctx)
                if sat:
                    return True, []
                for r in reqs:
                    if r.target == node.id:
                        queue.append(r.label)
                    else:
                        collected.append(r)
            return False, collected
        finally:
            if seg_pushed:
                ctx.pop_segment()
            ctx.pop(node.label)

    def _child_job(self, parent, label, bottom, time, step_delta=None):
        def job(ctx: BranchContext, fork: bool) -> tuple[bool, list[_Retry]]:
            child = self._new_node(parent, label, bottom, time, step_delta=step_delta)
            return self._search(child, ctx, fork)

        return job

    def _run_children(
        self, jobs: list[Callable], ctx: BranchContext, fork: bool
    ) -> tuple[bool, list[_Retry]]:
        if not fork or len(jobs) <= 1 or self.config.threads <= 1:
            collected: list[_Retry] = []
            for job in jobs:
                sat, reqs = job(ctx, fork and len(jobs) <= 1)
                if sat:
                    return True, []
                collected.extend(reqs)
            return False, collected
        # first branching point: explore the children concurrently
        threading.stack_size(_STACK_SIZE)
        results: list[tuple[bool, list[_Retry]]] = []
        budget = False
        with ThreadPoolExecutor(max_workers=self.config.threads) as pool:
            futures = [pool.submit(job, ctx.clone(), False) for job in jobs]
            for fut in futures:
                try:
                    results.append(fut.result())
                except _Cancelled:
                    results.append((False, []))
                except _Budget:
                    budget = True
        if any(sat for sat, _ in results):
            return True, []
        if budget:
            raise _Budget
        collected = [r for _, reqs in results for r in reqs]
        return False, collected

    # -- entry point -------------------------------------------------------

    def solve(self, root: Formula) -> Verdict:
        """Runs the search for a closed root formula in negated normal
        form (bounded operators already translated away)."""
        start = time_mod.perf_counter()
        if not isinstance(root, Freeze):
            root = Freeze("_z", root)
        rid = self.interner.intern(root)
        self.closure = Closure(rid)
        label, bottom = self.normalize({rid})
        outcome = "UNSAT"
        try:
            sat = self._run_with_stack(label, bottom)
            outcome = "SAT" if sat else "UNSAT"
        except _Budget:
            outcome = "RESOURCE_EXHAUSTED"
        wall = time_mod.perf_counter() - start
        model = None
        if outcome == "SAT" and self.accepted is not None:
            model = extract_model(self.accepted)
        stats = dict(self.stats)
        stats["rule_fires"] = dict(sorted(self.rule_fires.items()))
        stats["wall_time_s"] = round(wall, 6)
        return Verdict(outcome, model, self.accepted, stats, self.tableau, self.interner)

    def _run_with_stack(self, label, bottom) -> bool:
        """Runs the recursive search in a thread with a large stack;
        branch depth is bounded but can exceed the default C stack."""
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 1_000_000))
        box: list = []

        def run() -> None:
            try:
                root_node = self._new_node(None, label, bottom, 0)
                sat, _ = self._search(root_node, BranchContext(), fork=True)
                box.append(sat)
            except BaseException as exc:  # propagate _Budget etc.
                box.append(exc)

        old = threading.stack_size(_STACK_SIZE)
        try:
            worker = threading.Thread(target=run, name="tableau-search")
            worker.start()
            worker.join()
        finally:
            threading.stack_size(old)
        out = box[0]
        if isinstance(out, BaseException):
            raise out
        return out


# ---------------------------------------------------------------------------
# Rendering


def export_dot(tableau: Tableau, interner: Interner) -> str:
    """Graphviz rendering: one box per node with its label, timestamp and
    tick/cross mark; step edges carry their time increment."""

    def esc(text: str) -> str:
        return text.replace("\\", "\\\\").replace('"', '\\"')

    lines = [
        "digraph tableau {",
        '  node [shape=box, fontname="monospace", fontsize=9];',
    ]
    for n in tableau.nodes:
        members = sorted(n.label)
        body = ", ".join(print_formula(interner.formula(fid)) for fid in members)
        if n.bottom:
            body = ("false, " + body) if body else "false"
        text = f"u{n.id}  t={n.time}\\n{{{esc(body)}}}"
        attrs = ""
        if n.mark:
            status, rule = n.mark
            sign = "tick" if status == "ticked" else "cross"
            text += f"\\n[{sign} {rule}]"
            attrs = ', color="darkgreen"' if status == "ticked" else ', color="red"'
        elif n.step:
            attrs = ', style="bold"'
        lines.append(f'  n{n.id} [label="{text}"{attrs}];')
    for n in tableau.nodes:
        if n.parent is None:
            continue
        extra = ""
        if n.step_delta is not None:
            extra = f' [label="+{n.step_delta}"]'
        elif n.retry:
            extra = ' [style="dashed"]'
        lines.append(f"  n{n.parent} -> n{n.id}{extra};")
    lines.append("}")
    return "\n".join(lines) + "\n"
