import pytest

from tptlsat.formula import (
    FALSE,
    TRUE,
    And,
    Cong,
    Freeze,
    Interner,
    Logic,
    Next,
    Not,
    Or,
    Prev,
    Prop,
    Rel,
    Until,
    WeakPrev,
)
from tptlsat.model import evaluate
from tptlsat.shift import Shifter, ShiftVariant
from tptlsat.solver import prepare, solve_formula, solve_text
from tptlsat.syntax import parse
from tptlsat.tableau import Engine, Segment, SolverConfig, export_dot


def tptl_engine(delta=2, **cfg):
    it = Interner()
    s = Shifter(it, ShiftVariant.TPTL)
    return Engine(it, s, delta, SolverConfig(**cfg))


def label(engine, *formulae):
    lbl, bottom = engine.normalize({engine.interner.intern(f) for f in formulae})
    assert not bottom
    return lbl


def test_expand_conjunction():
    e = tptl_engine()
    lbl = label(e, Freeze("x", And(Prop("p"), Prop("q"))))
    rule, kids = e.expand(lbl)
    assert rule == "CONJUNCTION"
    assert kids == [(label(e, Freeze("x", Prop("p")), Freeze("x", Prop("q"))), False)]


def test_expand_until_two_children():
    e = tptl_engine()
    u = Freeze("x", Until(None, Prop("p"), Prop("q")))
    rule, kids = e.expand(label(e, u))
    assert rule == "UNTIL"
    assert kids[0] == (label(e, Freeze("x", Prop("q"))), False)
    assert kids[1] == (
        label(e, Freeze("x", Prop("p")), Freeze("x", Next(None, Until(None, Prop("p"), Prop("q"))))),
        False,
    )


def test_expand_freeze_discharges_to_empty():
    e = tptl_engine()
    lbl = label(e, Freeze("x", Freeze("y", Rel("y", "x", 2))))
    rule, kids = e.expand(lbl)
    assert rule == "FREEZE"
    assert kids == [(frozenset(), False)]  # x <= x + 2 holds and is dropped


def test_expand_poised_returns_none():
    e = tptl_engine()
    lbl = label(e, Freeze("x", Prop("p")), Freeze("x", Next(None, Prop("p"))))
    assert e.expand(lbl) is None


def test_step_children_shift_constraints():
    e = tptl_engine(delta=2)
    g = Freeze("x", Next(None, parse("G y. (p -> y <= x + 2)").root))
    lbl = label(e, g)
    out = [e.step_label(lbl, d) for d in range(3)]
    rendered = [
        {e.interner.formula(fid) for fid in l} for l, _ in out
    ]
    consts = []
    for labels in rendered:
        (f,) = labels
        from tptlsat.formula import subformulae

        consts.append([n.c for n in subformulae(f) if isinstance(n, Rel)])
    assert consts == [[2], [1], [0]]


def test_step_without_tomorrow_members_is_empty():
    e = tptl_engine()
    lbl = label(e, Freeze("x", Prop("p")), Freeze("x", Prop("q")))
    assert e.step_label(lbl, 0) == (frozenset(), False)
    assert e.step_label(lbl, 2) == (frozenset(), False)


def test_step_constraint_free_shift_is_identity():
    e = tptl_engine()
    lbl = label(e, Freeze("x", Next(None, Prop("p"))))
    results = {e.step_label(lbl, d) for d in range(3)}
    assert len(results) == 1  # same label at every increment


def test_check_contradiction():
    e = tptl_engine()
    assert e.check_contradiction(label(e, Freeze("x", Prop("p")), Freeze("x", Not(Prop("p")))))
    assert not e.check_contradiction(
        label(e, Freeze("x", Prop("p")), Freeze("y", Not(Prop("q"))))
    )
    # differently named binders still clash on the same letter
    assert e.check_contradiction(label(e, Freeze("x", Prop("p")), Freeze("y", Not(Prop("p")))))
    assert e.check_contradiction(frozenset({e.interner.intern(FALSE)}))


def test_check_sync():
    e = tptl_engine()
    bad = frozenset({e.interner.intern(Freeze("x", Rel("x", "x", -1)))})
    assert e.check_sync(bad)
    bad2 = frozenset({e.interner.intern(Freeze("x", Cong("x", 2, "x", 1)))})
    assert e.check_sync(bad2)
    ok = frozenset({e.interner.intern(Freeze("x", Rel("x", "x", 0)))})
    assert not e.check_sync(ok)


def test_check_empty():
    e = tptl_engine()
    assert e.check_empty(frozenset())
    assert not e.check_empty(label(e, Freeze("x", Prop("p"))))
    assert not e.check_empty(label(e, Freeze("x", Next(None, Prop("p")))))


def yesterday_fixture(engine):
    it = engine.interner
    yq = it.intern(Freeze("x", Prev(None, Prop("q"))))
    xq = it.intern(Freeze("x", Prop("q")))
    seg = Segment(node_id=7, label=frozenset({xq}), time=0, union=frozenset({xq}))
    return yq, xq, seg


def test_yesterday_first_segment():
    it = Interner()
    e = Engine(it, Shifter(it, ShiftVariant.GTPTLP, window=4), 1)
    yq, xq, _ = yesterday_fixture(e)
    assert e.check_yesterday(frozenset({yq}), 0, []) == []  # crossed, no retry
    weak = it.intern(Freeze("x", WeakPrev(None, Prop("q"))))
    assert e.check_yesterday(frozenset({weak}), 0, []) is None


def test_yesterday_pass_and_retry():
    it = Interner()
    e = Engine(it, Shifter(it, ShiftVariant.GTPTLP, window=4), 1)
    yq, xq, seg = yesterday_fixture(e)
    # obligation q is already in the previous segment: pass
    assert e.check_yesterday(frozenset({yq}), 1, [seg]) is None
    # obligation missing: crossed with a retry child for node 7
    empty_seg = Segment(node_id=7, label=frozenset(), time=0, union=frozenset())
    out = e.check_yesterday(frozenset({yq}), 1, [empty_seg])
    assert out is not None and out[0].target == 7
    assert xq in out[0].label


def loop_fixture(engine, fulfil=True):
    it = engine.interner
    ev = it.intern(Freeze("x", Next(None, Until(None, TRUE, Prop("p")))))
    xp = it.intern(Freeze("x", Prop("p")))
    base = frozenset({ev})
    seg0 = Segment(0, base, 0, base | ({xp} if fulfil else frozenset()))
    return ev, xp, base, seg0


def test_check_loop_equal_time_rejects():
    e = tptl_engine()
    it = e.interner
    xp = it.intern(Freeze("x", Next(None, Prop("p"))))
    base = frozenset({xp})
    seg = Segment(0, base, 0, base)
    out = e.check_loop(base, 0, [seg], base)
    assert out == ("LOOP1", None)


def test_check_loop_time_progress_accepts():
    e = tptl_engine()
    it = e.interner
    xp = it.intern(Freeze("x", Next(None, Prop("p"))))
    base = frozenset({xp})
    seg = Segment(0, base, 0, base)
    out = e.check_loop(base, 2, [seg], base)
    assert out == ("LOOP2", 0)


def test_check_loop_requires_fulfilment():
    e = tptl_engine()
    ev, xp, base, seg0 = loop_fixture(e, fulfil=False)
    # the eventuality requested at the anchor is never fulfilled
    assert e.check_loop(base, 1, [seg0], base) is None


def test_check_loop_fulfilled_eventuality():
    e = tptl_engine()
    ev, xp, base, seg0 = loop_fixture(e, fulfil=False)
    cur_union = base | {xp}  # fulfilment lands in the current segment
    assert e.check_loop(base, 1, [seg0], cur_union) == ("LOOP2", 0)


def test_eventuality_fulfilled_examples():
    e = tptl_engine()
    it = e.interner
    ev = it.intern(Freeze("x", Next(None, Until(None, Prop("p"), Prop("q")))))
    xq = it.intern(Freeze("x", Prop("q")))
    xp = it.intern(Freeze("x", Prop("p")))
    req = frozenset({ev})
    views = [
        Segment(0, req, 0, req),
        Segment(1, frozenset({xp}), 1, frozenset({xp})),
        Segment(2, frozenset({xq}), 2, frozenset({xq})),
    ]
    assert e.eventuality_fulfilled(views, 0, ev, 0, 2)
    assert not e.eventuality_fulfilled(views, 0, ev, 0, 0)  # needs a later segment
    gap = [
        Segment(0, req, 0, req),
        Segment(1, frozenset(), 1, frozenset()),  # intermediate misses p
        Segment(2, frozenset({xq}), 2, frozenset({xq})),
    ]
    assert not e.eventuality_fulfilled(gap, 0, ev, 0, 2)


def test_check_prune_needs_three_occurrences():
    e = tptl_engine()
    it = e.interner
    ev = it.intern(Freeze("x", Next(None, Until(None, TRUE, Prop("p")))))
    base = frozenset({ev})
    seg = lambda i: Segment(i, base, i, base)
    assert not e.check_prune(base, 1, [seg(0)], base)
    assert e.check_prune(base, 2, [seg(0), seg(1)], base)


def test_check_prune_spares_new_fulfilment():
    e = tptl_engine()
    it = e.interner
    ev = it.intern(Freeze("x", Next(None, Until(None, TRUE, Prop("p")))))
    xp = it.intern(Freeze("x", Prop("p")))
    base = frozenset({ev})
    segs = [Segment(0, base, 0, base), Segment(1, base, 1, base)]
    # the stretch ending here newly fulfils the request: no pruning
    assert not e.check_prune(base, 2, segs, base | {xp})


def test_solve_examples():
    assert solve_text("x. G y. (p -> y <= x + 2)", Logic.TPTL).outcome == "SAT"
    assert solve_text("p & !p", Logic.TPTL).outcome == "UNSAT"
    assert solve_text("x. G y. (y <= x + 0)", Logic.TPTL).outcome == "UNSAT"
    v = solve_text("F p & G !p", Logic.TPTL)
    assert v.outcome == "UNSAT" and v.stats["rule_fires"].get("PRUNE", 0) >= 1
    assert solve_text("Y[1] p", Logic.TPTLBP).outcome == "UNSAT"


def test_sat_verdict_always_carries_model():
    for text, logic in [
        ("p U q", Logic.TPTL),
        ("x. G y. (p -> y <= x + 2)", Logic.TPTL),
        ("X Y q", Logic.TPTLBP),
    ]:
        v = solve_text(text, logic)
        assert v.outcome == "SAT" and v.model is not None
        f = parse(text).root
        from tptlsat.formula import alpha_rename, nnf

        assert evaluate(v.model, 0, nnf(alpha_rename(f)))


def test_yesterday_retry_integration():
    v = solve_text("X Y q", Logic.TPTLBP)
    assert v.outcome == "SAT"
    assert any(n.retry for n in v.tableau.nodes)
    assert "q" in v.model.letters(0)


def test_retry_children_are_deduplicated():
    for text in ["X Y q", "X (Y q | Y p)", "G (p -> Y p)"]:
        v = solve_text(text, Logic.TPTLBP)
        for node in v.tableau.nodes:
            retry_labels = [
                v.tableau.node(c).label for c in node.children if v.tableau.node(c).retry
            ]
            assert len(retry_labels) == len(set(retry_labels)), text


def test_budget_exhaustion():
    v = solve_text("x. G y. (p -> y <= x + 2)", Logic.TPTL, SolverConfig(max_nodes=10))
    assert v.outcome == "RESOURCE_EXHAUSTED"
    assert v.model is None


def test_deterministic_tree_single_threaded():
    a = solve_text("x. G y. (p -> y <= x + 2)", Logic.TPTL)
    b = solve_text("x. G y. (p -> y <= x + 2)", Logic.TPTL)
    assert export_dot(a.tableau, a.interner) == export_dot(b.tableau, b.interner)


def test_debug_checks_pass():
    cfg = SolverConfig(debug_checks=True)
    assert solve_text("x. G y. (p -> y <= x + 2)", Logic.TPTL, cfg).outcome == "SAT"
    assert solve_text("F p & G !p", Logic.TPTL, cfg).outcome == "UNSAT"


def test_export_dot_shapes():
    v = solve_text("false", Logic.TPTL)
    dot = export_dot(v.tableau, v.interner)
    assert dot.startswith("digraph tableau {")
    assert "[cross CONTRADICTION]" in dot

    v = solve_text("x. G y. (p -> y <= x + 2)", Logic.TPTL)
    dot = export_dot(v.tableau, v.interner)
    assert "[tick LOOP2]" in dot and "[cross LOOP1]" in dot

    v = solve_text("p", Logic.TPTL)
    dot = export_dot(v.tableau, v.interner)
    assert "[tick EMPTY]" in dot


def test_threads_agree_with_sequential():
    for text, logic in [
        ("x. G y. (p -> y <= x + 2)", Logic.TPTL),
        ("F p & G !p", Logic.TPTL),
        ("X Y q", Logic.TPTLBP),
        ("p & !p", Logic.TPTL),
    ]:
        seq = solve_text(text, logic)
        par = solve_text(text, logic, SolverConfig(threads=4))
        assert seq.outcome == par.outcome, text
        if par.outcome == "SAT":
            from tptlsat.formula import alpha_rename, nnf

            assert evaluate(par.model, 0, nnf(alpha_rename(parse(text).root)))


def test_child_order_flip_preserves_verdict():
    for text in ["x. G y. (p -> y <= x + 2)", "F p & G !p", "p U q"]:
        a = solve_text(text, Logic.TPTL)
        b = solve_text(text, Logic.TPTL, SolverConfig(child_order="desc-delta"))
        assert a.outcome == b.outcome
