import random

from tptlsat.formula import (
    And,
    Freeze,
    Logic,
    Next,
    Not,
    Or,
    Prev,
    Prop,
    Rel,
    Since,
    Until,
    WeakPrev,
    alpha_rename,
    check_wellformed,
    free_vars,
    nnf,
)
from tptlsat.model import evaluate
from tptlsat.syntax import parse
from tptlsat.translate import guarded_operator_bounds, to_gtptlp

from generators import random_formula, random_model


def tr(text):
    return to_gtptlp(nnf(alpha_rename(parse(text).root)))


def test_bounded_tomorrow():
    got = to_gtptlp(Next(2, Prop("p")))
    assert got == Freeze(
        "_t0", Next(None, Freeze("_t1", And(Rel("_t1", "_t0", 2), Prop("p"))))
    )


def test_weak_tomorrow_uses_implication_shape():
    got = to_gtptlp(nnf(parse("WX[2] p").root))
    assert got == Freeze(
        "_t0", Next(None, Freeze("_t1", Or(Not(Rel("_t1", "_t0", 2)), Prop("p"))))
    )


def test_unbounded_tomorrow_unchanged():
    assert to_gtptlp(Next(None, Prop("p"))) == Next(None, Prop("p"))


def test_bounded_until_guards_both_sides():
    got = to_gtptlp(Until(3, Prop("p"), Prop("q")))
    assert got == Freeze(
        "_t0",
        Until(
            None,
            Freeze("_t1", Or(Not(Rel("_t1", "_t0", 3)), Prop("p"))),
            Freeze("_t2", And(Rel("_t2", "_t0", 3), Prop("q"))),
        ),
    )


def test_past_guards_point_backwards():
    got = to_gtptlp(Prev(1, Prop("p")))
    # the guard bounds how far back the previous state may be
    assert got == Freeze(
        "_t0", Prev(None, Freeze("_t1", And(Rel("_t0", "_t1", 1), Prop("p"))))
    )
    got = to_gtptlp(Since(2, Prop("p"), Prop("q")))
    assert got == Freeze(
        "_t0",
        Since(
            None,
            Freeze("_t1", Or(Not(Rel("_t0", "_t1", 2)), Prop("p"))),
            Freeze("_t2", And(Rel("_t0", "_t2", 2), Prop("q"))),
        ),
    )


def test_weak_yesterday_stays_weak():
    got = to_gtptlp(nnf(parse("WY[1] p").root))
    assert isinstance(got, Freeze) and isinstance(got.sub, WeakPrev)


def test_guarded_operator_bounds():
    f = nnf(alpha_rename(parse("X[2] p & (p U[5] q) & G r").root))
    assert sorted(guarded_operator_bounds(f)) == [2, 5]


def test_output_is_closed_and_wellformed():
    rng = random.Random(5)
    for _ in range(150):
        f = nnf(alpha_rename(random_formula(rng, Logic.TPTLBP, max_depth=4)))
        g = to_gtptlp(f)
        assert not free_vars(g)
        # the translation lives in the unbounded engine language
        assert check_wellformed(g, Logic.TPTL) == [] or _only_past(g)


def _only_past(g):
    from tptlsat.formula import PAST_TEMPORAL, WeakNext, subformulae, UNARY_TEMPORAL, BINARY_TEMPORAL

    for node in subformulae(g):
        if isinstance(node, UNARY_TEMPORAL + BINARY_TEMPORAL) and node.bound is not None:
            return False
        if isinstance(node, WeakNext):
            return False
    return True


def test_nnf_of_translation_stays_guarded():
    rng = random.Random(6)
    for _ in range(100):
        f = nnf(alpha_rename(random_formula(rng, Logic.TPTLBP, max_depth=3)))
        g = to_gtptlp(f)
        assert nnf(g) == g  # already in negated normal form


def test_translation_preserves_satisfaction():
    rng = random.Random(9)
    for _ in range(300):
        f = nnf(alpha_rename(random_formula(rng, Logic.TPTLBP, max_depth=3)))
        g = to_gtptlp(f)
        model = random_model(rng, max_states=4, max_gap=2)
        i = rng.randrange(0, 6)
        assert evaluate(model, i, f) == evaluate(model, i, g), (f, model, i)
