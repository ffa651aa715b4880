"""Embedding of the bounded logic with past into the guarded fragment.

Every bounded temporal operator is replaced by its unbounded counterpart
wrapped in fresh freeze quantifiers, with a guard constraint that limits
how far the operator may look.  Future guards have the shape
``inner <= outer + w`` and past guards ``outer <= inner + w``, so that in
both directions the guard bounds the distance between the binding state
and the state the operator inspects.  Guards are conjoined on the
existential side of an operator and implied on the universal side; the
implications are emitted directly in negated normal form.

Unbounded operators translate structurally; the weak unbounded tomorrow
coincides with the strong one because every state has a successor, while
the weak unbounded yesterday stays as the engine's elementary weak
yesterday form.
"""

from __future__ import annotations

from .formula import (
    And,
    Bound,
    Cong,
    Formula,
    FormulaError,
    Freeze,
    Implies,
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
    map_children,
    subformulae,
    UNARY_TEMPORAL,
    BINARY_TEMPORAL,
)


def guarded_operator_bounds(f: Formula) -> list[int]:
    """Finite bounds of the temporal operators in source order; these are
    exactly the guards the translation introduces."""
    return [
        g.bound
        for g in subformulae(f)
        if isinstance(g, UNARY_TEMPORAL + BINARY_TEMPORAL) and g.bound is not None
    ]


def to_gtptlp(f: Formula) -> Formula:
    """Translates an alpha-renamed bounded formula in negated normal form.

    The result is closed whenever the input is, passes well-formedness
    for the engine, and is semantically equivalent position by position.
    """
    counter = 0

    def fresh() -> str:
        nonlocal counter
        name = f"_t{counter}"
        counter += 1
        return name

    def future_guard(outer: str, inner: str, w: int) -> Rel:
        return Rel(inner, outer, w)  # inner <= outer + w

    def past_guard(outer: str, inner: str, w: int) -> Rel:
        return Rel(outer, inner, w)  # outer <= inner + w

    def go(node: Formula) -> Formula:
        if isinstance(node, Implies):
            raise FormulaError("translation expects negated normal form")
        if isinstance(node, Not) and not isinstance(node.sub, (Prop, Rel, Cong)):
            raise FormulaError("translation expects negated normal form")
        if isinstance(node, Next):
            sub = go(node.sub)
            if node.bound is None:
                return Next(None, sub)
            x, y = fresh(), fresh()
            return Freeze(x, Next(None, Freeze(y, And(future_guard(x, y, node.bound), sub))))
        if isinstance(node, WeakNext):
            sub = go(node.sub)
            if node.bound is None:
                return Next(None, sub)
            x, y = fresh(), fresh()
            return Freeze(
                x, Next(None, Freeze(y, Or(Not(future_guard(x, y, node.bound)), sub)))
            )
        if isinstance(node, Prev):
            sub = go(node.sub)
            if node.bound is None:
                return Prev(None, sub)
            x, y = fresh(), fresh()
            return Freeze(x, Prev(None, Freeze(y, And(past_guard(x, y, node.bound), sub))))
        if isinstance(node, WeakPrev):
            sub = go(node.sub)
            if node.bound is None:
                return WeakPrev(None, sub)
            x, y = fresh(), fresh()
            return Freeze(
                x, WeakPrev(None, Freeze(y, Or(Not(past_guard(x, y, node.bound)), sub)))
            )
        if isinstance(node, Until):
            left, right = go(node.left), go(node.right)
            if node.bound is None:
                return Until(None, left, right)
            x, z, y = fresh(), fresh(), fresh()
            return Freeze(
                x,
                Until(
                    None,
                    Freeze(z, Or(Not(future_guard(x, z, node.bound)), left)),
                    Freeze(y, And(future_guard(x, y, node.bound), right)),
                ),
            )
        if isinstance(node, Release):
            left, right = go(node.left), go(node.right)
            if node.bound is None:
                return Release(None, left, right)
            x, z, y = fresh(), fresh(), fresh()
            return Freeze(
                x,
                Release(
                    None,
                    Freeze(z, And(future_guard(x, z, node.bound), left)),
                    Freeze(y, Or(Not(future_guard(x, y, node.bound)), right)),
                ),
            )
        if isinstance(node, Since):
            left, right = go(node.left), go(node.right)
            if node.bound is None:
                return Since(None, left, right)
            x, z, y = fresh(), fresh(), fresh()
            return Freeze(
                x,
                Since(
                    None,
                    Freeze(z, Or(Not(past_guard(x, z, node.bound)), left)),
                    Freeze(y, And(past_guard(x, y, node.bound), right)),
                ),
            )
        if isinstance(node, Triggered):
            left, right = go(node.left), go(node.right)
            if node.bound is None:
                return Triggered(None, left, right)
            x, z, y = fresh(), fresh(), fresh()
            return Freeze(
                x,
                Triggered(
                    None,
                    Freeze(z, And(past_guard(x, z, node.bound), left)),
                    Freeze(y, Or(Not(past_guard(x, y, node.bound)), right)),
                ),
            )
        return map_children(node, go)

    return go(f)
