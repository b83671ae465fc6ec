import pytest
from hypothesis import given, settings, strategies as st

from supertwist.symbolform import (DZ, DZB, EPS, RHO, Z2, SymbolContext, deformed_differential,
                                   del_operator, lie_d1, lie_d2)


def _ctx():
    ctx = SymbolContext()
    ctx.scalar("u", 0)
    ctx.scalar("v", 1)
    ctx.field("x", 0)
    ctx.field("y", 1)
    return ctx


GENS = [EPS, DZ(1), DZ(2), DZB(2), Z2, RHO(0, 0), RHO(1, 0), RHO(0, 1), ("s", "u"), ("s", "v")]


@st.composite
def scalar_forms(draw, ctx):
    out = ctx.zero()
    for _ in range(draw(st.integers(1, 3))):
        term = ctx.one() * draw(st.integers(-3, 3))
        for g in draw(st.lists(st.sampled_from(GENS), max_size=3)):
            exp = draw(st.integers(-2, 2)) if g == Z2 else 1
            term = term * ctx.gen(g, exp)
        out = out + term
    return out


def _homogeneous(ctx, X):
    ps = {ctx.mono_parity(m) for (m, _) in X.terms}
    return ps.pop() if len(ps) == 1 else None


def test_odd_generators_square_to_zero():
    ctx = _ctx()
    for g in (EPS, DZ(1), DZB(2), ("s", "v")):
        assert (ctx.gen(g) * ctx.gen(g)).is_zero()


def test_z2_inverse():
    ctx = _ctx()
    assert ctx.gen(Z2, 2) * ctx.gen(Z2, -2) == ctx.one()


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_graded_commutativity(data):
    ctx = _ctx()
    X = data.draw(scalar_forms(ctx))
    Y = data.draw(scalar_forms(ctx))
    px, py = _homogeneous(ctx, X), _homogeneous(ctx, Y)
    if px is None or py is None:
        return
    assert X * Y == Y * X * (-1) ** (px * py)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_associativity(data):
    ctx = _ctx()
    X, Y, Z = (data.draw(scalar_forms(ctx)) for _ in range(3))
    assert (X * Y) * Z == X * (Y * Z)


@pytest.mark.parametrize("make", [deformed_differential, del_operator, lie_d1, lie_d2])
@settings(max_examples=40, deadline=None)
@given(st.data())
def test_leibniz_rule(make, data):
    ctx = _ctx()
    D = make(ctx)
    X = data.draw(scalar_forms(ctx))
    Y = data.draw(scalar_forms(ctx))
    px = _homogeneous(ctx, X)
    if px is None:
        return
    assert D(X * Y) == D(X) * Y + X * D(Y) * (-1) ** (D.parity * px)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_deformed_differential_squares_to_zero(data):
    ctx = _ctx()
    D = deformed_differential(ctx)
    X = data.draw(scalar_forms(ctx)) * ctx.field("x", 0)
    assert D(D(X)).is_zero()


def test_bracket_graded_symmetry():
    ctx = _ctx()
    x, y = ctx.field("x", 0), ctx.field("y", 1)
    assert x.bracket(y) == -(y.bracket(x))
    assert not y.bracket(y).is_zero()
    assert x.bracket(x).is_zero()
    assert x.kappa(y) == y.kappa(x)
    assert y.kappa(y).is_zero()


def test_derivation_on_pairings():
    ctx = _ctx()
    x, y = ctx.field("x", 0), ctx.field("y", 1)
    D = del_operator(ctx)
    assert D(x.kappa(y)) == D(x).kappa(y) + x.kappa(D(y))


def test_eps_split():
    ctx = _ctx()
    A = ctx.gen(RHO()) + ctx.gen(EPS) * ctx.gen(Z2)
    a0, a1 = A.eps_split()
    assert a0 == ctx.gen(RHO()) and a1 == ctx.gen(Z2)
    assert a0 + ctx.gen(EPS) * a1 == A


def test_deformed_differential_on_eps():
    ctx = _ctx()
    assert deformed_differential(ctx)(ctx.gen(EPS)) == ctx.gen(Z2)
    assert deformed_differential(ctx, eps_image=False)(ctx.gen(EPS)).is_zero()
