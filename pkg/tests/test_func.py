from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dscosc.func import (
    INF, FuncTree, absolute, add, const, evaluate, indicator, is_continuous, is_continuous_on, is_lsc,
    is_usc, le, level_set, limsup_at, negate, pointwise_max, scale, select, sup_over, usc_envelope, values,
)
from dscosc.oracle import certified_depth, oracle_limsup
from dscosc.space import ShapeError, SubsetTree, Tail, enumerate_points, ordinal_space
from strategies import funcs, funcs_on, small_rationals, spaces, subsets_on

# overrides only touch copies < 3, so budget 4 shows every distinct value
B = 4


def test_constructor_drops_redundant_overrides():
    f = FuncTree(0, (), (FuncTree(1),), 0, {(2, 0): FuncTree(1)})
    assert f.overrides == ()
    g = FuncTree(0, (), (FuncTree(1),), 2, {(1, 0): FuncTree(3)})
    assert g.overrides == ()
    assert evaluate(g, (Tail(4, 0),)) == 9


def test_override_shape_is_checked():
    f = FuncTree(0, (), (FuncTree(1),), 0, {(0, 0): FuncTree(1, (), (FuncTree(0),))})
    with pytest.raises(ShapeError):
        f.shape


def test_drift_is_ignored_on_leaves():
    assert FuncTree(3, (), (), 5).drift == 0


@given(funcs(drift=True))
def test_sup_and_inf_bound_enumerated_values(f):
    vs = [evaluate(f, x) for x in enumerate_points(f.shape, B)]
    assert f.inf <= min(vs) and max(vs) <= f.sup
    if f.drift_free:
        assert max(vs) == f.sup and min(vs) == f.inf
        assert set(vs) == values(f)


@st.composite
def pair(draw, drift=False):
    sp = draw(spaces(2))
    return draw(funcs_on(sp, True, drift)), draw(funcs_on(sp, True, drift))


@given(pair(drift=True), small_rationals)
def test_arithmetic_is_pointwise(fg, q):
    f, g = fg
    h, k, n = add(f, g), scale(q, f), negate(g)
    for x in enumerate_points(f.shape, B):
        assert evaluate(h, x) == evaluate(f, x) + evaluate(g, x)
        assert evaluate(k, x) == q * evaluate(f, x)
        assert evaluate(n, x) == -evaluate(g, x)


@given(pair())
def test_order_and_lattice_operations(fg):
    f, g = fg
    pts = enumerate_points(f.shape, B)
    assert le(f, g) == all(evaluate(f, x) <= evaluate(g, x) for x in pts)
    m = pointwise_max(f, g)
    assert all(evaluate(m, x) == max(evaluate(f, x), evaluate(g, x)) for x in pts)
    a = absolute(add(f, negate(g)))
    assert all(evaluate(a, x) == abs(evaluate(f, x) - evaluate(g, x)) for x in pts)


@given(pair(drift=True))
def test_order_with_drift_uses_exact_infimum(fg):
    f, g = fg
    ok = le(f, g)
    if ok:
        assert all(evaluate(f, x) <= evaluate(g, x) for x in enumerate_points(f.shape, B))


@st.composite
def func_and_set(draw):
    sp = draw(spaces(2))
    return draw(funcs_on(sp)), draw(funcs_on(sp)), draw(subsets_on(sp))


@given(func_and_set())
def test_select_and_level_sets(data):
    f, g, s = data
    h = select(s, f, g)
    ls = level_set(f, lambda v: v > 0)
    for x in enumerate_points(f.shape, B):
        assert evaluate(h, x) == (evaluate(f, x) if s.contains(x) else evaluate(g, x))
        assert ls.contains(x) == (evaluate(f, x) > 0)
    if not s.is_empty:
        assert sup_over(f, s) == max(evaluate(f, x) for x in s.members(B))


def test_select_with_drift():
    f = FuncTree(0, (), (FuncTree(0),), 1)
    # finitely many exceptional copies are fine
    almost = SubsetTree(True, (), (SubsetTree(True),), {(0, 0): SubsetTree(False)})
    h = select(almost, f, const(f.shape, 9))
    assert [evaluate(h, (Tail(c, 0),)) for c in range(3)] == [9, 1, 2]
    f2 = FuncTree(0, (), (FuncTree(0), FuncTree(0)), 1)
    split = SubsetTree(True, (), (SubsetTree(True), SubsetTree(False)))
    with pytest.raises(ValueError):
        select(split, f2, const(f2.shape, 0))


@given(funcs())
def test_usc_envelope_against_unfolding_oracle(f):
    env = usc_envelope(f)
    assert is_usc(env) and le(f, env)
    assert usc_envelope(env) == env
    k = certified_depth(f)
    for x in enumerate_points(f.shape, 2):
        assert evaluate(env, x) == limsup_at(f, x) == oracle_limsup(f, x, k)


def test_semicontinuity_of_indicators():
    sp = ordinal_space(1)
    root = indicator(SubsetTree(True, (), (SubsetTree(False),)))
    leaves = indicator(SubsetTree(False, (), (SubsetTree(True),)))
    assert is_usc(root) and not is_lsc(root)
    assert is_lsc(leaves) and not is_usc(leaves)
    assert is_continuous(const(sp, 4))
    assert is_continuous_on(root, SubsetTree(False, (), (SubsetTree(True),)))


def test_drifting_sup_is_infinite():
    f = FuncTree(0, (), (FuncTree(0),), Fraction(1, 2))
    assert f.sup == INF and f.inf == 0
    assert negate(f).inf == -INF
