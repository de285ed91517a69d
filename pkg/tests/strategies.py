"""Hypothesis strategies for spaces, subsets and functions."""
from fractions import Fraction

from hypothesis import strategies as st

from dscosc.func import FuncTree
from dscosc.space import LEAF, Space, SubsetTree

small_rationals = st.builds(Fraction, st.integers(-4, 4), st.sampled_from([1, 2, 3]))


@st.composite
def spaces(draw, max_rank=3, max_period=2, max_prefix=1):
    r = draw(st.integers(0, max_rank))
    return draw(space_of_rank(r, max_period, max_prefix))


@st.composite
def space_of_rank(draw, r, max_period=2, max_prefix=1):
    if r == 0:
        return LEAF
    period = [draw(space_of_rank(r - 1, max_period, max_prefix))]
    for _ in range(draw(st.integers(0, max_period - 1))):
        period.append(draw(space_of_rank(draw(st.integers(0, r - 1)), max_period, max_prefix)))
    order = draw(st.permutations(range(len(period))))
    prefix = [draw(space_of_rank(draw(st.integers(0, r - 1)), max_period, 0))
              for _ in range(draw(st.integers(0, max_prefix)))]
    return Space(tuple(prefix), tuple(period[i] for i in order))


@st.composite
def funcs_on(draw, space, overrides=True, drift=False):
    v = draw(small_rationals)
    prefix = tuple(draw(funcs_on(p, overrides, drift)) for p in space.prefix)
    period = tuple(draw(funcs_on(m, overrides, drift)) for m in space.period)
    d = draw(st.sampled_from([0, 0, 1, Fraction(-1, 2)])) if drift and space.period else 0
    ovr = {}
    if overrides:
        for m, sub in enumerate(space.period):
            if draw(st.integers(0, 9)) == 0:
                ovr[(draw(st.integers(0, 2)), m)] = draw(funcs_on(sub, False, False))
    return FuncTree(v, prefix, period, d, ovr)


@st.composite
def funcs(draw, max_rank=3, drift=False):
    return draw(funcs_on(draw(spaces(max_rank)), True, drift))


@st.composite
def subsets_on(draw, space, overrides=True):
    prefix = tuple(draw(subsets_on(p, overrides)) for p in space.prefix)
    period = tuple(draw(subsets_on(m, overrides)) for m in space.period)
    ovr = {}
    if overrides:
        for m, sub in enumerate(space.period):
            if draw(st.integers(0, 4)) == 0:
                ovr[(draw(st.integers(0, 2)), m)] = draw(subsets_on(sub, False))
    return SubsetTree(draw(st.booleans()), prefix, period, ovr)
