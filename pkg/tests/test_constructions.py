from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dscosc import corpus
from dscosc.constructions import (
    SeriesSpec, check_stabilizing, check_summable, grouping_check, glue_dsc, glue_stabilizing, tail_bound_check,
    ps_from_values, series_sequence, step_approximation, step_is_ps, ps_roundtrip, tietze_extend,
)
from dscosc.func import FuncTree, add, const, evaluate, is_continuous, is_continuous_on, values
from dscosc.oscillation import dsc_index
from dscosc.space import (
    SubsetTree, Tail, closed_subsets, complement, enumerate_points, full, intersection, ordinal_space, rank_layer,
)
from strategies import funcs, funcs_on, spaces, subsets_on


@st.composite
def closed_with_func(draw):
    sp = draw(spaces(2))
    L = draw(st.sampled_from(closed_subsets(sp, 7)))
    return sp, L, draw(funcs_on(sp))


@given(closed_with_func())
def test_tietze_extension_of_continuous_data(data):
    sp, L, f = data
    if not is_continuous_on(f, L):
        with pytest.raises(ValueError):
            tietze_extend(f, L)
        return
    g = tietze_extend(f, L)
    assert is_continuous(g)
    for x in L.members(4):
        assert evaluate(g, x) == evaluate(f, x)


def test_tietze_rejects_non_closed_sets():
    sp = ordinal_space(1)
    with pytest.raises(ValueError):
        tietze_extend(const(sp, 0), SubsetTree(False, (), (SubsetTree(True),)))


def test_glue_chi_root_along_two_pieces():
    f = corpus.chi_root()
    sp = f.shape
    top = rank_layer(sp, 1)
    seq = glue_stabilizing([(top, f), (complement(top), f)])
    assert seq.target == f
    rep = check_stabilizing(seq, 5)
    assert rep.ok
    # leaf T_c settles once copy c is inside the exhaustion
    assert [seq.settle((Tail(c, 0),)) for c in range(4)] == [1, 2, 3, 4]
    for n in range(1, 5):
        assert is_continuous(seq.term(n))


def test_glue_rejects_discontinuous_piece():
    f = corpus.chi_root()
    with pytest.raises(ValueError):
        glue_stabilizing([(full(f.shape), f)])


def test_glue_rejects_incomplete_cover():
    f = corpus.chi_root()
    with pytest.raises(ValueError):
        glue_stabilizing([(rank_layer(f.shape, 1), f)])


@settings(max_examples=25)
@given(funcs(max_rank=2), st.data())
def test_gluing_on_layer_partitions(f, data):
    sp = f.shape
    s = data.draw(subsets_on(sp))
    pieces = []
    for r in range(sp.height + 1):
        for part in (intersection(rank_layer(sp, r), s), intersection(rank_layer(sp, r), complement(s))):
            if not part.is_empty:
                pieces.append(part)
    seq = glue_stabilizing([(p, f) for p in pieces], 6)
    assert check_stabilizing(seq, 3).ok
    g = glue_dsc([(p, seq) for p in pieces], 6)
    assert check_summable(g, 3).ok
    for x in enumerate_points(sp, 3):
        assert g.variation(x) == g.partial_variation(x, seq.settle(x) + 2)


def test_ps_from_finitely_many_values():
    sp = ordinal_space(1)
    seq = ps_from_values(sp, {(Tail(2, 0),): 5, (): 1}, const(sp, 0))
    assert evaluate(seq.target, (Tail(2, 0),)) == 5
    assert evaluate(seq.target, ()) == 1
    assert check_stabilizing(seq, 4).ok


def test_step_approximation_rounds_to_nearest_grid_point():
    f = const(ordinal_space(1), Fraction(1, 3))
    sa = step_approximation(f, 2)
    assert sa.error == Fraction(1, 6)
    assert values(sa.step) == {Fraction(1, 2)}


def test_step_approximation_is_exact_on_grid_valued_functions():
    sa = step_approximation(corpus.chi_root(), 6)
    assert sa.error == 0 and len(sa.pieces) == 2


@settings(max_examples=30)
@given(funcs(max_rank=2), st.integers(2, 12))
def test_step_approximation_bounds(f, n):
    sa = step_approximation(f, n)
    assert sa.error <= Fraction(1, 2 * n)
    assert all((v * n).denominator == 1 for v in values(sa.step))
    for p in sa.pieces:
        assert 1 <= p.j <= n
    assert step_is_ps(sa, 2).ok


def test_step_approximation_needs_bounded_input():
    with pytest.raises(ValueError):
        step_approximation(corpus.drift_leaves(), 3)
    with pytest.raises(ValueError):
        step_approximation(corpus.chi_root(), 1)


def test_series_partial_sums_and_remainders():
    spec = SeriesSpec((corpus.chi_root(),), corpus.chi_root(), Fraction(1, 2))
    # 1 + (1/2 + 1/4 + ...) = 2 at the limit point
    assert evaluate(spec.target, ()) == 2
    for n in range(6):
        assert add(spec.partial(n), spec.remainder(n)) == spec.target
    seq = series_sequence(spec)
    assert check_summable(seq, 3).ok
    # increments start at f_2 - f_1 = phi_2: 1/2 + 1/4 + ... = 1
    assert seq.variation(()) == 1


def test_series_rejects_divergent_ratio():
    with pytest.raises(ValueError):
        SeriesSpec((), corpus.chi_root(), Fraction(1))


def test_geometric_series_attains_equality_at_the_limit_point():
    rep = tail_bound_check(SeriesSpec((), corpus.chi_root(), Fraction(1, 2)), 3)
    assert rep.ok and rep.equality_at_root and rep.max_slack == 0


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6))
def test_tail_bound_on_random_specs(seed):
    import random
    rng = random.Random(seed)
    spec = corpus.random_series(rng, corpus.random_space(rng, rng.randrange(3)))
    assert tail_bound_check(spec, 3, 2).ok


def test_grouping_blocks_on_alternating_series():
    spec = SeriesSpec((), corpus.alternating(2), Fraction(-1, 2))
    rep = grouping_check(spec)
    assert rep.ok and rep.verdict == "DSC"
    for blocks in rep.blocks:
        for i, b in enumerate(blocks, start=1):
            assert b.bound < Fraction(1, 2 ** i)
    assert dsc_index(spec.target).dsc_index == 1


def test_roundtrip_between_ps_and_locally_closed_pieces():
    for f in (corpus.alternating(3), corpus.sign_alternating(), FuncTree(0, (FuncTree(2),), (FuncTree(1),))):
        rt = ps_roundtrip(f)
        assert rt.forward_ok and rt.backward_ok
