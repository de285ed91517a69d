import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dscosc import corpus
from dscosc.func import INF, FuncTree, absolute, add, const, evaluate, is_lsc, is_usc, le, negate, scale, usc_envelope
from dscosc.oracle import certified_depth, oracle_osc_alpha, oracle_osc_classical
from dscosc.oscillation import (
    check_strong_continuity, d_index, dbsc_norm, dsc_index, osc_alpha, osc_classical, osc_sequence, stable_osc,
    stage_bound, strong_continuity_points, uv_decomposition,
)
from dscosc.space import Tail, is_closed, ordinal_space
from strategies import funcs, funcs_on, small_rationals, spaces


def test_chi_root_first_stage():
    o = osc_alpha(corpus.chi_root(), 1)
    assert o == FuncTree(1, (), (FuncTree(0),))
    assert d_index(corpus.chi_root()) == 1


def test_nested_indicator_reaches_two_at_the_root():
    f = corpus.nested_indicator()
    assert osc_alpha(f, 2).value == 2
    assert d_index(f) == 2


def test_rank_three_alternating():
    f = corpus.alternating(3)
    assert osc_alpha(f, 3).value == 3
    assert d_index(f) == 3
    assert dbsc_norm(f) == 4


def test_continuous_function_has_index_zero():
    assert d_index(const(ordinal_space(3), 5)) == 0
    assert dbsc_norm(const(ordinal_space(3), -5)) == 5


def test_alternating_sequence_is_extremal_for_the_sandwich():
    f = corpus.sign_alternating()
    assert osc_classical(f).value == 2
    assert osc_alpha(f, 1).value == 1


def test_negative_stage_rejected():
    with pytest.raises(ValueError):
        osc_alpha(corpus.chi_root(), -1)


def test_drift_gives_infinite_oscillation():
    f = corpus.drift_leaves()
    assert osc_alpha(f, 1).value == INF
    assert dbsc_norm(f) == INF
    assert uv_decomposition(f) is None


@given(funcs(drift=True))
def test_classical_sandwich(f):
    o1, oc = osc_alpha(f, 1), osc_classical(f)
    assert le(o1, oc) and le(oc, scale(2, o1))


@given(funcs(drift=True))
def test_stages_are_usc_and_increase(f):
    seq = osc_sequence(f, d_index(f) + 1)
    assert seq[-1] == seq[-2]
    for a, b in zip(seq, seq[1:]):
        assert le(a, b)
        assert is_usc(b)


@given(funcs(), small_rationals)
def test_homogeneity(f, q):
    n = d_index(f) + 1
    assert osc_alpha(scale(q, f), n) == scale(abs(q), osc_alpha(f, n))
    assert dbsc_norm(scale(q, f)) == abs(q) * dbsc_norm(f)


@st.composite
def pairs(draw):
    sp = draw(spaces(2))
    return draw(funcs_on(sp)), draw(funcs_on(sp))


@given(pairs())
def test_subadditivity(fg):
    f, g = fg
    for n in range(4):
        assert le(osc_alpha(add(f, g), n), add(osc_alpha(f, n), osc_alpha(g, n)))
    assert dbsc_norm(add(f, g)) <= dbsc_norm(f) + dbsc_norm(g)


@given(funcs())
def test_semicontinuous_functions_stabilize_at_one(f):
    assert d_index(usc_envelope(f)) <= 1
    assert d_index(negate(usc_envelope(negate(f)))) <= 1


@given(funcs())
def test_stable_oscillation_plus_or_minus_f_is_usc(f):
    p = stable_osc(f)
    assert is_usc(add(p, f)) and is_usc(add(p, negate(f)))


@given(funcs())
def test_index_respects_stage_bound(f):
    assert d_index(f) <= stage_bound(f.shape)


@given(funcs())
def test_uv_decomposition_invariants(f):
    uv = uv_decomposition(f)
    assert add(uv.u, negate(uv.v)) == f
    assert is_lsc(uv.u) and is_lsc(uv.v)
    assert add(uv.u, uv.v).sup == uv.d_norm == dbsc_norm(f)
    assert dbsc_norm(f) >= absolute(f).sup


@given(funcs(max_rank=2))
def test_engine_matches_brute_force_oracle(f):
    k = certified_depth(f)
    for n in range(d_index(f) + 2):
        prof = osc_alpha(f, n)
        for addr, v in oracle_osc_alpha(f, n, k).items():
            assert evaluate(prof, addr) == v
    for addr, v in oracle_osc_classical(f, k).items():
        assert evaluate(osc_classical(f), addr) == v


@given(funcs())
def test_bounded_functions_have_dsc_index_one(f):
    tr = dsc_index(f)
    assert tr.verdict == "DSC" and tr.dsc_index == 1
    assert tr.d_index == d_index(f)
    assert tr.dsc_chain[-1].K.is_empty and tr.dsc_chain[-1].eta is None


def test_drift_chains():
    tr = dsc_index(corpus.nested_drift())
    assert tr.dsc_index == 3
    assert [s.eta for s in tr.dsc_chain] == [1, 1, 0, None]
    for s in tr.dsc_chain:
        assert is_closed(s.K)
    assert dsc_index(corpus.drift_leaves()).dsc_index == 2


@given(funcs(max_rank=2, drift=True))
def test_chains_decrease_strictly(f):
    tr = dsc_index(f)
    ks = [s.K for s in tr.dsc_chain]
    for a, b in zip(ks, ks[1:]):
        assert a != b and (b - a).is_empty and is_closed(b)


def test_strong_continuity_points_of_chi_root_are_the_leaves():
    s = strong_continuity_points(corpus.chi_root())
    assert not s.contains(()) and s.contains((Tail(3, 0),))


@settings(max_examples=20)
@given(funcs(max_rank=2, drift=True))
def test_dense_strong_continuity_on_closed_subspaces(f):
    assert check_strong_continuity(f, 6).ok


def test_closed_subspaces_of_alternating_three():
    rep = check_strong_continuity(corpus.alternating(3), 8)
    assert rep.ok and rep.checked > 100
