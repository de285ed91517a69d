import pytest
from hypothesis import given, settings

from dscosc import corpus
from dscosc.oracle import certified_depth, dnorm_bounds, oracle_osc_alpha, unfold
from dscosc.oscillation import d_index, dbsc_norm, uv_decomposition
from dscosc.space import enumerate_points
from strategies import funcs, spaces


@given(spaces())
def test_unfolding_materializes_the_enumeration(sp):
    for k in (1, 2, 3):
        u = unfold(sp, k)
        addrs = [p.address for p in u.points]
        assert len(addrs) == len(set(addrs)) and set(addrs) == set(enumerate_points(sp, k))
        for i, p in enumerate(u.points):
            assert all(u.points[c].parent == i for c in p.prefix_children)
            assert all(u.points[c].parent == i for _, c in p.tail_children)


def test_rank_three_alternating_at_certified_depth():
    f = corpus.alternating(3)
    k = certified_depth(f)
    assert oracle_osc_alpha(f, 3, k)[()] == 3


@settings(max_examples=30)
@given(funcs(max_rank=2))
def test_oracle_is_stable_past_certified_depth(f):
    k = certified_depth(f)
    n = d_index(f) + 1
    deep = oracle_osc_alpha(f, n, k + 1)
    for addr, v in oracle_osc_alpha(f, n, k).items():
        assert deep[addr] == v


@given(funcs())
def test_norm_sits_between_oracle_bounds(f):
    uv = uv_decomposition(f)
    b = dnorm_bounds(f, (uv.u, uv.v))
    assert b.lower <= dbsc_norm(f) == b.upper


def test_norm_bounds_are_tight_on_named_examples():
    for name in ("chi_root", "alternating_2", "alternating_3", "sign_alternating"):
        f = corpus.named_functions()[name]
        uv = uv_decomposition(f)
        b = dnorm_bounds(f, (uv.u, uv.v))
        assert b.lower == b.upper == dbsc_norm(f), name


def test_bad_witness_is_rejected():
    f = corpus.chi_root()
    with pytest.raises(ValueError):
        dnorm_bounds(f, (f, f))
    with pytest.raises(ValueError):
        dnorm_bounds(corpus.drift_leaves())


def test_unfold_needs_positive_depth():
    with pytest.raises(ValueError):
        unfold(corpus.chi_root().shape, 0)
