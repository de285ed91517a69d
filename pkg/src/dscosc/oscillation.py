"""Transfinite oscillations and the indices built from them.

On a finitely presented space every stage of the hierarchy is a finite
ordinal, so ``osc_n`` is computed by iterating :func:`osc_next` from the zero
profile until two consecutive profiles coincide structurally.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .func import (
    INF,
    FuncTree,
    Value,
    absolute,
    add,
    const,
    is_lsc,
    le,
    level_set,
    liminf_tails,
    limsup_tails,
    negate,
    scale,
    usc_envelope,
    zero,
)
from .space import (
    Space,
    SubsetTree,
    closed_subsets,
    closure,
    difference,
    full,
    is_closed,
    isolated_points,
    override_union,
    pull,
    push,
    restrict,
)


def osc_classical(f: FuncTree) -> FuncTree:
    """limsup f - liminf f at every point, infinite when either side is."""
    hi = limsup_tails(f)
    lo = liminf_tails(f)
    if hi is None:
        v = Fraction(0)
    else:
        top, bottom = max(f.value, hi), min(f.value, lo)
        v = INF if top == INF or bottom == -INF else top - bottom
    keys = f.override_keys
    return FuncTree(
        v,
        tuple(osc_classical(p) for p in f.prefix),
        tuple(osc_classical(m) for m in f.period),
        0,
        {k: osc_classical(f.copy(*k)) for k in keys},
    )


def _deviation_sup(f: FuncTree, prev: FuncTree, a: Value) -> Value:
    # sup over the subtree of |f(y) - a| + prev(y)
    best = abs(f.value - a) + prev.value
    if best == INF:
        return INF
    for p, q in zip(f.prefix, prev.prefix):
        best = max(best, _deviation_sup(p, q, a))
    for k in override_union(f, prev):
        best = max(best, _deviation_sup(f.copy(*k), prev.copy(*k), a))
    if f.period and f.drift != 0:
        return INF
    for p, q in zip(f.period, prev.period):
        best = max(best, _deviation_sup(p, q, a))
    return best


def _tilde(f: FuncTree, prev: FuncTree) -> FuncTree:
    v = prev.value
    if f.period:
        if f.drift != 0:
            v = INF
        else:
            for p, q in zip(f.period, prev.period):
                v = max(v, _deviation_sup(p, q, f.value))
    # a tail copy differs from its base member by a constant shift, which
    # leaves every |f(y) - f(z)| inside the copy unchanged
    return FuncTree(
        v,
        tuple(_tilde(p, q) for p, q in zip(f.prefix, prev.prefix)),
        tuple(_tilde(p, q) for p, q in zip(f.period, prev.period)),
        0,
        {k: _tilde(f.copy(*k), prev.copy(*k)) for k in override_union(f, prev)},
    )


def osc_next(f: FuncTree, prev: FuncTree) -> FuncTree:
    """One successor step: the USC envelope of y -> limsup |f(y) - f(x)| + prev(y)."""
    if f.shape != prev.shape:
        raise ValueError("profile does not match the function's space")
    return usc_envelope(_tilde(f, prev))


def osc_sequence(f: FuncTree, n: int) -> list[FuncTree]:
    """[osc_0 f, ..., osc_n f]."""
    out = [zero(f.shape)]
    for _ in range(n):
        out.append(osc_next(f, out[-1]))
    return out


def osc_alpha(f: FuncTree, n: int) -> FuncTree:
    if n < 0:
        raise ValueError("stage must be a natural number")
    return osc_sequence(f, n)[-1]


def stage_bound(space: Space) -> int:
    return 2 * space.height + 1


def _stabilize(f: FuncTree) -> tuple[int, FuncTree]:
    bound = stage_bound(f.shape)
    prev = zero(f.shape)
    for n in range(bound + 1):
        nxt = osc_next(f, prev)
        if nxt == prev:
            return n, prev
        prev = nxt
    raise RuntimeError(f"oscillation did not stabilize within {bound} stages")


def d_index(f: FuncTree) -> int:
    """Least n with osc_n f = osc_{n+1} f."""
    return _stabilize(f)[0]


def stable_osc(f: FuncTree) -> FuncTree:
    """osc_n f at the stabilization stage; every later stage, and osc_omega, equals it."""
    return _stabilize(f)[1]


def strong_continuity_points(f: FuncTree) -> SubsetTree:
    return level_set(stable_osc(f), lambda v: v == 0)


# ---------------------------------------------------------------------------
# D-norm and the u - v decomposition


@dataclass(frozen=True)
class UVDecomposition:
    u: FuncTree
    v: FuncTree
    tau: int
    d_norm: Value


def _norm_data(f: FuncTree):
    tau, prof = _stabilize(f)
    if not f.drift_free:
        return tau, prof, INF
    c = add(absolute(f), prof).sup
    return tau, prof, c


def dbsc_norm(f: FuncTree) -> Value:
    """sup(|f| + P) - inf(P) with P the stable oscillation; +inf outside DBSC."""
    _, prof, c = _norm_data(f)
    if c == INF:
        return INF
    return c - prof.inf


def uv_decomposition(f: FuncTree) -> Optional[UVDecomposition]:
    """Nonnegative LSC u, v with u - v = f and sup(u + v) equal to the D-norm.

    Returns None when the norm is infinite.
    """
    tau, prof, c = _norm_data(f)
    if c == INF:
        return None
    base = add(const(f.shape, c), negate(prof))
    u = scale(Fraction(1, 2), add(base, f))
    v = scale(Fraction(1, 2), add(base, negate(f)))
    norm = c - prof.inf
    nil = zero(f.shape)
    if add(u, negate(v)) != f:
        raise RuntimeError("u - v differs from f")
    if not (le(nil, u) and le(nil, v)):
        raise RuntimeError("u or v takes a negative value")
    if not (is_lsc(u) and is_lsc(v)):
        raise RuntimeError("u or v is not lower semi-continuous")
    if add(u, v).sup != norm:
        raise RuntimeError("sup(u + v) differs from the norm")
    return UVDecomposition(u, v, tau, norm)


# ---------------------------------------------------------------------------
# The derived-set chain


@dataclass(frozen=True)
class ChainStep:
    K: SubsetTree
    eta: Optional[int]


@dataclass(frozen=True)
class IndexTrace:
    d_index: int
    dsc_chain: tuple[ChainStep, ...]
    dsc_index: int
    verdict: str  # "DSC" or "NOT_DETERMINED"


def dsc_index(f: FuncTree) -> IndexTrace:
    space = f.shape
    K = full(space)
    steps: list[ChainStep] = []
    verdict = "NOT_DETERMINED"
    while True:
        sub, emb = restrict(space, K)
        g = pull(emb, f)
        eta, prof = _stabilize(g)
        steps.append(ChainStep(K, eta))
        nxt = push(emb, level_set(prof, lambda v: v == INF), space)
        if nxt.is_empty:
            steps.append(ChainStep(nxt, None))
            verdict = "DSC"
            break
        if nxt == K:
            break
        K = nxt
    return IndexTrace(steps[0].eta, tuple(steps), len(steps) - 1, verdict)


# ---------------------------------------------------------------------------
# Strong continuity points on closed subspaces


@dataclass(frozen=True)
class ContinuityReport:
    checked: int
    violations: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.violations


def check_strong_continuity(f: FuncTree, max_size: int = 12) -> ContinuityReport:
    """For every closed L in the generated family, f|L has a dense set of strong continuity points."""
    problems = []
    family = closed_subsets(f.shape, max_size)
    for L in family:
        sub, emb = restrict(f.shape, L)
        g = pull(emb, f)
        prof = stable_osc(g)
        good = level_set(prof, lambda v: v == 0)
        tag = repr(L) if len(problems) < 5 else ""
        if good.is_empty:
            problems.append(f"no strong continuity point on {tag}")
            continue
        if not closure(good).is_full:
            problems.append(f"strong continuity points not dense on {tag}")
        # the isolated points form a dense open (so dense G_delta) subset
        iso = isolated_points(sub)
        if not closure(iso).is_full or not difference(iso, good).is_empty:
            problems.append(f"dense G_delta not contained on {tag}")
        if prof.inf == INF:
            problems.append(f"no point with finite oscillation on {tag}")
        if not is_closed(L):
            problems.append("generated L is not closed")
    return ContinuityReport(len(family), tuple(problems))
