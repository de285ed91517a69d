"""Brute-force cross-checks on materialized finite unfoldings.

Nothing here calls the engine's recursive sup, limsup or envelope code: the
unfolding is walked point by point and every limsup is an explicit minimum,
over a finite family of neighborhoods, of explicit maxima.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .func import FuncTree
from .space import Address, Prefix, Space, Tail


@dataclass(frozen=True)
class UPoint:
    address: Address
    parent: Optional[int]
    prefix_children: tuple[int, ...]
    tail_children: tuple[tuple[int, int], ...]  # (copy number, point index)
    truncated: bool  # a limit point whose tail is cut at k copies


@dataclass(frozen=True)
class UnfoldedSpace:
    k: int
    points: tuple[UPoint, ...]

    @property
    def size(self) -> int:
        return len(self.points)

    def index(self) -> dict:
        return {p.address: i for i, p in enumerate(self.points)}


def unfold(space: Space, k: int) -> UnfoldedSpace:
    """Every point with all copy numbers below ``k``, in depth-first order."""
    if k < 1:
        raise ValueError("k must be at least 1")
    pts: list = []

    def visit(node: Space, addr: Address, parent: Optional[int]) -> int:
        me = len(pts)
        pts.append(None)
        pre = []
        for i, child in enumerate(node.prefix):
            pre.append(visit(child, addr + (Prefix(i),), me))
        tails = []
        for c in range(k):
            for m, child in enumerate(node.period):
                tails.append((c, visit(child, addr + (Tail(c, m),), me)))
        pts[me] = UPoint(addr, parent, tuple(pre), tuple(tails), bool(node.period))
        return me

    visit(space, (), None)
    return UnfoldedSpace(k, tuple(pts))


def _values(f, k: int) -> list:
    """Point values of an annotation in unfolding order, drift included."""
    out: list = []

    def walk(node, offset):
        out.append(node.value + offset if isinstance(node, FuncTree) else node.member)
        for p in node.prefix:
            walk(p, offset)
        ovr = dict(node.overrides)
        drift = getattr(node, "drift", 0)
        for c in range(k):
            for m, member in enumerate(node.period):
                if (c, m) in ovr:
                    walk(ovr[(c, m)], offset)
                else:
                    walk(member, offset + c * drift)

    walk(f, Fraction(0))
    return out


def _descendants(u: UnfoldedSpace) -> list[list[int]]:
    desc: list[list[int]] = [[] for _ in u.points]
    for i in reversed(range(len(u.points))):
        p = u.points[i]
        acc = [i]
        for ch in p.prefix_children:
            acc.extend(desc[ch])
        for _, ch in p.tail_children:
            acc.extend(desc[ch])
        desc[i] = acc
    return desc


def _neighborhood_inf(u: UnfoldedSpace, i: int, own, block_max) -> object:
    """min over j < k of max(own, block maxima of tail copies numbered >= j)."""
    p = u.points[i]
    if not p.tail_children:
        return own
    best = None
    for j in range(u.k):
        vals = [own] + [block_max(ch) for c, ch in p.tail_children if c >= j]
        s = max(vals)
        best = s if best is None else min(best, s)
    return best


def oracle_limsup(g, x: Address, k: int):
    u = unfold(g.shape, k)
    vals = _values(g, k)
    desc = _descendants(u)
    i = u.index()[x]
    return _neighborhood_inf(u, i, vals[i], lambda ch: max(vals[d] for d in desc[ch]))


def _osc_stages(f: FuncTree, n: int, k: int, u: UnfoldedSpace, desc) -> list:
    vals = _values(f, k)
    osc = [Fraction(0)] * len(vals)
    for _ in range(n):
        tilde = []
        for i in range(len(vals)):
            a = vals[i]
            tilde.append(_neighborhood_inf(
                u, i, osc[i], lambda ch: max(abs(vals[d] - a) + osc[d] for d in desc[ch])))
        osc = [_neighborhood_inf(u, i, tilde[i], lambda ch: max(tilde[d] for d in desc[ch]))
               for i in range(len(vals))]
    return osc


def oracle_osc_alpha(f: FuncTree, n: int, k: int) -> dict:
    """osc_n f at every point of the k-unfolding, keyed by address."""
    u = unfold(f.shape, k)
    osc = _osc_stages(f, n, k, u, _descendants(u))
    return {p.address: v for p, v in zip(u.points, osc)}


def oracle_osc_classical(f: FuncTree, k: int) -> dict:
    u = unfold(f.shape, k)
    vals = _values(f, k)
    desc = _descendants(u)
    out = {}
    for i, p in enumerate(u.points):
        hi = _neighborhood_inf(u, i, vals[i], lambda ch: max(vals[d] for d in desc[ch]))
        lo = -_neighborhood_inf(u, i, -vals[i], lambda ch: max(-vals[d] for d in desc[ch]))
        out[p.address] = hi - lo
    return out


def max_override_copy(tree) -> int:
    """Largest overridden copy number anywhere in an annotation, -1 if none."""
    best = max((c for (c, _), _ in tree.overrides), default=-1)
    for child in tuple(tree.prefix) + tuple(tree.period) + tuple(s for _, s in tree.overrides):
        best = max(best, max_override_copy(child))
    return best


def certified_depth(tree) -> int:
    """Unfolding depth from which drift-free oracle values are exact.

    Once the last materialized copy is a non-overridden one, every
    neighborhood sup over copies ``>= j`` is already attained.
    """
    return max(2, max_override_copy(tree) + 2)


@dataclass(frozen=True)
class DNormBounds:
    lower: Fraction
    upper: Fraction
    k: int


def _greedy_lower(f: FuncTree, k: int) -> Fraction:
    # Any u - v = f with u, v >= 0 LSC has, near a limit point a and for y in
    # late copies, u(y) + v(y) >= u(a) + v(a) + |f(y) - f(a)| - eps.  Non-overridden
    # copies repeat forever, so the chain of such bounds is realized.
    u = unfold(f.shape, k)
    vals = _values(f, k)
    non_override = _late_flags(f, k)
    w = [Fraction(0)] * len(vals)
    ancestors: list[list[int]] = [[] for _ in vals]
    for i, p in enumerate(u.points):
        for ch in p.prefix_children:
            ancestors[ch] = ancestors[i]
        for _, ch in p.tail_children:
            ancestors[ch] = ancestors[i] + ([i] if non_override[ch] else [])
    for i in range(len(vals)):  # parents precede children
        w[i] = max([abs(vals[i])] + [w[a] + abs(vals[i] - vals[a]) for a in ancestors[i]])
    return max(w)


def _late_flags(f: FuncTree, k: int) -> list[bool]:
    out: list[bool] = []

    def walk(node, flag):
        out.append(flag)
        for p in node.prefix:
            walk(p, False)
        ovr = dict(node.overrides)
        for c in range(k):
            for m, member in enumerate(node.period):
                walk(ovr.get((c, m), member), (c, m) not in ovr)

    walk(f, False)
    return out


def dnorm_bounds(f: FuncTree, upper_witness=None, k: Optional[int] = None) -> DNormBounds:
    """Lower certificate from LSC-chain bounds, upper from a u - v witness.

    ``upper_witness`` is a pair (u, v); the upper bound is the largest value of
    u + v over the unfolding after checking u - v = f and u, v >= 0 there.
    """
    if not f.drift_free:
        raise ValueError("norm bounds need a bounded function")
    kk = k if k is not None else certified_depth(f)
    lower = _greedy_lower(f, kk)
    upper = None
    if upper_witness is not None:
        uu, vv = upper_witness
        kk = max(kk, certified_depth(uu), certified_depth(vv))
        fv, uv, vv_ = _values(f, kk), _values(uu, kk), _values(vv, kk)
        for a, b, c in zip(fv, uv, vv_):
            if b - c != a or b < 0 or c < 0:
                raise ValueError("witness is not a valid decomposition")
        upper = max(b + c for b, c in zip(uv, vv_))
    return DNormBounds(lower, upper, kk)
