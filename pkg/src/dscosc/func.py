"""Exact functions on finitely presented spaces.

A :class:`FuncTree` carries a rational at every node.  At a limit node the
tail copy ``c`` of period member ``m`` carries the member's annotation shifted
by ``c * drift`` unless that copy is overridden; override annotations are
stored already shifted.  Oscillation profiles reuse the same class with
values in the nonnegative rationals plus ``INF`` and no drift.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Union

from .space import (
    Address,
    Prefix,
    ShapeError,
    Space,
    SubsetTree,
    Selector,
    _local_nodes,
    override_union,
)

INF = math.inf
Value = Union[Fraction, float]


def to_value(x) -> Value:
    if isinstance(x, float):
        if x == INF:
            return INF
        raise ValueError(f"only +inf may appear as a non-rational value, got {x!r}")
    if isinstance(x, str) and x.strip() in ("inf", "+inf", "∞"):
        return INF
    return Fraction(x)


def _shift_value(v: Value, s: Fraction) -> Value:
    return v if v == INF else v + s


def _scale_value(q: Fraction, v: Value) -> Value:
    if v == INF:
        if q < 0:
            raise ValueError("cannot scale +inf by a negative number")
        return INF
    return q * v


@dataclass(frozen=True)
class FuncTree:
    value: Value
    prefix: tuple[FuncTree, ...] = ()
    period: tuple[FuncTree, ...] = ()
    drift: Fraction = Fraction(0)
    overrides: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "value", to_value(self.value))
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "period", tuple(self.period))
        d = Fraction(self.drift) if self.period else Fraction(0)
        object.__setattr__(self, "drift", d)
        raw = self.overrides if isinstance(self.overrides, dict) else {tuple(k): v for k, v in self.overrides}
        kept = []
        for (c, m), sub in sorted(raw.items()):
            if c < 0 or not 0 <= m < len(self.period):
                raise ShapeError(f"override key {(c, m)} invalid")
            if sub != self.period[m].shift(c * d):
                kept.append(((c, m), sub))
        object.__setattr__(self, "overrides", tuple(kept))

    @property
    def head(self) -> Value:
        return self.value

    @classmethod
    def build(cls, head, prefix, period, drift, overrides) -> FuncTree:
        return cls(head, tuple(prefix), tuple(period), drift, overrides)

    @cached_property
    def _ovr(self) -> dict:
        return dict(self.overrides)

    @property
    def override_keys(self) -> list[tuple[int, int]]:
        return [k for k, _ in self.overrides]

    def shift(self, s) -> FuncTree:
        if s == 0:
            return self
        return FuncTree(
            _shift_value(self.value, s),
            tuple(p.shift(s) for p in self.prefix),
            tuple(m.shift(s) for m in self.period),
            self.drift,
            {k: sub.shift(s) for k, sub in self.overrides},
        )

    def copy(self, c: int, m: int) -> FuncTree:
        """Annotation of tail copy ``c`` of member ``m``, in this node's frame."""
        sub = self._ovr.get((c, m))
        if sub is not None:
            return sub
        return self.period[m].shift(c * self.drift)

    def child(self, sel: Selector) -> FuncTree:
        if isinstance(sel, Prefix):
            return self.prefix[sel.index]
        return self.copy(sel.copy, sel.member)

    def at(self, path: Address) -> FuncTree:
        node = self
        for sel in path:
            node = node.child(sel)
        return node

    @cached_property
    def shape(self) -> Space:
        sp = Space(tuple(p.shape for p in self.prefix), tuple(m.shape for m in self.period))
        for (_, m), sub in self.overrides:
            if sub.shape != sp.period[m]:
                raise ShapeError("override shape differs from its period member")
        return sp

    @cached_property
    def drift_free(self) -> bool:
        return self.drift == 0 and all(n.drift_free for n in self.prefix + self.period) and all(
            s.drift_free for _, s in self.overrides)

    @cached_property
    def sup(self) -> Value:
        """Exact supremum over the whole subtree (may be +inf)."""
        vals = [self.value] + [p.sup for p in self.prefix] + [s.sup for _, s in self.overrides]
        for m, member in enumerate(self.period):
            s = member.sup
            if s == INF or self.drift > 0:
                return INF
            vals.append(s + _first_free(self, m) * self.drift)
        return max(vals)

    @cached_property
    def inf(self) -> Value:
        """Exact infimum over the whole subtree (may be -inf)."""
        vals = [self.value] + [p.inf for p in self.prefix] + [s.inf for _, s in self.overrides]
        for m, member in enumerate(self.period):
            s = member.inf
            if s == -INF or self.drift < 0:
                return -INF
            vals.append(s + _first_free(self, m) * self.drift)
        return min(vals)

    @cached_property
    def bounded(self) -> bool:
        return self.sup < INF and self.inf > -INF

    def __add__(self, other):
        return add(self, other)

    def __neg__(self):
        return negate(self)

    def __sub__(self, other):
        return add(self, negate(other))


OscProfile = FuncTree


def _first_free(t, m: int, keys=None) -> int:
    taken = {c for c, mm in (t.override_keys if keys is None else keys) if mm == m}
    c = 0
    while c in taken:
        c += 1
    return c


def const(space: Space, c) -> FuncTree:
    return FuncTree(c, tuple(const(p, c) for p in space.prefix), tuple(const(m, c) for m in space.period))


def zero(space: Space) -> FuncTree:
    return const(space, 0)


def indicator(s: SubsetTree, value=1) -> FuncTree:
    v = Fraction(value)
    return FuncTree(
        v if s.member else 0,
        tuple(indicator(p, v) for p in s.prefix),
        tuple(indicator(m, v) for m in s.period),
        0,
        {k: indicator(sub, v) for k, sub in s.overrides},
    )


def evaluate(f: FuncTree, x: Address) -> Value:
    try:
        return f.at(x).value
    except (IndexError, ShapeError) as exc:
        raise ShapeError(f"invalid address {x!r}") from exc


def _check_shape(a, b):
    if len(a.prefix) != len(b.prefix) or len(a.period) != len(b.period):
        raise ShapeError("trees have different shapes")


# ---------------------------------------------------------------------------
# Algebra


def add(f: FuncTree, g: FuncTree) -> FuncTree:
    _check_shape(f, g)
    return FuncTree(
        f.value + g.value,
        tuple(add(a, b) for a, b in zip(f.prefix, g.prefix)),
        tuple(add(a, b) for a, b in zip(f.period, g.period)),
        f.drift + g.drift,
        {k: add(f.copy(*k), g.copy(*k)) for k in override_union(f, g)},
    )


def scale(q, f: FuncTree) -> FuncTree:
    q = Fraction(q)
    if q == 0:
        return zero(f.shape)
    return FuncTree(
        _scale_value(q, f.value),
        tuple(scale(q, p) for p in f.prefix),
        tuple(scale(q, m) for m in f.period),
        q * f.drift,
        {k: scale(q, s) for k, s in f.overrides},
    )


def negate(f: FuncTree) -> FuncTree:
    return scale(-1, f)


def map_values(fn: Callable[[Value], Value], f: FuncTree) -> FuncTree:
    """Apply ``fn`` pointwise; only defined for drift-free trees."""
    if not f.drift_free:
        raise ValueError("pointwise map needs a drift-free tree")
    return FuncTree(
        fn(f.value),
        tuple(map_values(fn, p) for p in f.prefix),
        tuple(map_values(fn, m) for m in f.period),
        0,
        {k: map_values(fn, s) for k, s in f.overrides},
    )


def absolute(f: FuncTree) -> FuncTree:
    return map_values(abs, f)


def _zip_free(op, f: FuncTree, g: FuncTree) -> FuncTree:
    if not (f.drift_free and g.drift_free):
        raise ValueError("pointwise max/min needs drift-free trees")
    _check_shape(f, g)
    return FuncTree(
        op(f.value, g.value),
        tuple(_zip_free(op, a, b) for a, b in zip(f.prefix, g.prefix)),
        tuple(_zip_free(op, a, b) for a, b in zip(f.period, g.period)),
        0,
        {k: _zip_free(op, f.copy(*k), g.copy(*k)) for k in override_union(f, g)},
    )


def pointwise_max(f: FuncTree, g: FuncTree) -> FuncTree:
    return _zip_free(max, f, g)


def pointwise_min(f: FuncTree, g: FuncTree) -> FuncTree:
    return _zip_free(min, f, g)


def select(s: SubsetTree, f: FuncTree, g: FuncTree) -> FuncTree:
    """``f`` on ``s`` and ``g`` off it.

    Where the tail copies of a node mix both functions, their drifts must agree.
    """
    _check_shape(f, g)
    if s.is_full:
        return f
    if s.is_empty:
        return g
    if f.drift == g.drift:
        d = f.drift
    elif all(m.is_full for m in s.period):
        d = f.drift
    elif all(m.is_empty for m in s.period):
        d = g.drift
    else:
        raise ValueError("cannot glue functions with different drifts on the same tail")
    return FuncTree(
        f.value if s.member else g.value,
        tuple(select(a, b, c) for a, b, c in zip(s.prefix, f.prefix, g.prefix)),
        tuple(select(a, b, c) for a, b, c in zip(s.period, f.period, g.period)),
        d,
        {k: select(s.copy(*k), f.copy(*k), g.copy(*k)) for k in override_union(f, g, s)},
    )


def restrict_values(f: FuncTree, s: SubsetTree, fill=0) -> FuncTree:
    return select(s, f, const(f.shape, fill))


def level_set(f: FuncTree, pred: Callable[[Value], bool]) -> SubsetTree:
    if not f.drift_free:
        raise ValueError("level sets need a drift-free tree")
    return SubsetTree(
        pred(f.value),
        tuple(level_set(p, pred) for p in f.prefix),
        tuple(level_set(m, pred) for m in f.period),
        {k: level_set(s, pred) for k, s in f.overrides},
    )


def values(f: FuncTree) -> set:
    """All values taken by a drift-free tree."""
    if not f.drift_free:
        raise ValueError("value set of a drifting tree is infinite")
    return {n.value for n in _local_nodes(f)}


def le(f: FuncTree, g: FuncTree) -> bool:
    """Pointwise f <= g at every point of the space."""
    _check_shape(f, g)
    if f.drift_free and g.drift_free:
        return (f.value <= g.value
                and all(le(a, b) for a, b in zip(f.prefix, g.prefix))
                and all(le(a, b) for a, b in zip(f.period, g.period))
                and all(le(f.copy(*k), g.copy(*k)) for k in override_union(f, g)))
    return add(g, negate(f)).inf >= 0


def equal_on(f: FuncTree, g: FuncTree) -> bool:
    return f == g


# ---------------------------------------------------------------------------
# Sups, limsups, envelopes


def sup_over(g: FuncTree, s: SubsetTree) -> Value:
    if s.is_empty:
        raise ValueError("supremum over the empty set")
    return _extreme_over(g, s, 1)


def inf_over(g: FuncTree, s: SubsetTree) -> Value:
    if s.is_empty:
        raise ValueError("infimum over the empty set")
    return _extreme_over(g, s, -1)


def _extreme_over(g: FuncTree, s: SubsetTree, sign: int) -> Value:
    # sign = 1 for the supremum, -1 for the infimum
    _check_shape(g, s)
    pick = max if sign > 0 else min
    vals = []
    if s.member:
        vals.append(g.value)
    for a, b in zip(g.prefix, s.prefix):
        if not b.is_empty:
            vals.append(_extreme_over(a, b, sign))
    keys = override_union(g, s)
    for k in keys:
        sub = s.copy(*k)
        if not sub.is_empty:
            vals.append(_extreme_over(g.copy(*k), sub, sign))
    for m, sm in enumerate(s.period):
        if sm.is_empty:
            continue
        inner = _extreme_over(g.period[m], sm, sign)
        if inner == sign * INF or sign * g.drift > 0:
            return sign * INF
        vals.append(inner + _first_free(g, m, keys) * g.drift)
    return pick(vals)


def _tail_limit(g: FuncTree, s: SubsetTree | None, sign: int) -> Value | None:
    out = None
    for m, member in enumerate(g.period):
        if s is not None:
            if s.period[m].is_empty:
                continue
            ext = _extreme_over(member, s.period[m], sign)
        else:
            ext = member.sup if sign > 0 else member.inf
        if ext == sign * INF or sign * g.drift > 0:
            v = sign * INF
        elif g.drift != 0:
            v = -sign * INF
        else:
            v = ext
        out = v if out is None else (max(out, v) if sign > 0 else min(out, v))
    return out


def limsup_tails(g: FuncTree, s: SubsetTree | None = None) -> Value | None:
    """lim sup of g over tail points (restricted to s); None when nothing accumulates."""
    return _tail_limit(g, s, 1)


def liminf_tails(g: FuncTree, s: SubsetTree | None = None) -> Value | None:
    return _tail_limit(g, s, -1)


def limsup_at(g: FuncTree, x: Address) -> Value:
    node = g.at(x)
    t = limsup_tails(node)
    return node.value if t is None else max(node.value, t)


def liminf_at(g: FuncTree, x: Address) -> Value:
    node = g.at(x)
    t = liminf_tails(node)
    return node.value if t is None else min(node.value, t)


def usc_envelope(g: FuncTree) -> FuncTree:
    if not g.drift_free:
        raise ValueError("envelope is only taken of drift-free trees")
    t = limsup_tails(g)
    return FuncTree(
        g.value if t is None else max(g.value, t),
        tuple(usc_envelope(p) for p in g.prefix),
        tuple(usc_envelope(m) for m in g.period),
        0,
        {k: usc_envelope(s) for k, s in g.overrides},
    )


def is_usc(f: FuncTree) -> bool:
    for n in _local_nodes(f):
        t = limsup_tails(n)
        if t is not None and t > n.value:
            return False
    return True


def is_lsc(f: FuncTree) -> bool:
    for n in _local_nodes(f):
        t = liminf_tails(n)
        if t is not None and t < n.value:
            return False
    return True


def is_continuous(f: FuncTree) -> bool:
    return is_usc(f) and is_lsc(f)


def _local_pairs(f: FuncTree, s: SubsetTree):
    yield f, s
    for a, b in zip(f.prefix, s.prefix):
        yield from _local_pairs(a, b)
    for k in override_union(f, s):
        yield from _local_pairs(f.copy(*k), s.copy(*k))
    for a, b in zip(f.period, s.period):
        yield from _local_pairs(a, b)


def is_continuous_on(f: FuncTree, s: SubsetTree) -> bool:
    """Continuity of the restriction of f to the (not necessarily closed) set s."""
    _check_shape(f, s)
    for node, sub in _local_pairs(f, s):
        if not sub.member:
            continue
        hi = limsup_tails(node, sub)
        if hi is None:
            continue
        lo = liminf_tails(node, sub)
        if hi != node.value or lo != node.value:
            return False
    return True
