"""Finitely presented countable compact spaces.

A :class:`Space` node is one point.  Its ``prefix`` children are finitely
many clopen pieces hanging off it; its ``period`` members are repeated
forever (copy 0 of every member, then copy 1, ...) and their root points
converge to the node.  A node with an empty period is isolated.

Subsets are :class:`SubsetTree` annotations of the same shape, where every
tail copy follows its period member's flags except for finitely many
overridden copies.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator


class ShapeError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Prefix:
    index: int


@dataclass(frozen=True, order=True)
class Tail:
    copy: int
    member: int


Selector = Prefix | Tail
Address = tuple[Selector, ...]
ROOT: Address = ()


@dataclass(frozen=True)
class Space:
    prefix: tuple[Space, ...] = ()
    period: tuple[Space, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "period", tuple(self.period))

    @property
    def is_limit(self) -> bool:
        return bool(self.period)

    @cached_property
    def point_rank(self) -> int:
        """Cantor-Bendixson rank of the root point."""
        if not self.period:
            return 0
        return 1 + max(m.height for m in self.period)

    @cached_property
    def height(self) -> int:
        """Largest point rank anywhere in the space."""
        return max([self.point_rank] + [p.height for p in self.prefix] + [m.height for m in self.period])

    @cached_property
    def longest_period(self) -> int:
        return max([len(self.period)] + [c.longest_period for c in self.prefix + self.period])

    @cached_property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.prefix + self.period)

    def at(self, path: Address) -> Space:
        node = self
        for sel in path:
            node = node.child(sel)
        return node

    def child(self, sel: Selector) -> Space:
        if isinstance(sel, Prefix):
            if not 0 <= sel.index < len(self.prefix):
                raise ShapeError(f"prefix index {sel.index} out of range")
            return self.prefix[sel.index]
        if sel.copy < 0 or not 0 <= sel.member < len(self.period):
            raise ShapeError(f"tail selector {sel} invalid")
        return self.period[sel.member]


LEAF = Space()


def rank(space: Space) -> int:
    return space.point_rank


def ordinal_space(k: int) -> Space:
    """The space omega^k + 1 with single-member periods."""
    node = LEAF
    for _ in range(k):
        node = Space(period=(node,))
    return node


def enumerate_points(space: Space, copy_budget: int) -> list[Address]:
    """Breadth-first list of points whose tail-copy numbers are all below the budget."""
    if copy_budget < 1:
        raise ValueError("copy_budget must be >= 1")
    out: list[Address] = []
    queue = [(ROOT, space)]
    while queue:
        nxt = []
        for addr, node in queue:
            out.append(addr)
            for i, p in enumerate(node.prefix):
                nxt.append((addr + (Prefix(i),), p))
            for c in range(copy_budget):
                for m, q in enumerate(node.period):
                    nxt.append((addr + (Tail(c, m),), q))
        queue = nxt
    return out


def is_valid_address(space: Space, addr: Address) -> bool:
    try:
        space.at(addr)
    except ShapeError:
        return False
    return True


def max_copy(addr: Address) -> int:
    return max((s.copy for s in addr if isinstance(s, Tail)), default=-1)


# canonical address strings: "ε", "P0", "T3.1" (copy 3, member 1); ".m" dropped for one-member periods


def format_address(addr: Address, space: Space | None = None) -> str:
    if not addr:
        return "ε"
    parts = []
    node = space
    for sel in addr:
        if isinstance(sel, Prefix):
            parts.append(f"P{sel.index}")
        elif node is not None and len(node.period) == 1:
            parts.append(f"T{sel.copy}")
        else:
            parts.append(f"T{sel.copy}.{sel.member}")
        if node is not None:
            node = node.child(sel)
    return ".".join(parts)


def parse_address(text: str) -> Address:
    text = text.strip()
    if text in ("ε", "", "root"):
        return ROOT
    tokens = text.split(".")
    out: list[Selector] = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok[:1] == "P" and tok[1:].isdigit():
            out.append(Prefix(int(tok[1:])))
        elif tok[:1] == "T" and tok[1:].isdigit():
            member = 0
            if i + 1 < len(tokens) and tokens[i + 1].isdigit():
                member = int(tokens[i + 1])
                i += 1
            out.append(Tail(int(tok[1:]), member))
        else:
            raise ValueError(f"bad address component {tok!r} in {text!r}")
        i += 1
    return tuple(out)


# ---------------------------------------------------------------------------
# Subsets


def _norm_overrides(raw) -> dict:
    if isinstance(raw, dict):
        return dict(raw)
    return {tuple(k): v for k, v in raw}


@dataclass(frozen=True)
class SubsetTree:
    member: bool
    prefix: tuple[SubsetTree, ...] = ()
    period: tuple[SubsetTree, ...] = ()
    overrides: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "member", bool(self.member))
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "period", tuple(self.period))
        ovr = _norm_overrides(self.overrides)
        kept = []
        for (c, m), sub in sorted(ovr.items()):
            if not 0 <= m < len(self.period) or c < 0:
                raise ShapeError(f"override key {(c, m)} invalid")
            if sub != self.period[m]:
                kept.append(((c, m), sub))
        object.__setattr__(self, "overrides", tuple(kept))

    # generic tree protocol shared with FuncTree
    @property
    def head(self) -> bool:
        return self.member

    drift = 0

    @classmethod
    def build(cls, head, prefix, period, drift, overrides) -> SubsetTree:
        return cls(head, tuple(prefix), tuple(period), overrides)

    @cached_property
    def _ovr(self) -> dict:
        return dict(self.overrides)

    @property
    def override_keys(self) -> list[tuple[int, int]]:
        return [k for k, _ in self.overrides]

    def shift(self, s) -> SubsetTree:
        return self

    def copy(self, c: int, m: int) -> SubsetTree:
        return self._ovr.get((c, m), self.period[m])

    def child(self, sel: Selector) -> SubsetTree:
        if isinstance(sel, Prefix):
            return self.prefix[sel.index]
        return self.copy(sel.copy, sel.member)

    def at(self, path: Address) -> SubsetTree:
        node = self
        for sel in path:
            node = node.child(sel)
        return node

    def contains(self, addr: Address) -> bool:
        return self.at(addr).member

    @cached_property
    def is_empty(self) -> bool:
        return (not self.member and all(p.is_empty for p in self.prefix)
                and all(m.is_empty for m in self.period)
                and all(s.is_empty for _, s in self.overrides))

    @cached_property
    def is_full(self) -> bool:
        return (self.member and all(p.is_full for p in self.prefix)
                and all(m.is_full for m in self.period)
                and all(s.is_full for _, s in self.overrides))

    @cached_property
    def size(self) -> int:
        """Description size, counting a uniform subtree as one node."""
        if self.is_empty or self.is_full:
            return 1
        return 1 + sum(c.size for c in self.prefix + self.period) + sum(s.size for _, s in self.overrides)

    @cached_property
    def shape(self) -> Space:
        sp = Space(tuple(p.shape for p in self.prefix), tuple(m.shape for m in self.period))
        for (_, m), sub in self.overrides:
            if sub.shape != sp.period[m]:
                raise ShapeError("override shape differs from its period member")
        return sp

    def members(self, copy_budget: int) -> list[Address]:
        return [a for a in enumerate_points(self.shape, copy_budget) if self.contains(a)]

    def __or__(self, other):
        return union(self, other)

    def __and__(self, other):
        return intersection(self, other)

    def __sub__(self, other):
        return difference(self, other)

    def __invert__(self):
        return complement(self)


def full(space: Space) -> SubsetTree:
    return SubsetTree(True, tuple(full(p) for p in space.prefix), tuple(full(m) for m in space.period))


def empty(space: Space) -> SubsetTree:
    return SubsetTree(False, tuple(empty(p) for p in space.prefix), tuple(empty(m) for m in space.period))


def uniform(space: Space, flag: bool) -> SubsetTree:
    return full(space) if flag else empty(space)


def root_only(space: Space) -> SubsetTree:
    e = empty(space)
    return SubsetTree(True, e.prefix, e.period)


def singleton(space: Space, addr: Address) -> SubsetTree:
    return place(space, addr, root_only(space.at(addr)))


def place(space: Space, path: Address, sub: SubsetTree) -> SubsetTree:
    """Subset of ``space`` that is ``sub`` inside the subtree at ``path`` and empty elsewhere."""
    if not path:
        return sub
    sel, rest = path[0], path[1:]
    base = empty(space)
    if isinstance(sel, Prefix):
        prefix = list(base.prefix)
        prefix[sel.index] = place(space.prefix[sel.index], rest, sub)
        return SubsetTree(False, prefix, base.period)
    inner = place(space.period[sel.member], rest, sub)
    return SubsetTree(False, base.prefix, base.period, {(sel.copy, sel.member): inner})


def from_points(space: Space, addrs) -> SubsetTree:
    out = empty(space)
    for a in addrs:
        out = union(out, singleton(space, a))
    return out


def _check_shape(a, b):
    if len(a.prefix) != len(b.prefix) or len(a.period) != len(b.period):
        raise ShapeError("trees have different shapes")


def override_union(*trees) -> list[tuple[int, int]]:
    keys = set()
    for t in trees:
        keys.update(t.override_keys)
    return sorted(keys)


def _zip_sets(op, a: SubsetTree, b: SubsetTree) -> SubsetTree:
    _check_shape(a, b)
    return SubsetTree(
        op(a.member, b.member),
        tuple(_zip_sets(op, x, y) for x, y in zip(a.prefix, b.prefix)),
        tuple(_zip_sets(op, x, y) for x, y in zip(a.period, b.period)),
        {k: _zip_sets(op, a.copy(*k), b.copy(*k)) for k in override_union(a, b)},
    )


def union(a: SubsetTree, b: SubsetTree) -> SubsetTree:
    return _zip_sets(lambda x, y: x or y, a, b)


def intersection(a: SubsetTree, b: SubsetTree) -> SubsetTree:
    return _zip_sets(lambda x, y: x and y, a, b)


def difference(a: SubsetTree, b: SubsetTree) -> SubsetTree:
    return _zip_sets(lambda x, y: x and not y, a, b)


def complement(a: SubsetTree) -> SubsetTree:
    return SubsetTree(
        not a.member,
        tuple(complement(p) for p in a.prefix),
        tuple(complement(m) for m in a.period),
        {k: complement(s) for k, s in a.overrides},
    )


def _local_nodes(t) -> Iterator:
    """Every node of a tree up to periodicity: each override copy and each base member once."""
    yield t
    for p in t.prefix:
        yield from _local_nodes(p)
    for _, sub in t.overrides:
        yield from _local_nodes(sub)
    for m in t.period:
        yield from _local_nodes(m)


def closure(s: SubsetTree) -> SubsetTree:
    accumulates = any(not m.is_empty for m in s.period)
    return SubsetTree(
        s.member or accumulates,
        tuple(closure(p) for p in s.prefix),
        tuple(closure(m) for m in s.period),
        {k: closure(sub) for k, sub in s.overrides},
    )


def interior(s: SubsetTree) -> SubsetTree:
    return complement(closure(complement(s)))


def is_closed(s: SubsetTree) -> bool:
    return all(n.member or all(m.is_empty for m in n.period) for n in _local_nodes(s))


def is_open(s: SubsetTree) -> bool:
    return is_closed(complement(s))


def is_locally_closed(s: SubsetTree) -> bool:
    """True iff the set is a difference of two closed sets."""
    return is_closed(difference(closure(s), s))


@dataclass(frozen=True)
class Classification:
    is_closed: bool
    is_open: bool
    is_ambiguous: bool
    is_difference_of_closed: bool


def classify_subset(s: SubsetTree, space: Space | None = None) -> Classification:
    if space is not None and s.shape != space:
        raise ShapeError("subset does not match space")
    # every subset of a countable space is a countable union of closed points,
    # and so is its complement: ambiguity is witnessed by truncation exhaustions
    return Classification(is_closed(s), is_open(s), _exhaustion_witness(s), is_locally_closed(s))


def truncate(s: SubsetTree, n: int) -> SubsetTree:
    """Points of ``s`` whose copy numbers are all below ``n``: a finite, closed set."""
    return SubsetTree(
        s.member,
        tuple(truncate(p, n) for p in s.prefix),
        tuple(empty(m.shape) for m in s.period),
        {(c, m): truncate(s.copy(c, m), n) for c in range(n) for m in range(len(s.period))},
    )


def _exhaustion_witness(s: SubsetTree) -> bool:
    # truncations are closed, increasing, and exhaust s (and likewise the complement)
    for part in (s, complement(s)):
        prev = None
        for n in range(1, 4):
            cur = truncate(part, n)
            if not is_closed(cur) or (prev is not None and not difference(prev, cur).is_empty):
                return False
            if not difference(cur, part).is_empty:
                return False
            prev = cur
    return True


def isolated_points(space: Space) -> SubsetTree:
    return SubsetTree(
        not space.period,
        tuple(isolated_points(p) for p in space.prefix),
        tuple(isolated_points(m) for m in space.period),
    )


def rank_layer(space: Space, r: int) -> SubsetTree:
    return SubsetTree(
        space.point_rank == r,
        tuple(rank_layer(p, r) for p in space.prefix),
        tuple(rank_layer(m, r) for m in space.period),
    )


def rank_at_least(space: Space, r: int) -> SubsetTree:
    return SubsetTree(
        space.point_rank >= r,
        tuple(rank_at_least(p, r) for p in space.prefix),
        tuple(rank_at_least(m, r) for m in space.period),
    )


# ---------------------------------------------------------------------------
# Restriction to closed subspaces


@dataclass(frozen=True)
class TailEntry:
    member: int
    offset: int
    inner: "Embedding"


@dataclass(frozen=True)
class Embedding:
    """Map from addresses of a restricted space to addresses of the original.

    ``root`` and every ``prefix`` entry are relative to the same reference
    point; each tail entry maps new copy ``c`` to old copy ``c + offset`` of
    old member ``member`` at the old point of ``root``.
    """

    root: Address
    prefix: tuple["Embedding", ...] = ()
    period: tuple[TailEntry, ...] = ()

    def lift(self, sel: Selector) -> Embedding:
        return Embedding((sel,) + self.root, tuple(e.lift(sel) for e in self.prefix), self.period)

    def translate(self, addr: Address) -> Address:
        if not addr:
            return self.root
        sel, rest = addr[0], addr[1:]
        if isinstance(sel, Prefix):
            return self.prefix[sel.index].translate(rest)
        te = self.period[sel.member]
        return self.root + (Tail(sel.copy + te.offset, te.member),) + te.inner.translate(rest)

    def locate(self, old: Address) -> Address | None:
        """Inverse of :meth:`translate`; None when the old point is not in the image."""
        if old == self.root:
            return ROOT
        for i, e in enumerate(self.prefix):
            hit = e.locate(old)
            if hit is not None:
                return (Prefix(i),) + hit
        n = len(self.root)
        if old[:n] == self.root and len(old) > n and isinstance(old[n], Tail):
            sel = old[n]
            for j, te in enumerate(self.period):
                if te.member == sel.member and sel.copy >= te.offset:
                    hit = te.inner.locate(old[n + 1:])
                    if hit is not None:
                        return (Tail(sel.copy - te.offset, j),) + hit
        return None


def _pieces(space: Space, s: SubsetTree) -> list[tuple[Space, Embedding]]:
    out: list[tuple[Space, Embedding]] = []
    for i, (sp, ss) in enumerate(zip(space.prefix, s.prefix)):
        out.extend((p, e.lift(Prefix(i))) for p, e in _pieces(sp, ss))
    offset = 1 + max((c for c, _ in s.override_keys), default=-1)
    for c in range(offset):
        for m, sp in enumerate(space.period):
            out.extend((p, e.lift(Tail(c, m))) for p, e in _pieces(sp, s.copy(c, m)))
    tails = []
    for m, sp in enumerate(space.period):
        tails.extend((p, TailEntry(m, offset, e)) for p, e in _pieces(sp, s.period[m]))
    if s.member:
        new = Space(tuple(p for p, _ in out), tuple(p for p, _ in tails))
        return [(new, Embedding(ROOT, tuple(e for _, e in out), tuple(t for _, t in tails)))]
    if tails:
        raise ValueError("set is not closed")
    return out


def restrict(space: Space, closed_set: SubsetTree) -> tuple[Space, Embedding]:
    """Subspace on a nonempty closed set, with the embedding back into ``space``."""
    if closed_set.shape != space:
        raise ShapeError("subset does not match space")
    if closed_set.is_empty:
        raise ValueError("cannot restrict to the empty set")
    if not is_closed(closed_set):
        raise ValueError("set is not closed")
    pieces = _pieces(space, closed_set)
    (first, emb), rest = pieces[0], pieces[1:]
    new = Space(first.prefix + tuple(p for p, _ in rest), first.period)
    return new, Embedding(emb.root, emb.prefix + tuple(e for _, e in rest), emb.period)


def pull(emb: Embedding, tree):
    """Restrict an annotation (FuncTree or SubsetTree) along an embedding."""
    node = tree.at(emb.root)
    prefix = tuple(pull(e, tree) for e in emb.prefix)
    period = []
    overrides = {}
    for j, te in enumerate(emb.period):
        period.append(pull(te.inner, node.period[te.member].shift(te.offset * node.drift)))
        for c, m in node.override_keys:
            if m == te.member and c >= te.offset:
                overrides[(c - te.offset, j)] = pull(te.inner, node.copy(c, m))
    drift = node.drift if emb.period else 0
    return type(tree).build(node.head, prefix, period, drift, overrides)


def push(emb: Embedding, new_set: SubsetTree, space: Space) -> SubsetTree:
    """Image in ``space`` of a subset of the restricted space."""
    out = empty(space)
    if new_set.member:
        out = union(out, singleton(space, emb.root))
    for e, ns in zip(emb.prefix, new_set.prefix):
        out = union(out, push(e, ns, space))
    lead = space.at(emb.root)
    for j, te in enumerate(emb.period):
        mspace = lead.period[te.member]
        ovr = {(c, te.member): empty(mspace) for c in range(te.offset)}
        for (c, jj), sub in new_set.overrides:
            if jj == j:
                ovr[(c + te.offset, te.member)] = push(te.inner, sub, mspace)
        base = empty(lead)
        period = list(base.period)
        period[te.member] = push(te.inner, new_set.period[j], mspace)
        out = union(out, place(space, emb.root, SubsetTree(False, base.prefix, period, ovr)))
    return out


# ---------------------------------------------------------------------------
# Closed-subset family


def closed_subsets(space: Space, max_size: int = 12, with_overrides: bool = True) -> list[SubsetTree]:
    """All nonempty closed subsets of description size <= max_size.

    Overrides are only generated on copy 0, which keeps the family finite.
    """
    out = [s for s in _closed_options(space, max_size, with_overrides) if not s.is_empty]
    out.sort(key=lambda s: (s.size, repr(s)))
    return out


def _closed_options(space: Space, budget: int, with_overrides: bool) -> list[SubsetTree]:
    if budget < 1:
        return []
    if not space.prefix and not space.period:
        return [SubsetTree(False), SubsetTree(True)]
    results: dict[SubsetTree, None] = {empty(space): None, full(space): None}
    child_spaces = space.prefix + space.period
    options = [_closed_options(c, budget - 1, with_overrides) for c in child_spaces]
    np = len(space.prefix)
    for combo in _bounded_product(options, budget - 1):
        prefix, period = combo[:np], combo[np:]
        accumulates = any(not m.is_empty for m in period)
        for flag in (True, False) if not accumulates else (True,):
            s = SubsetTree(flag, prefix, period)
            if s.size <= budget:
                results.setdefault(s, None)
            if with_overrides:
                for m, opts in enumerate(options[np:]):
                    for alt in opts:
                        if alt == period[m]:
                            continue
                        t = SubsetTree(flag, prefix, period, {(0, m): alt})
                        if t.size <= budget:
                            results.setdefault(t, None)
    return list(results)


def _bounded_product(options: list[list[SubsetTree]], budget: int):
    for combo in itertools.product(*options):
        if sum(c.size for c in combo) <= budget:
            yield combo
