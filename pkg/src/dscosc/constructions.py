"""Constructive gluing, approximation and series checks.

Sequences are indexed from 1.  All exhaustions are copy-budget truncations,
so every approximating term is built from finitely many points and is
continuous by construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Callable, Optional

from .func import (
    INF,
    FuncTree,
    Value,
    absolute,
    add,
    const,
    evaluate,
    inf_over,
    is_continuous,
    is_continuous_on,
    le,
    level_set,
    negate,
    scale,
    select,
    sup_over,
    zero,
)
from .oscillation import d_index, dsc_index, osc_alpha, osc_sequence, stable_osc
from .space import (
    Address,
    Space,
    SubsetTree,
    classify_subset,
    difference,
    empty,
    enumerate_points,
    full,
    is_closed,
    is_locally_closed,
    max_copy,
    override_union,
    rank_layer,
    singleton,
    truncate,
    union,
)


# ---------------------------------------------------------------------------
# Tietze extension


def tietze_extend(partial: FuncTree, closed: SubsetTree, anchor=0) -> FuncTree:
    """Continuous function equal to ``partial`` on ``closed``.

    A point outside the set copies the value of its parent in the output (the
    root falls back to ``anchor``), so every point off the set inherits the
    value of its nearest ancestor in the set.
    """
    if partial.shape != closed.shape:
        raise ValueError("partial function and set have different shapes")
    if not is_closed(closed):
        raise ValueError("extension domain is not closed")
    if not is_continuous_on(partial, closed):
        raise ValueError("partial function is not continuous on the set")
    return _extend(partial, closed, Fraction(anchor))


def _extend(f: FuncTree, s: SubsetTree, inherited: Fraction) -> FuncTree:
    if s.is_empty:
        return const(f.shape, inherited)
    v = f.value if s.member else inherited
    keys = override_union(f, s)
    return FuncTree(
        v,
        tuple(_extend(p, q, v) for p, q in zip(f.prefix, s.prefix)),
        # a nonempty base member of a closed set forces zero drift by continuity
        tuple(_extend(p, q, v) for p, q in zip(f.period, s.period)),
        0,
        {k: _extend(f.copy(*k), s.copy(*k), v) for k in keys},
    )


# ---------------------------------------------------------------------------
# Function sequences


@dataclass(eq=False)
class FunctionSequence:
    """Lazy n -> term(n) for n >= 1 converging pointwise to ``target``.

    ``settle(x)`` is a certified index from which the sequence is controlled at
    x: for stabilizing sequences term(n)(x) = target(x) for every later n.
    ``tail_variation(x, n0)`` is the exact value of sum_{n >= n0} |term(n+1)(x) - term(n)(x)|.
    """

    kind: str
    target: FuncTree
    make_term: Callable[[int], FuncTree]
    settle: Callable[[Address], int]
    tail_variation: Callable[[Address, int], Value]
    horizon: int = 5
    _cache: dict = field(default_factory=dict, repr=False)

    def term(self, n: int) -> FuncTree:
        if n < 1:
            raise ValueError("terms are indexed from 1")
        if n not in self._cache:
            self._cache[n] = self.make_term(n)
        return self._cache[n]

    def value(self, n: int, x: Address) -> Value:
        return evaluate(self.term(n), x)

    def variation_from(self, x: Address, n0: int) -> Value:
        return self.tail_variation(x, n0)

    def variation(self, x: Address) -> Value:
        return self.tail_variation(x, 1)

    def partial_variation(self, x: Address, upto: int) -> Value:
        """sum_{n=1}^{upto} |term(n+1)(x) - term(n)(x)| by direct evaluation."""
        return sum((abs(self.value(n + 1, x) - self.value(n, x)) for n in range(1, upto + 1)),
                   Fraction(0))


def _direct_variation(seq_value, x, start, stop) -> Value:
    return sum((abs(seq_value(n + 1, x) - seq_value(n, x)) for n in range(start, stop)), Fraction(0))


def constant_sequence(f: FuncTree) -> FunctionSequence:
    return FunctionSequence("stabilizing", f, lambda n: f, lambda x: 1, lambda x, n0: Fraction(0))


@dataclass(frozen=True)
class SequenceReport:
    points: int
    last_index: int
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def check_stabilizing(seq: FunctionSequence, budget: int = 5) -> SequenceReport:
    """Each term continuous; term(n)(x) = target(x) from settle(x) up to past the horizon."""
    problems = []
    pts = enumerate_points(seq.target.shape, budget)
    last = max([seq.horizon] + [seq.settle(x) + 1 for x in pts])
    for n in range(1, last + 1):
        if not is_continuous(seq.term(n)):
            problems.append(f"term {n} is not continuous")
    for x in pts:
        want = evaluate(seq.target, x)
        for n in range(seq.settle(x), last + 1):
            if seq.value(n, x) != want:
                problems.append(f"term {n} differs from the target at {x}")
                break
    return SequenceReport(len(pts), last, tuple(problems))


# ---------------------------------------------------------------------------
# Gluing along ambiguous partitions


def disjointify(sets: list[SubsetTree]) -> list[SubsetTree]:
    out, seen = [], None
    for s in sets:
        out.append(s if seen is None else difference(s, seen))
        seen = s if seen is None else union(seen, s)
    return out


def _validate_cover(sets: list[SubsetTree], space: Space) -> list[SubsetTree]:
    if not sets:
        raise ValueError("no pieces given")
    for s in sets:
        if s.shape != space:
            raise ValueError("piece does not match the space")
        if not classify_subset(s).is_ambiguous:
            raise ValueError("piece is not ambiguous")
    parts = disjointify(sets)
    cover = empty(space)
    for p in parts:
        cover = union(cover, p)
    if not cover.is_full:
        raise ValueError("pieces do not cover the space")
    return parts


def _glue_target(parts: list[SubsetTree], funcs: list[FuncTree]) -> FuncTree:
    out = funcs[-1]
    for p, f in zip(reversed(parts[:-1]), reversed(funcs[:-1])):
        out = select(p, f, out)
    return out


def _first_copy_free(x: Address) -> int:
    return max(1, max_copy(x) + 1)


def _piece_of(parts: list[SubsetTree], x: Address) -> int:
    for j, p in enumerate(parts):
        if p.contains(x):
            return j
    raise ValueError(f"{x} is not covered")


@dataclass(frozen=True)
class Exhaustion:
    """G_n^j: finite closed sets increasing in n with union the j-th piece."""

    parts: tuple[SubsetTree, ...]
    _memo: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def piece(self, n: int, j: int) -> SubsetTree:
        key = (n, j)
        if key not in self._memo:
            self._memo[key] = truncate(self.parts[j], n)
        return self._memo[key]

    def union(self, n: int) -> SubsetTree:
        # truncation is intersection with a fixed finite set, so it commutes with unions
        key = (n, None)
        if key not in self._memo:
            cover = self.parts[0]
            for p in self.parts[1:]:
                cover = union(cover, p)
            self._memo[key] = truncate(cover, n)
        return self._memo[key]


def glue_stabilizing(pieces: list[tuple[SubsetTree, FuncTree]], horizon: Optional[int] = None) -> FunctionSequence:
    """Pointwise stabilizing continuous approximants of the glued function.

    The n-th term matches the target on every G_n^j and is extended
    continuously elsewhere; a point with copy numbers below n lies in some G_n^j.
    """
    space = pieces[0][0].shape
    sets = [s for s, _ in pieces]
    funcs = [f for _, f in pieces]
    for f in funcs:
        if f.shape != space:
            raise ValueError("piece function does not match the space")
    parts = _validate_cover(sets, space)
    for s, f in zip(sets, funcs):
        if not is_continuous_on(f, s):
            raise ValueError("restriction to a piece is not continuous")
    target = _glue_target(parts, funcs)
    ex = Exhaustion(tuple(parts))

    def term(n: int) -> FuncTree:
        return tietze_extend(target, ex.union(n))

    seq = FunctionSequence(
        "stabilizing", target, term, _first_copy_free, lambda x, n0: Fraction(0),
        horizon if horizon is not None else max(5, 2 * len(pieces)),
    )
    seq.tail_variation = lambda x, n0: _direct_variation(seq.value, x, n0, max(n0, seq.settle(x)))
    seq.exhaustion = ex
    return seq


def glue_dsc(pieces: list[tuple[SubsetTree, FunctionSequence]], horizon: Optional[int] = None) -> FunctionSequence:
    """Absolutely summable continuous approximants glued from per-piece witnesses."""
    space = pieces[0][0].shape
    sets = [s for s, _ in pieces]
    wits = [w for _, w in pieces]
    for w in wits:
        if w.tail_variation is None:
            raise ValueError("witness carries no summability certificate")
    parts = _validate_cover(sets, space)
    target = _glue_target(parts, [w.target for w in wits])
    ex = Exhaustion(tuple(parts))

    def term(n: int) -> FuncTree:
        partial = zero(space)
        for j in reversed(range(len(parts))):
            partial = select(ex.piece(n, j), wits[j].term(n), partial)
        return tietze_extend(partial, ex.union(n))

    seq = FunctionSequence(
        "absolutely_summable", target, term, _first_copy_free, lambda x, n0: Fraction(0),
        horizon if horizon is not None else max(5, 2 * len(pieces)),
    )

    def tail(x: Address, n0: int) -> Value:
        s = _first_copy_free(x)
        w = wits[_piece_of(parts, x)]
        if n0 >= s:
            return w.variation_from(x, n0)
        return _direct_variation(seq.value, x, n0, s) + w.variation_from(x, s)

    seq.tail_variation = tail
    seq.exhaustion = ex
    return seq


@dataclass(frozen=True)
class SummabilityReport:
    points: int
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def check_summable(seq: FunctionSequence, budget: int = 5, upto: Optional[int] = None) -> SummabilityReport:
    """Certificates agree with direct partial sums plus the certified tail."""
    problems = []
    pts = enumerate_points(seq.target.shape, budget)
    for x in pts:
        h = upto if upto is not None else max(seq.horizon, seq.settle(x) + 1)
        cert = seq.variation(x)
        if cert == INF:
            problems.append(f"infinite variation at {x}")
            continue
        direct = seq.partial_variation(x, h - 1)
        if direct + seq.variation_from(x, h) != cert:
            problems.append(f"certificate mismatch at {x}")
        if direct > cert:
            problems.append(f"partial sum exceeds certificate at {x}")
    return SummabilityReport(len(pts), tuple(problems))


def stabilizing_as_summable(seq: FunctionSequence) -> FunctionSequence:
    """A stabilizing sequence viewed as an absolutely summable one."""
    out = FunctionSequence("absolutely_summable", seq.target, seq.term, seq.settle,
                           seq.tail_variation, seq.horizon, seq._cache)
    return out


# ---------------------------------------------------------------------------
# Step approximation


@dataclass(frozen=True)
class StepPiece:
    set: SubsetTree
    m: int
    j: int

    def level(self, n: int) -> Fraction:
        return Fraction(self.m + self.j, n)


@dataclass(frozen=True)
class StepApproximation:
    n: int
    step: FuncTree
    pieces: tuple[StepPiece, ...]
    error: Fraction


def step_approximation(f: FuncTree, n: int) -> StepApproximation:
    """Step function with values in (1/n)Z within 1/(2n) of f.

    For s = m + j the ambiguous set A_j^m = f^{-1}[(s-1)/n, (s+1/2)/n) sits
    between the closed and open strips around s/n; taking the sets in
    increasing s and disjointifying rounds f to the nearest grid point.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not f.drift_free:
        raise ValueError("step approximation needs a bounded function")
    lo, hi = floor(f.inf * n) - 1, floor(f.sup * n) + 2
    raw = []
    for s in range(lo, hi + 1):
        j = (s - 1) % n + 1
        a, b = Fraction(s - 1, n), Fraction(2 * s + 1, 2 * n)
        raw.append((s - j, j, level_set(f, lambda v, a=a, b=b: a <= v < b)))
    parts = disjointify([r[2] for r in raw])
    pieces = [StepPiece(p, m, j) for (m, j, _), p in zip(raw, parts) if not p.is_empty]
    step = zero(f.shape)
    for pc in pieces:
        step = select(pc.set, const(f.shape, pc.level(n)), step)
    for pc in pieces:
        s = pc.m + pc.j
        lo_v, hi_v = inf_over(f, pc.set), sup_over(f, pc.set)
        if not (Fraction(s - 2, n) < lo_v and hi_v < Fraction(s + 1, n)):
            raise RuntimeError("piece escapes its strip")
    err = absolute(add(f, negate(step))).sup
    return StepApproximation(n, step, tuple(pieces), err)


def step_is_ps(approx: StepApproximation, budget: int = 5) -> SequenceReport:
    pieces = [(pc.set, const(approx.step.shape, pc.level(approx.n))) for pc in approx.pieces]
    return check_stabilizing(glue_stabilizing(pieces, budget + 2), budget)


# ---------------------------------------------------------------------------
# Series with geometric tails


@dataclass(frozen=True)
class SeriesSpec:
    """phi_1..phi_J explicitly, then phi_{J+i} = ratio**i * tail for i >= 1."""

    terms: tuple[FuncTree, ...]
    tail: Optional[FuncTree] = None
    ratio: Fraction = Fraction(0)
    space: Optional[Space] = None

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "ratio", Fraction(self.ratio))
        shapes = {t.shape for t in self.terms} | ({self.tail.shape} if self.tail is not None else set())
        if self.space is not None:
            shapes.add(self.space)
        if len(shapes) != 1:
            raise ValueError("series terms must share one space")
        object.__setattr__(self, "space", shapes.pop())
        if self.tail is not None and not abs(self.ratio) < 1:
            raise ValueError("tail ratio must have absolute value below 1")

    @property
    def J(self) -> int:
        return len(self.terms)

    @property
    def has_tail(self) -> bool:
        return self.tail is not None and self.ratio != 0

    def phi(self, j: int) -> FuncTree:
        if j < 1:
            raise ValueError("series terms are indexed from 1")
        if j <= self.J:
            return self.terms[j - 1]
        if not self.has_tail:
            return zero(self.space)
        return scale(self.ratio ** (j - self.J), self.tail)

    def _geo(self, i0: int, absolute_ratio: bool = False) -> Fraction:
        """sum_{i >= i0} r**i for i0 >= 1."""
        r = abs(self.ratio) if absolute_ratio else self.ratio
        return r ** i0 / (1 - r)

    def partial(self, n: int) -> FuncTree:
        out = zero(self.space)
        for t in self.terms[:n]:
            out = add(out, t)
        if n > self.J and self.has_tail:
            k = n - self.J
            out = add(out, scale(self._geo(1) - self._geo(k + 1), self.tail))
        return out

    def remainder(self, n: int) -> FuncTree:
        """sum_{j > n} phi_j exactly."""
        out = zero(self.space)
        for t in self.terms[n:]:
            out = add(out, t)
        if self.has_tail:
            out = add(out, scale(self._geo(max(1, n - self.J + 1)), self.tail))
        return out

    @property
    def target(self) -> FuncTree:
        return self.remainder(0)

    def abs_tail_weight(self, n: int) -> Fraction:
        """sum_{j > max(n, J)} |r|**(j - J)."""
        if not self.has_tail:
            return Fraction(0)
        return self._geo(max(1, n - self.J + 1), absolute_ratio=True)

    def osc_tail_sum(self, gamma: int, n: int) -> FuncTree:
        """sum_{j > n} osc_gamma phi_j, using osc_gamma(c g) = |c| osc_gamma g."""
        out = zero(self.space)
        for t in self.terms[n:]:
            out = add(out, osc_alpha(t, gamma))
        if self.has_tail:
            out = add(out, scale(self.abs_tail_weight(n), osc_alpha(self.tail, gamma)))
        return out


def series_sequence(spec: SeriesSpec) -> FunctionSequence:
    """Partial sums of a series, with exact tail variation sum_{j > n0} |phi_j(x)|."""

    def tail(x: Address, n0: int) -> Value:
        tot = sum((abs(evaluate(spec.phi(j), x)) for j in range(n0 + 1, spec.J + 1)), Fraction(0))
        if spec.has_tail:
            tot += abs(evaluate(spec.tail, x)) * spec.abs_tail_weight(n0)
        return tot

    return FunctionSequence("absolutely_summable", spec.target, spec.partial,
                            lambda x: spec.J + 1, tail, max(5, 2 * spec.J))


@dataclass(frozen=True)
class TailBoundReport:
    hypothesis_ok: bool
    checks: int
    violations: tuple[str, ...]
    max_slack: Optional[Fraction]
    equality_at_root: bool

    @property
    def ok(self) -> bool:
        return self.hypothesis_ok and not self.violations


def tail_bound_check(spec: SeriesSpec, gamma_max: int = 4, extra: int = 3) -> TailBoundReport:
    """osc_g(phi - f_n) <= sum_{j>n} osc_g phi_j pointwise for g <= gamma_max, n <= J + extra."""
    pieces = spec.terms + ((spec.tail,) if spec.has_tail else ())
    seqs = [osc_sequence(t, gamma_max) for t in pieces]
    hyp = all(prof.sup < INF for s in seqs for prof in s)
    problems: list[str] = []
    slack = None
    equal_root = True
    checks = 0
    if hyp:
        zero_prof = zero(spec.space)
        for n in range(spec.J + extra + 1):
            lhs_seq = osc_sequence(spec.remainder(n), gamma_max)
            for g in range(gamma_max + 1):
                rhs = zero_prof
                for s in seqs[n:spec.J]:
                    rhs = add(rhs, s[g])
                if spec.has_tail:
                    rhs = add(rhs, scale(spec.abs_tail_weight(n), seqs[-1][g]))
                lhs = lhs_seq[g]
                checks += 1
                if not le(lhs, rhs):
                    problems.append(f"inequality fails at gamma={g}, n={n}")
                    continue
                gap = add(rhs, negate(lhs)).sup
                slack = gap if slack is None else max(slack, gap)
                if lhs.value != rhs.value:
                    equal_root = False
                if spec.has_tail and n >= spec.J:
                    # the remainder is a multiple of the tail, so its norm decays geometrically
                    if lhs.sup > spec.abs_tail_weight(n) * seqs[-1][g].sup:
                        problems.append(f"norm bound not geometric at gamma={g}, n={n}")
    return TailBoundReport(hyp, checks, tuple(problems), slack, equal_root)


@dataclass(frozen=True)
class Block:
    start: int  # n_i
    stop: int  # n_{i+1}
    bound: Fraction  # sup of sum_{n_i < j <= n_{i+1}} osc_alpha phi_j


@dataclass(frozen=True)
class GroupingReport:
    hypothesis_ok: bool
    alpha_max: int
    blocks: tuple[tuple[Block, ...], ...]  # per alpha
    verdict: str
    dsc_index: int
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.hypothesis_ok and self.verdict == "DSC" and not self.violations


def _block_profile(spec: SeriesSpec, alpha: int, a: int, b: int) -> FuncTree:
    return add(spec.osc_tail_sum(alpha, a), negate(spec.osc_tail_sum(alpha, b)))


def grouping_check(spec: SeriesSpec, blocks: int = 6) -> GroupingReport:
    """Group the series into blocks with osc mass below 2^-i and confirm the sum is DSC."""
    fs = spec.terms + ((spec.tail,) if spec.has_tail else ())
    alpha_max = max([d_index(t) for t in fs] + [0]) + 1
    hyp = all(p.sup < INF for t in fs for p in osc_sequence(t, alpha_max))
    problems: list[str] = []
    all_blocks = []
    if hyp:
        for alpha in range(alpha_max + 1):
            # n_i: first index past the previous one whose whole tail mass is below 2^-i
            cuts = [spec.J]
            for i in range(1, blocks + 2):
                n = max(spec.J, cuts[-1] + 1) if i > 1 else spec.J
                while not spec.osc_tail_sum(alpha, n).sup < Fraction(1, 2 ** i):
                    n += 1
                cuts.append(n)
            cuts = cuts[1:]
            mine = []
            for i in range(1, blocks + 1):
                start, stop = cuts[i - 1], cuts[i]
                prof = _block_profile(spec, alpha, start, stop)
                bound = prof.sup
                if not bound < Fraction(1, 2 ** i):
                    problems.append(f"block {i} too heavy at alpha={alpha}")
                psi_i = add(spec.remainder(start), negate(spec.remainder(stop)))
                if not le(osc_alpha(psi_i, alpha), prof):
                    problems.append(f"block {i} oscillation not dominated at alpha={alpha}")
                mine.append(Block(start, stop, bound))
            if not sum((b.bound for b in mine), Fraction(0)) < 1:
                problems.append(f"block masses not summable at alpha={alpha}")
            all_blocks.append(tuple(mine))
    trace = dsc_index(spec.target)
    if trace.verdict == "DSC" and hyp and stable_osc(spec.target).sup == INF:
        problems.append("stable oscillation of the sum is unbounded")
    return GroupingReport(hyp, alpha_max, tuple(all_blocks), trace.verdict, trace.dsc_index, tuple(problems))


# ---------------------------------------------------------------------------
# Pointwise stabilizing <=> locally closed pieces with continuous restrictions


@dataclass(frozen=True)
class RoundTrip:
    forward_ok: bool  # rank-layer pieces glue to a verified PS witness
    backward_ok: bool  # a PS witness yields locally closed pieces with continuous restrictions
    pieces: int


def ps_roundtrip(f: FuncTree, budget: int = 4, levels: int = 6) -> RoundTrip:
    space = f.shape
    layers = [rank_layer(space, r) for r in range(space.height + 1)]
    layers = [s for s in layers if not s.is_empty]
    forward = all(is_locally_closed(s) and is_continuous_on(f, s) for s in layers)
    seq = glue_stabilizing([(s, f) for s in layers])
    forward = forward and check_stabilizing(seq, budget).ok
    # K_n = points where the witness has settled by n; V^n = K_n \ K_{n-1}
    backward = True
    prev = empty(space)
    for n in range(1, levels + 1):
        K = truncate(full(space), n)
        ok_settle = all(seq.settle(x) <= n for x in K.members(n))
        V = difference(K, prev)
        backward = backward and ok_settle and is_closed(K) and is_locally_closed(V) \
            and is_continuous_on(f, V)
        prev = K
    return RoundTrip(forward, backward, len(layers))


def ps_from_values(space: Space, assignments: dict, rest: FuncTree) -> FunctionSequence:
    """Pointwise stabilizing witness for a function prescribed on finitely many points.

    Each prescribed point is its own closed piece; ``rest`` must be continuous
    on the remaining set.
    """
    pieces = []
    covered = empty(space)
    for addr, v in assignments.items():
        s = singleton(space, addr)
        pieces.append((s, const(space, v)))
        covered = union(covered, s)
    pieces.append((difference(full(space), covered), rest))
    return glue_stabilizing(pieces)


__all__ = [
    "Block", "GroupingReport", "Exhaustion", "FunctionSequence", "TailBoundReport", "RoundTrip",
    "SeriesSpec", "StepApproximation", "StepPiece", "check_stabilizing", "check_summable",
    "constant_sequence", "grouping_check", "disjointify", "glue_dsc", "glue_stabilizing",
    "tail_bound_check", "ps_from_values", "series_sequence", "stabilizing_as_summable",
    "step_approximation", "step_is_ps", "ps_roundtrip", "tietze_extend",
]
