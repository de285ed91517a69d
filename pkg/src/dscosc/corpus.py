"""Named examples and seeded random generators."""
from __future__ import annotations

import random
from fractions import Fraction
from importlib import resources

from .constructions import SeriesSpec
from .func import FuncTree, const
from .space import LEAF, Space, SubsetTree, ordinal_space


# ---------------------------------------------------------------------------
# Named examples


def chi_root() -> FuncTree:
    """Indicator of the limit point of omega+1."""
    return FuncTree(1, (), (FuncTree(0),))


def alternating(k: int) -> FuncTree:
    """On omega^k + 1, the parity of the Cantor-Bendixson rank of each point."""
    if k == 0:
        return FuncTree(0)
    return FuncTree(k % 2, (), (alternating(k - 1),))


def nested_indicator() -> FuncTree:
    return FuncTree(0, (), (FuncTree(1, (), (FuncTree(0),)),))


def sign_alternating() -> FuncTree:
    """Limit value 0, tail values 1, -1, 1, -1, ..."""
    return FuncTree(0, (), (FuncTree(1), FuncTree(-1)))


def drift_leaves() -> FuncTree:
    """Leaf n of omega+1 has value n."""
    return FuncTree(0, (), (FuncTree(0),), 1)


def nested_drift() -> FuncTree:
    """On omega^2+1: leaves drift inside each inner sequence, inner limits drift with the copy."""
    return FuncTree(0, (), (FuncTree(0, (), (FuncTree(0),), 1),), 1)


def named_functions() -> dict[str, FuncTree]:
    return {
        "const_w2": const(ordinal_space(2), Fraction(3, 2)),
        "chi_root": chi_root(),
        "nested_indicator": nested_indicator(),
        "alternating_1": alternating(1),
        "alternating_2": alternating(2),
        "alternating_3": alternating(3),
        "sign_alternating": sign_alternating(),
        "drift_leaves": drift_leaves(),
        "nested_drift": nested_drift(),
    }


# ---------------------------------------------------------------------------
# Random generators

_VALUES = [Fraction(v, d) for v in range(-2, 3) for d in (1, 2)]
_RATIOS = [Fraction(1, 2), Fraction(-1, 2), Fraction(1, 3), Fraction(-1, 3), Fraction(2, 3)]


def random_space(rng: random.Random, rank: int, max_period: int = 2, max_prefix: int = 1) -> Space:
    """A space whose root has Cantor-Bendixson rank exactly ``rank``."""
    if rank == 0:
        if max_prefix and rng.random() < 0.15:
            return Space((LEAF,), ())
        return LEAF
    period = [random_space(rng, rank - 1, max_period, max_prefix)]
    for _ in range(rng.randrange(max_period)):
        period.append(random_space(rng, rng.randrange(rank), max_period, max_prefix))
    prefix = [random_space(rng, rng.randrange(rank), max_period, 0) for _ in range(rng.randrange(max_prefix + 1))]
    return Space(tuple(prefix), tuple(period))


def random_func(rng: random.Random, space: Space, override_prob: float = 0.1,
                drift_prob: float = 0.0, values=None) -> FuncTree:
    vals = values or _VALUES
    v = rng.choice(vals)
    prefix = tuple(random_func(rng, p, override_prob, drift_prob, vals) for p in space.prefix)
    period = tuple(random_func(rng, m, override_prob, drift_prob, vals) for m in space.period)
    drift = rng.choice([1, -1, Fraction(1, 2)]) if space.period and rng.random() < drift_prob else 0
    ovr = {}
    for m, sub in enumerate(space.period):
        if rng.random() < override_prob:
            ovr[(rng.randrange(2), m)] = random_func(rng, sub, 0, 0, vals)
    return FuncTree(v, prefix, period, drift, ovr)


def random_subset(rng: random.Random, space: Space, override_prob: float = 0.2) -> SubsetTree:
    prefix = tuple(random_subset(rng, p, override_prob) for p in space.prefix)
    period = tuple(random_subset(rng, m, override_prob) for m in space.period)
    ovr = {}
    for m, sub in enumerate(space.period):
        if rng.random() < override_prob:
            ovr[(rng.randrange(3), m)] = random_subset(rng, sub, 0)
    return SubsetTree(rng.random() < 0.5, prefix, period, ovr)


def random_series(rng: random.Random, space: Space) -> SeriesSpec:
    terms = tuple(random_func(rng, space, 0.1) for _ in range(rng.randrange(3)))
    tail = random_func(rng, space, 0.1)
    return SeriesSpec(terms, tail, rng.choice(_RATIOS), space)


def random_corpus(seed: int, count: int, max_rank: int = 3, drift_prob: float = 0.0) -> list[FuncTree]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        sp = random_space(rng, rng.randrange(max_rank + 1))
        out.append(random_func(rng, sp, drift_prob=drift_prob))
    return out


# ---------------------------------------------------------------------------
# Shipped DSL files


def corpus_files() -> dict[str, str]:
    """File name -> text of every shipped ``.dsc`` document."""
    root = resources.files("dscosc") / "corpus"
    return {p.name: p.read_text(encoding="utf-8") for p in sorted(root.iterdir(), key=lambda p: p.name)
            if p.name.endswith(".dsc")}
