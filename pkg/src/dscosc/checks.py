"""The acceptance suite C1-C13, runnable from tests and from the CLI."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import corpus
from .constructions import (
    SeriesSpec,
    check_stabilizing,
    check_summable,
    grouping_check,
    glue_dsc,
    glue_stabilizing,
    tail_bound_check,
    series_sequence,
    step_approximation,
    step_is_ps,
)
from .dsl import parse, print_document
from .func import INF, FuncTree, add, const, is_usc, le, negate, scale, values
from .oracle import certified_depth, dnorm_bounds, oracle_osc_alpha
from .oscillation import (
    check_strong_continuity,
    d_index,
    dbsc_norm,
    dsc_index,
    osc_classical,
    osc_sequence,
    uv_decomposition,
)
from .space import (
    complement,
    difference,
    enumerate_points,
    intersection,
    is_closed,
    ordinal_space,
    rank_layer,
)


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    detail: str


def _bounded_corpus(seed: int, count: int, max_rank: int = 3) -> list[FuncTree]:
    named = [f for f in corpus.named_functions().values() if f.drift_free]
    return named + corpus.random_corpus(seed, count, max_rank)


def _result(name: str, failures: list[str], summary: str) -> CriterionResult:
    if failures:
        return CriterionResult(name, False, f"{len(failures)} failure(s); first: {failures[0]}")
    return CriterionResult(name, True, summary)


def c1_sandwich(seed: int = 0) -> CriterionResult:
    fails = []
    fs = corpus.random_corpus(seed, 300, 3, drift_prob=0.1)
    for i, f in enumerate(fs):
        o1 = osc_sequence(f, 1)[1]
        oc = osc_classical(f)
        if not (le(o1, oc) and le(oc, scale(2, o1))):
            fails.append(f"random function {i}")
    f = corpus.sign_alternating()
    if not (osc_classical(f).value == 2 == 2 * osc_sequence(f, 1)[1].value):
        fails.append("alternating-period example does not attain osc = 2 osc_1")
    return _result("C1", fails, f"{len(fs)} random functions; osc = 2 osc_1 = 2 at the alternating limit point")


def c2_usc_monotone(seed: int = 0) -> CriterionResult:
    fails = []
    fs = list(corpus.named_functions().values()) + corpus.random_corpus(seed + 1, 120, 3, drift_prob=0.1)
    for i, f in enumerate(fs):
        seq = osc_sequence(f, d_index(f) + 1)
        for n, prof in enumerate(seq):
            if not is_usc(prof):
                fails.append(f"function {i}: osc_{n} not usc")
            if n and not le(seq[n - 1], prof):
                fails.append(f"function {i}: osc_{n - 1} > osc_{n}")
    return _result("C2", fails, f"{len(fs)} functions, all stages usc and nondecreasing")


def c3_indices(seed: int = 0) -> CriterionResult:
    cases = [
        ("continuous", const(ordinal_space(2), 5), 0),
        ("chi_root", corpus.chi_root(), 1),
        ("nested_indicator", corpus.nested_indicator(), 2),
        ("alternating_3", corpus.alternating(3), 3),
    ]
    fails = []
    for name, f, want in cases:
        got = d_index(f)
        if got != want:
            fails.append(f"{name}: d_index {got}, expected {want}")
            continue
        k = certified_depth(f)
        seq = osc_sequence(f, want + 1)
        for n in (want, want + 1):
            orc = oracle_osc_alpha(f, n, k)
            if any(seq[n].at(a).value != v for a, v in orc.items()):
                fails.append(f"{name}: oracle disagrees at stage {n}")
        if oracle_osc_alpha(f, want, k) != oracle_osc_alpha(f, want + 1, k):
            fails.append(f"{name}: oracle does not stabilize at {want}")
        if want and oracle_osc_alpha(f, want - 1, k) == oracle_osc_alpha(f, want, k):
            fails.append(f"{name}: oracle stabilizes before {want}")
    return _result("C3", fails, "d_index 0, 1, 2, 3 reproduced, oracle-confirmed")


def c4_dnorm(seed: int = 0) -> CriterionResult:
    fails = []
    chi, a3 = corpus.chi_root(), corpus.alternating(3)
    b = dnorm_bounds(chi)
    if dbsc_norm(chi) != 2 or b.lower != 2:
        fails.append(f"chi_root: norm {dbsc_norm(chi)}, lower {b.lower}")
    b3 = dnorm_bounds(a3)
    if dbsc_norm(a3) != 4 or b3.lower < 3:
        fails.append(f"alternating_3: norm {dbsc_norm(a3)}, lower {b3.lower}")
    fs = _bounded_corpus(seed + 2, 150)
    for i, f in enumerate(fs):
        try:
            uv = uv_decomposition(f)
        except RuntimeError as exc:
            fails.append(f"function {i}: {exc}")
            continue
        bounds = dnorm_bounds(f, (uv.u, uv.v))
        if not bounds.lower <= uv.d_norm == bounds.upper:
            fails.append(f"function {i}: bounds {bounds.lower}..{bounds.upper} vs norm {uv.d_norm}")
    return _result("C4", fails, f"chi_root 2 (lower 2), alternating_3 4 (lower {b3.lower}); "
                               f"u-v invariants on {len(fs)} bounded functions")


def c5_norm_growth(seed: int = 0) -> CriterionResult:
    fails = []
    got = []
    for k, want in ((1, 2), (2, 2), (3, 4)):
        f = corpus.alternating(k)
        sup = max(abs(v) for v in values(f))
        n = dbsc_norm(f)
        got.append(str(n))
        if sup != 1 or n != want:
            fails.append(f"k={k}: sup {sup}, norm {n}")
    return _result("C5", fails, "uniform norm 1, D-norms " + ", ".join(got))


def c6_dsc_chain(seed: int = 0) -> CriterionResult:
    fails = []

    def chain_ok(name, tr):
        ks = [st.K for st in tr.dsc_chain]
        for a, b in zip(ks, ks[1:]):
            if not is_closed(b) or not difference(b, a).is_empty or a == b:
                fails.append(f"{name}: chain not strictly decreasing closed")

    for i, f in enumerate(_bounded_corpus(seed + 3, 60)):
        tr = dsc_index(f)
        if tr.dsc_index != 1 or not tr.dsc_chain[1].K.is_empty or tr.verdict != "DSC":
            fails.append(f"bounded function {i}: index {tr.dsc_index}")
        chain_ok(f"bounded {i}", tr)
    for name, f, want in (("drift_leaves", corpus.drift_leaves(), 2), ("nested_drift", corpus.nested_drift(), 3)):
        tr = dsc_index(f)
        if tr.dsc_index != want or tr.verdict != "DSC":
            fails.append(f"{name}: index {tr.dsc_index}, expected {want}")
        chain_ok(name, tr)
    return _result("C6", fails, "bounded index 1; drift chains of length 2 and 3")


def c7_strong_continuity(seed: int = 0) -> CriterionResult:
    fails = []
    # named examples get the larger closed-set family; random ones a smaller one to bound runtime
    jobs = [(f, 12) for f in corpus.named_functions().values()]
    jobs += [(f, 9) for f in corpus.random_corpus(seed + 4, 20, 2, drift_prob=0.2)]
    total = 0
    for i, (f, size) in enumerate(jobs):
        rep = check_strong_continuity(f, size)
        total += rep.checked
        if not rep.ok:
            fails.append(f"function {i}: {rep.violations[0]}")
    return _result("C7", fails, f"{len(jobs)} functions, {total} closed subspaces")


def _random_partition(rng: random.Random):
    sp = corpus.random_space(rng, rng.randrange(1, 3))
    f = corpus.random_func(rng, sp)
    s = corpus.random_subset(rng, sp)
    pieces = []
    for r in range(sp.height + 1):
        layer = rank_layer(sp, r)
        for part in (intersection(layer, s), intersection(layer, complement(s))):
            if not part.is_empty:
                pieces.append(part)
    rng.shuffle(pieces)
    return sp, f, pieces


def c8_gluing(seed: int = 0) -> CriterionResult:
    rng = random.Random(seed + 5)
    fails = []
    for i in range(50):
        sp, f, pieces = _random_partition(rng)
        seq = glue_stabilizing([(p, f) for p in pieces], 7)
        rep = check_stabilizing(seq, 5)
        if not rep.ok:
            fails.append(f"partition {i}: {rep.violations[0]}")
        if seq.target != f:
            fails.append(f"partition {i}: glued target differs")
        # per-piece witnesses: the stabilizing sequence, or a geometric series summing to f
        wits = []
        for j, p in enumerate(pieces):
            if j % 2:
                psi = corpus.random_func(rng, sp, 0)
                r = Fraction(1, 2)
                # sum of r^i psi over i >= 1 is psi when r = 1/2
                wits.append(series_sequence(SeriesSpec((add(f, negate(psi)),), psi, r)))
            else:
                wits.append(seq)
        g = glue_dsc(list(zip(pieces, wits)), 7)
        srep = check_summable(g, 3)
        if not srep.ok:
            fails.append(f"partition {i}: {srep.violations[0]}")
        # exact agreement with direct partial sums once every witness has settled
        h = max(5, 2 + max(1, len(pieces)))
        for x in enumerate_points(sp, 3):
            pv = g.partial_variation(x, h)
            if g.variation(x) != pv + g.variation_from(x, h + 1):
                fails.append(f"partition {i}: certificate differs from partial sums at {x}")
                break
    seq = glue_stabilizing([(p, f) for p in pieces])
    g = glue_dsc([(p, seq) for p in pieces])
    for x in enumerate_points(sp, 4):
        if g.variation(x) != g.partial_variation(x, g.settle(x) + 3):
            fails.append("stabilizing witnesses: certificate is not a plain partial sum")
            break
    return _result("C8", fails, "50 random partitions stabilize (budget 5); certificates match partial sums")


def c9_step(seed: int = 0) -> CriterionResult:
    fails = []
    fs = _bounded_corpus(seed + 6, 25)
    for i, f in enumerate(fs):
        for n in range(2, 13):
            sa = step_approximation(f, n)
            if sa.error > Fraction(3, n):
                fails.append(f"function {i}, n={n}: error {sa.error}")
            if any(v * n != int(v * n) for v in values(sa.step)):
                fails.append(f"function {i}, n={n}: value off the grid")
            if n in (2, 7, 12) and not step_is_ps(sa, 3 if f.shape.height < 3 else 2).ok:
                fails.append(f"function {i}, n={n}: not pointwise stabilizing")
    return _result("C9", fails, f"{len(fs)} bounded functions, n = 2..12, error <= 3/n")


def _random_specs(seed: int, count: int) -> list[SeriesSpec]:
    rng = random.Random(seed)
    return [corpus.random_series(rng, corpus.random_space(rng, rng.randrange(3))) for _ in range(count)]


def geometric_chi_series() -> SeriesSpec:
    return SeriesSpec((), corpus.chi_root(), Fraction(1, 2))


def c10_tail_bound(seed: int = 0) -> CriterionResult:
    fails = []
    specs = _random_specs(seed + 7, 100)
    for i, spec in enumerate(specs):
        rep = tail_bound_check(spec, 4)
        if not rep.ok:
            fails.append(f"spec {i}: {rep.violations[:1] or 'hypothesis'}")
    geo = tail_bound_check(geometric_chi_series(), 4)
    if not (geo.ok and geo.equality_at_root):
        fails.append("geometric chi_root series: no equality at the limit point")
    return _result("C10", fails, f"{len(specs)} random specs, gamma <= 4; equality for the geometric series")


def c11_grouping(seed: int = 0) -> CriterionResult:
    fails = []
    specs = [geometric_chi_series(),
             SeriesSpec((), corpus.alternating(2), Fraction(1, 2))] + _random_specs(seed + 8, 25)
    for i, spec in enumerate(specs):
        rep = grouping_check(spec)
        if not rep.ok:
            fails.append(f"spec {i}: verdict {rep.verdict}, {rep.violations[:1]}")
    return _result("C11", fails, f"{len(specs)} specs: DSC with block bounds below 2^-i")


def c12_oracle(seed: int = 0) -> CriterionResult:
    fails = []
    fs = _bounded_corpus(seed + 9, 60)
    for i, f in enumerate(fs):
        k = certified_depth(f)
        seq = osc_sequence(f, d_index(f) + 1)
        for n, prof in enumerate(seq):
            orc = oracle_osc_alpha(f, n, k)
            if any(prof.at(a).value != v for a, v in orc.items()):
                fails.append(f"function {i}: stage {n}")
                break
    drifted = [corpus.drift_leaves(), corpus.nested_drift()] + corpus.random_corpus(seed + 10, 20, 2, drift_prob=0.4)
    span = 4
    for i, f in enumerate(drifted):
        k = certified_depth(f)
        for n in (1, 2):
            prof = osc_sequence(f, n)[n]
            runs = [oracle_osc_alpha(f, n, d) for d in range(k, k + span + 1)]
            for addr in runs[0]:
                eng = prof.at(addr).value
                seen = [r[addr] for r in runs]
                # truncations need not grow monotonically; the deepest must beat all shallower ones
                if eng == INF and not seen[-1] > max(seen[:-1]):
                    fails.append(f"drifted {i}: no divergence at {addr}: {seen}")
                if eng != INF and any(v != eng for v in seen):
                    fails.append(f"drifted {i}: finite value differs at {addr}")
    return _result("C12", fails, f"{len(fs)} drift-free exact, {len(drifted)} drifted divergence checks")


def c13_dsl(seed: int = 0) -> CriterionResult:
    from .report import dumps, run_document
    fails = []
    files = corpus.corpus_files()
    if len(files) < 20:
        fails.append(f"only {len(files)} corpus files")
    for name, text in files.items():
        doc = parse(text)
        if parse(print_document(doc)) != doc:
            fails.append(f"{name}: round trip")
        if print_document(parse(print_document(doc))) != print_document(doc):
            fails.append(f"{name}: printing is not stable")
        light = type(doc)(doc.spaces, doc.funcs, doc.sets, doc.series,
                          [t for t in doc.tasks if t.verb != "check"])
        if dumps(run_document(light, seed=seed)) != dumps(run_document(light, seed=seed)):
            fails.append(f"{name}: report not deterministic")
    return _result("C13", fails, f"{len(files)} files round-trip; reports byte-identical")


CRITERIA: dict[str, Callable[[int], CriterionResult]] = {
    "C1": c1_sandwich,
    "C2": c2_usc_monotone,
    "C3": c3_indices,
    "C4": c4_dnorm,
    "C5": c5_norm_growth,
    "C6": c6_dsc_chain,
    "C7": c7_strong_continuity,
    "C8": c8_gluing,
    "C9": c9_step,
    "C10": c10_tail_bound,
    "C11": c11_grouping,
    "C12": c12_oracle,
    "C13": c13_dsl,
}


def run_checks(names: Optional[list[str]] = None, seed: int = 0) -> list[CriterionResult]:
    chosen = names or list(CRITERIA)
    unknown = [n for n in chosen if n not in CRITERIA]
    if unknown:
        raise KeyError(f"unknown criteria: {', '.join(unknown)}")
    return [CRITERIA[n](seed) for n in chosen]
