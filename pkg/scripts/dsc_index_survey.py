"""Distribution of D- and DSC-indices over seeded random functions with drift.

    python scripts/dsc_index_survey.py --count 200 --drift 0.3 --seed 1
"""
import argparse
from collections import Counter
from dataclasses import dataclass

from dscosc.corpus import random_corpus
from dscosc.oscillation import dsc_index


@dataclass(frozen=True)
class SurveyConfig:
    count: int = 200
    max_rank: int = 3
    drift: float = 0.3
    seed: int = 0


def run(cfg: SurveyConfig) -> dict:
    by_rank: dict[int, Counter] = {}
    for f in random_corpus(cfg.seed, cfg.count, cfg.max_rank, drift_prob=cfg.drift):
        tr = dsc_index(f)
        key = (tr.d_index, tr.dsc_index, tr.verdict)
        by_rank.setdefault(f.shape.height, Counter())[key] += 1
    return by_rank


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=SurveyConfig.count)
    ap.add_argument("--max-rank", type=int, default=SurveyConfig.max_rank)
    ap.add_argument("--drift", type=float, default=SurveyConfig.drift)
    ap.add_argument("--seed", type=int, default=SurveyConfig.seed)
    ns = ap.parse_args()
    cfg = SurveyConfig(ns.count, ns.max_rank, ns.drift, ns.seed)
    print("height  d_index  dsc_index  verdict  count")
    for h, counts in sorted(run(cfg).items()):
        for (d, i, v), n in sorted(counts.items()):
            print(f"{h:>6}  {d:>7}  {i:>9}  {v:>7}  {n:>5}")


if __name__ == "__main__":
    main()
