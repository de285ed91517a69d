"""D-norm versus uniform norm for the rank-parity family on omega^k + 1.

    python scripts/norm_growth.py --max-rank 6
"""
import argparse
import time
from dataclasses import dataclass

from dscosc.corpus import alternating
from dscosc.func import absolute
from dscosc.oracle import dnorm_bounds
from dscosc.oscillation import d_index, dbsc_norm, uv_decomposition


@dataclass(frozen=True)
class GrowthConfig:
    max_rank: int = 6
    oracle_up_to: int = 4  # the unfolding grows like k^rank


def run(cfg: GrowthConfig) -> list[dict]:
    rows = []
    for k in range(1, cfg.max_rank + 1):
        t = time.perf_counter()
        f = alternating(k)
        row = {"k": k, "sup": absolute(f).sup, "d_norm": dbsc_norm(f), "d_index": d_index(f)}
        if k <= cfg.oracle_up_to:
            uv = uv_decomposition(f)
            row["oracle_lower"] = dnorm_bounds(f, (uv.u, uv.v)).lower
        row["seconds"] = time.perf_counter() - t
        rows.append(row)
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-rank", type=int, default=GrowthConfig.max_rank)
    ap.add_argument("--oracle-up-to", type=int, default=GrowthConfig.oracle_up_to)
    ns = ap.parse_args()
    cfg = GrowthConfig(ns.max_rank, ns.oracle_up_to)
    print(f"{'k':>3} {'sup':>4} {'D-norm':>7} {'ratio':>6} {'d_index':>8} {'oracle':>7} {'sec':>6}")
    for r in run(cfg):
        lower = r.get("oracle_lower", "-")
        print(f"{r['k']:>3} {str(r['sup']):>4} {str(r['d_norm']):>7} {str(r['d_norm'] / r['sup']):>6} "
              f"{r['d_index']:>8} {str(lower):>7} {r['seconds']:>6.2f}")


if __name__ == "__main__":
    main()
