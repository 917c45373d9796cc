"""Probe rows of Pascal's triangle for i-fold log-concavity.

    python scripts/pascal_probe.py --max-row 20 --depth 4
"""

import argparse
import time
from dataclasses import dataclass
from fractions import Fraction

from logconcave.errors import DepthTooDeep
from logconcave.lco import probe_depth
from logconcave.seqspec import builtin_family
from logconcave.sequence_model import materialize


@dataclass
class Config:
    min_row: int = 1
    max_row: int = 16
    depth: int = 4
    digit_budget: int = 10**5


def run(cfg: Config) -> list[dict]:
    rows = []
    for n in range(cfg.min_row, cfg.max_row + 1):
        seq = materialize(builtin_family("binomial_row", {"n": Fraction(n)}), 1)
        start = time.perf_counter()
        try:
            rep = probe_depth(seq, cfg.depth, budget=cfg.digit_budget)
            verdict = "%s(%d)" % rep.verdict
        except DepthTooDeep as exc:
            verdict = f"DepthTooDeep: {exc}"
        rows.append({"n": n, "verdict": verdict, "seconds": time.perf_counter() - start})
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--min-row", type=int, default=Config.min_row)
    p.add_argument("--max-row", type=int, default=Config.max_row)
    p.add_argument("--depth", type=int, default=Config.depth)
    p.add_argument("--digit-budget", type=int, default=Config.digit_budget)
    a = p.parse_args()
    cfg = Config(a.min_row, a.max_row, a.depth, a.digit_budget)
    print(f"{'n':>4}  {'seconds':>8}  verdict")
    for row in run(cfg):
        print(f"{row['n']:>4}  {row['seconds']:8.4f}  {row['verdict']}")


if __name__ == "__main__":
    main()
