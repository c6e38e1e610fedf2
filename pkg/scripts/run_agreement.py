"""Compare the normal-form and probe classifiers on random operator corpora.

Usage: python3 scripts/run_agreement.py [--seeds 0 1 2] [--size 200] [--radius 8]

Prints one line per seed with agreement, contradiction and UNKNOWN counts and
exits 1 if any contradiction was found.
"""

from __future__ import annotations

import argparse
import sys

from tatekit.basefield import QQ
from tatekit.operators import classify_tate, classify_yekutieli, compare_routes, format_operator
from tatekit.suites import RunConfig, agreement_corpus


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    ap.add_argument("--size", type=int, default=200)
    ap.add_argument("--radius", type=int, default=8)
    args = ap.parse_args()
    contradictions = 0
    for seed in args.seeds:
        cfg = RunConfig(seed=seed, agreement=args.size, radius=args.radius)
        totals = {"agree": 0, "contradict": 0, "unknown": 0}
        for f in agreement_corpus(cfg):
            c = compare_routes(classify_tate(f, 2, QQ), classify_yekutieli(f, 2, QQ, radius=cfg.radius))
            for k in totals:
                totals[k] += c[k]
            for d in c["details"]:
                print(f"  seed {seed}: {format_operator(f)}: {d}")
        verdicts = sum(totals.values())
        share = totals["unknown"] / verdicts if verdicts else 0.0
        print(
            f"seed {seed}: {args.size} operators, {verdicts} verdicts, "
            f"agree {totals['agree']}, contradict {totals['contradict']}, unknown {totals['unknown']} ({share:.2%})"
        )
        contradictions += totals["contradict"]
    return 1 if contradictions else 0


if __name__ == "__main__":
    sys.exit(main())
