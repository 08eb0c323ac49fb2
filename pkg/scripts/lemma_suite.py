"""Run every simplex/ball check over the catalog and tabulate the worst margins.

    python3 scripts/lemma_suite.py --trials 100 --out results/lemma_suite.csv
"""

import argparse
import csv
import time
from collections import defaultdict
from pathlib import Path

from logconcave.catalog import CATALOG_NAMES, catalog
from logconcave.inequalities import run_lemma_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=100, help="random simplices per density in d=1 (a quarter in d=2)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results/lemma_suite.csv")
    args = ap.parse_args()

    rows = []
    for d, trials in ((1, args.trials), (2, max(1, args.trials // 4))):
        for name in CATALOG_NAMES:
            t0 = time.perf_counter()
            reps = run_lemma_suite(catalog(name, dim=d), trials, seed=args.seed)
            by_check = defaultdict(list)
            for r in reps:
                by_check[r.name].append(r)
            for check, rs in sorted(by_check.items()):
                worst = min(rs, key=lambda r: r.adjusted_margin)
                rows.append(
                    {
                        "density": name,
                        "dim": d,
                        "check": check,
                        "n": len(rs),
                        "failures": sum(not r.passed for r in rs),
                        "worst_adjusted_margin": worst.adjusted_margin,
                        "worst_lhs": worst.lhs,
                        "worst_rhs": worst.rhs,
                    }
                )
            print(f"{name:12s} d={d}  {len(reps):5d} reports  {sum(not r.passed for r in reps)} failures  {time.perf_counter() - t0:.1f}s")

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
