"""Distances, moments and Laplace transforms along each shipped sequence.

    python3 scripts/convergence_study.py --out results/convergence
"""

import argparse
import csv
from pathlib import Path

import numpy as np

from logconcave.convergence import SEQUENCES, CompactSet, SublinearFn, convergence_report, make_sequence, mgf_domain
from logconcave.polynomial import Polynomial

N_VALUES = [1, 2, 5, 10, 20, 50, 100, 200, 500, 1000]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/convergence")
    args = ap.parse_args()
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    polys = [Polynomial.parse("x"), Polynomial.parse("x^2")]

    for kind in SEQUENCES:
        seq, limit = make_sequence(kind, N_VALUES)
        dom = mgf_domain(limit)
        A = SublinearFn(0.2, 0.1) if dom.lower < 0.1 and 0.3 < dom.upper else None
        lo, hi = limit.support
        S = CompactSet(((max(lo + 0.1, -1.0), min(hi - 0.1, 1.0)),))
        rep = convergence_report(seq, limit, polys, theta_grid=[-0.5, 0.5, 1.5], A=A, S=S, n_values=N_VALUES)
        with (outdir / f"{kind}.csv").open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(rep.columns)
            w.writerows(rep.rows)
        tr = rep.trend("l1")
        flags = ", ".join(f"theta={w.theta:g}: {'diverges' if w.diverged else 'bounded'}" for w in rep.divergence)
        print(f"{kind:15s} final L1 {tr['final']:.3e}  decreasing tail {tr['eventually_decreasing']}  {flags or 'no tilts outside the domain'}")
        last = np.array(rep.rows[-1][2:], dtype=float)
        print(" " * 16 + "  ".join(f"{c}={v:.2e}" for c, v in zip(rep.columns[2:], last)))


if __name__ == "__main__":
    main()
