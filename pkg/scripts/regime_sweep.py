"""Ratio of the Edgeworth density to each theorem's Gaussian factor on the
dyadic log N grid, for every theorem, alpha and kappa of interest.

    python3 scripts/regime_sweep.py > sweep.csv
"""
from __future__ import annotations

import argparse
import csv
import sys

from cue_deviations import regimes


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--alphas", type=float, nargs="+", default=[0.0, 0.5, 1.0, 2.0])
    p.add_argument("--kappas", type=float, nargs="+", default=[0.5, 1.0])
    p.add_argument("--log2-max", type=int, default=40)
    args = p.parse_args()
    grid = [2.0 ** k for k in range(10, args.log2_max + 1)]
    w = csv.writer(sys.stdout)
    w.writerow(["theorem", "alpha", "kappa", "log_n", "x", "ratio", "selected_coefficient", "distance"])
    summary = []
    for th in regimes.Theorem:
        for a in args.alphas:
            for k in args.kappas:
                trend = regimes.ratio_trend(th, k, a, grid)
                dist = [abs(r.ratio - r.coefficient) for r in trend]
                for r, d in zip(trend, dist):
                    w.writerow([th.value, a, k] + [format(v, ".17g") for v in (r.log_n, r.x, r.ratio, r.coefficient, d)])
                summary.append((th.value, a, k, regimes.is_monotone_trend(dist), dist[0], dist[-1]))
    for th, a, k, ok, d0, d1 in summary:
        print(f"{th} alpha={a} kappa={k}: {'converges' if ok else 'does not converge'} "
              f"({d0:.3e} -> {d1:.3e})", file=sys.stderr)


if __name__ == "__main__":
    main()
