"""Finite-N moment-coefficient pre-limits against their Barnes G limits.

    python3 scripts/coefficient_limits.py --N 1000 100000 1000000
"""
from __future__ import annotations

import argparse

from cue_deviations import regimes


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--N", type=int, nargs="+", default=[10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6])
    p.add_argument("--kappas", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    args = p.parse_args()
    print(f"{'family':>6} {'kappa':>5} {'N':>8} {'route':>6} {'pre-limit':>20} {'limit':>20} {'error':>9}")
    for fam in "cdfg":
        for k in args.kappas:
            limit = regimes.moment_coefficient(fam, k)
            for N in args.N:
                chk = regimes.coefficient_limit_check(fam, k, N)
                print(f"{fam:>6} {k:5.2f} {N:8d} {chk.route:>6} {chk.value:20.15g} {limit:20.15g} "
                      f"{abs(chk.value - limit):9.2e}")


if __name__ == "__main__":
    main()
