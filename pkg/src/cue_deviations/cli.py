"""Command-line interface: ``cue-deviations <command> ...``.

Exit codes: 0 success, 2 domain or usage error, 3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import edgeworth, regimes, sampler, verify
from .cumulants import Mode, Observable, cumulants
from .mgf import INVERSION_N_LIMIT, invert_density
from .specfun import DomainError

EXIT_OK, EXIT_DOMAIN, EXIT_VERIFY = 0, 2, 3


@dataclass(frozen=True)
class RunConfig:
    command: str
    output: str | None
    fmt: str


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return v


def _emit(rows: list[dict], cfg: RunConfig, meta: dict | None = None) -> None:
    if cfg.fmt == "json":
        text = json.dumps({"schema_version": 1, "command": cfg.command, "meta": meta or {}, "rows": rows},
                          indent=1, allow_nan=False, default=float) + "\n"
    else:
        buf = io.StringIO()
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: _fmt(v) for k, v in r.items()})
        text = buf.getvalue()
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _grid(args) -> np.ndarray:
    if args.points < 2 or not args.x_max > args.x_min:
        raise DomainError("need x-max > x-min and at least 2 points")
    return np.linspace(args.x_min, args.x_max, args.points)


def _n_or_log(args) -> tuple[int | None, float | None]:
    if (args.N is None) == (args.logN is None):
        raise DomainError("give exactly one of --N and --logN")
    return args.N, args.logN


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_cumulants(args, cfg: RunConfig) -> int:
    N, log_n = _n_or_log(args)
    mode = Mode(args.mode)
    if log_n is not None and mode is Mode.EXACT:
        raise DomainError("--logN needs --mode asymptotic")
    rows = []
    for obs in args.observable:
        seq = cumulants(obs, N, args.m_max, mode, log_n=log_n)
        for m in range(1, seq.m_max + 1):
            rows.append({"observable": seq.observable.value, "mode": mode.value, "N": N if N is not None else "",
                         "log_n": seq.log_n, "m": m, "value": seq[m]})
    _emit(rows, cfg)
    return EXIT_OK


def cmd_density(args, cfg: RunConfig) -> int:
    obs = Observable(args.observable)
    if args.N is None:
        raise DomainError("density needs --N")
    meta = {"observable": obs.value, "N": args.N, "method": args.method}
    if args.method == "edgeworth":
        x = _grid(args)
        curve = edgeworth.density_curve(obs, args.N, x, args.M)
        meta["M"] = args.M
    elif args.method == "inversion":
        if args.N > INVERSION_N_LIMIT:
            raise DomainError(f"inversion is limited to N <= {INVERSION_N_LIMIT}")
        curve = invert_density(obs, args.N, _grid(args))
    else:
        summary = sampler.monte_carlo(obs, args.N, args.theta, args.draws, args.seed, args.workers, args.bins)
        from .mgf import DensityCurve, Method
        centers = 0.5 * (summary.hist_edges[1:] + summary.hist_edges[:-1])
        curve = DensityCurve(obs, args.N, Method.MONTE_CARLO, centers, summary.histogram_density())
        meta.update(draws=args.draws, seed=args.seed, ks=summary.ks, redraws=summary.redraws)
        if args.histogram_out:
            hist = [{"bin_left": float(a), "bin_right": float(b), "count": int(c), "normalized_density": float(d)}
                    for a, b, c, d in zip(summary.hist_edges[:-1], summary.hist_edges[1:],
                                          summary.hist_counts, summary.histogram_density())]
            _emit(hist, RunConfig("histogram", args.histogram_out, "csv"))
    meta["low_accuracy"] = curve.low_accuracy
    rows = [{"observable": obs.value, "method": curve.method.value, "N": args.N, "x": float(x), "density": float(d)}
            for x, d in zip(curve.x, curve.density)]
    _emit(rows, cfg, meta)
    return EXIT_OK


def cmd_regime(args, cfg: RunConfig) -> int:
    theorem = regimes.Theorem(args.theorem)
    exps = range(args.log2_min, args.log2_max + 1)
    rows = []
    for e in exps:
        log_n = 2.0 ** e
        if args.epsilon is not None:
            if not args.epsilon < 1.0:
                raise DomainError("epsilon must be < 1")
            n = math.log(log_n)
            alpha: float | regimes.Smoothing = -math.log1p(-args.epsilon) / math.log(n) if args.epsilon else 0.0
            if alpha < 0:
                raise DomainError("epsilon < 0 corresponds to a negative alpha")
        elif args.smoothing:
            alpha = regimes.Smoothing(args.smoothing)
        else:
            alpha = args.alpha
        spec = regimes.RegimeSpec(args.kappa, alpha, log_n)
        diag = regimes.ratio_diagnostic(theorem, spec, args.M)
        log_edge = regimes.log_gaussian_factor(spec) + diag.exponent_gap
        rows.append({
            "log_n": log_n, "x": diag.x,
            "edgeworth_density": math.exp(log_edge) * diag.correction,
            "theorem_rhs": regimes.theorem_density(theorem, spec),
            "ratio": diag.ratio, "selected_coefficient": diag.coefficient, "branch": diag.branch,
        })
    _emit(rows, cfg, {"theorem": theorem.value, "kappa": args.kappa})
    return EXIT_OK


def cmd_smoothing(args, cfg: RunConfig) -> int:
    grid = args.logN or [10.0 ** k for k in range(1, 9)]
    rows = [{"log_n": L, "value": v, "target": math.exp(-1.0)}
            for L, v in regimes.smoothing_trace(args.sign, grid)]
    _emit(rows, cfg, {"sign": args.sign})
    return EXIT_OK


def cmd_coefficient(args, cfg: RunConfig) -> int:
    rows = []
    for k in args.kappa:
        row = {"family": args.family, "kappa": k, "limit": regimes.moment_coefficient(args.family, k)}
        if args.N is not None:
            chk = regimes.coefficient_limit_check(args.family, k, args.N)
            row.update(N=args.N, pre_limit=chk.value, route=chk.route, diverged=chk.diverged)
        rows.append(row)
    _emit(rows, cfg)
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    report = verify.run(args.only)
    payload = json.dumps(report.to_dict(), indent=1, allow_nan=False) + "\n"
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    for c in report.checks:
        mark = "PASS" if c.passed else "FAIL"
        print(f"{mark} {c.module}.{c.name}: observed={c.observed:.3e} tol={c.tolerance:.1e}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_VERIFY


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    obs_names = [o.value for o in Observable]
    p = argparse.ArgumentParser(prog="cue-deviations", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--format", choices=["csv", "json"], default="csv", dest="fmt")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cumulants", parents=[common], help="cumulant table")
    c.add_argument("--observable", choices=obs_names, nargs="+", default=obs_names)
    c.add_argument("--N", type=int)
    c.add_argument("--logN", type=float)
    c.add_argument("--m-max", type=int, default=24)
    c.add_argument("--mode", choices=[m.value for m in Mode], default="exact")
    c.set_defaults(func=cmd_cumulants)

    d = sub.add_parser("density", parents=[common], help="density curve of a standardized observable")
    d.add_argument("--observable", choices=obs_names, required=True)
    d.add_argument("--method", choices=["edgeworth", "inversion", "monte-carlo"], default="edgeworth")
    d.add_argument("--N", type=int, required=True)
    d.add_argument("--x-min", type=float, default=-4.0)
    d.add_argument("--x-max", type=float, default=4.0)
    d.add_argument("--points", type=int, default=1601)
    d.add_argument("--M", type=int, default=edgeworth.DEFAULT_M)
    d.add_argument("--draws", type=int, default=5000)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--workers", type=int, default=None)
    d.add_argument("--theta", type=float, default=0.0)
    d.add_argument("--bins", type=int, default=50)
    d.add_argument("--histogram-out", help="also write bin_left,bin_right,count,normalized_density")
    d.set_defaults(func=cmd_density)

    r = sub.add_parser("regime", parents=[common], help="ratio of Edgeworth density to the limiting form")
    r.add_argument("--theorem", choices=[t.value for t in regimes.Theorem], default="T1")
    r.add_argument("--kappa", type=float, default=1.0)
    g = r.add_mutually_exclusive_group()
    g.add_argument("--alpha", type=float, default=2.0)
    g.add_argument("--epsilon", type=float)
    g.add_argument("--smoothing", choices=[s.value for s in regimes.Smoothing])
    r.add_argument("--log2-min", type=int, default=10, help="smallest log2(log N)")
    r.add_argument("--log2-max", type=int, default=40, help="largest log2(log N)")
    r.add_argument("--M", type=int, default=edgeworth.DEFAULT_M)
    r.set_defaults(func=cmd_regime)

    s = sub.add_parser("smoothing", parents=[common], help="trace exp(-n^{1-alpha(N)})")
    s.add_argument("--sign", choices=[v.value for v in regimes.Smoothing], default="above")
    s.add_argument("--logN", type=float, nargs="*")
    s.set_defaults(func=cmd_smoothing)

    k = sub.add_parser("coefficient", parents=[common], help="moment coefficients and finite-N pre-limits")
    k.add_argument("--family", choices=list("cdfg"), required=True)
    k.add_argument("--kappa", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    k.add_argument("--N", type=int)
    k.set_defaults(func=cmd_coefficient)

    v = sub.add_parser("verify", parents=[common], help="run the invariant suite, JSON report")
    v.add_argument("--only", nargs="+", choices=list(verify.MODULES))
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(args.command, args.output, args.fmt)
    try:
        return args.func(args, cfg)
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
