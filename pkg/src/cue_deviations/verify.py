"""Desk-scale invariant suite behind ``cue-deviations verify``."""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy import stats

from . import edgeworth, regimes, sampler
from .cumulants import Mode, Observable, cumulants
from .mgf import char_function, invert_density, InversionConfig
from .oracles import cumulants_by_differences
from .specfun import EULER_GAMMA, log_barnes_g, log_gamma, polygamma, zeta_int

SCHEMA_VERSION = 1
MODULES = ("specfun", "cumulants", "edgeworth", "mgf_oracle", "regimes", "sampler")


@dataclass
class CheckResult:
    module: str
    name: str
    passed: bool
    observed: float
    tolerance: float
    detail: str = ""
    seconds: float = 0.0


@dataclass
class Report:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "passed": self.passed,
            "n_checks": len(self.checks),
            "n_failed": sum(not c.passed for c in self.checks),
            "checks": [_clean(asdict(c)) for c in self.checks],
        }


def _clean(d: dict) -> dict:
    if not math.isfinite(d["observed"]):
        d["observed"] = None
    return d


REPORT_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "passed", "n_checks", "n_failed", "checks"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "passed": {"type": "boolean"},
        "n_checks": {"type": "integer"},
        "n_failed": {"type": "integer"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["module", "name", "passed", "observed", "tolerance", "detail", "seconds"],
                "properties": {
                    "module": {"enum": list(MODULES)},
                    "name": {"type": "string"},
                    "passed": {"type": "boolean"},
                    "observed": {"type": ["number", "null"]},
                    "tolerance": {"type": "number"},
                    "detail": {"type": "string"},
                    "seconds": {"type": "number"},
                },
            },
        },
    },
}

_REGISTRY: dict[str, list[tuple[str, Callable[[], tuple[float, float, str]]]]] = {m: [] for m in MODULES}


def check(module: str, name: str):
    """Register fn() -> (observed, tolerance, detail); passes when observed <= tolerance."""
    def deco(fn):
        _REGISTRY[module].append((name, fn))
        return fn
    return deco


def _bool(ok: bool, detail: str = "") -> tuple[float, float, str]:
    return (0.0 if ok else 1.0), 0.0, detail


# ---------------------------------------------------------------------------
# specfun
# ---------------------------------------------------------------------------

@check("specfun", "constants")
def _constants():
    err = max(abs(zeta_int(2) - math.pi ** 2 / 6), abs(EULER_GAMMA - 0.57721566490153286))
    return err, 1e-15, "zeta(2) and Euler's constant"


@check("specfun", "gamma_recurrence")
def _gamma_recurrence():
    # beyond |z| ~ 200 the two logs exceed 1e3 and their difference cannot
    # resolve 1e-12 in double precision, whatever the algorithm
    z = np.concatenate([np.geomspace(0.5, 200, 40), np.geomspace(0.5, 200, 20) * np.exp(0.7j)])
    ratio = np.exp(log_gamma(z + 1) - log_gamma(z))
    return float(np.max(np.abs(ratio / z - 1))), 1e-12, "Gamma(z+1)/Gamma(z) = z, 0.5 <= |z| <= 200"


@check("specfun", "polygamma_derivative")
def _polygamma_derivative():
    worst = 0.0
    for n in range(7):
        for x in (1.5, 10.0, 100.0):
            h = 1e-4
            num = (polygamma(n, x + h) - polygamma(n, x - h)) / (2 * h)
            ref = polygamma(n + 1, x)
            worst = max(worst, abs(num - ref) / max(abs(ref), 1e-300))
    return worst, 1e-6, "central difference of Psi^(n) vs Psi^(n+1)"


@check("specfun", "barnes_functional_equation")
def _barnes_fe():
    real = np.linspace(0.05, 60.0, 100)
    cplx = 1.0 + np.linspace(-10, 10, 50) * 1j + np.linspace(0, 3, 50)
    z = np.concatenate([real.astype(complex), cplx])
    lhs = np.asarray(log_barnes_g(z + 1)) - np.asarray(log_barnes_g(z))
    res = np.exp(lhs - log_gamma(z)) - 1.0
    return float(np.max(np.abs(res))), 1e-10, "G(z+1) = Gamma(z) G(z), 100 real + 50 complex points"


# ---------------------------------------------------------------------------
# cumulants
# ---------------------------------------------------------------------------

@check("cumulants", "oracle_equivalence")
def _oracle():
    worst = 0.0
    for obs in Observable:
        for N in (10, 100):
            ref = cumulants_by_differences(obs, N, 6)
            got = cumulants(obs, N, 6).values
            for a, b in zip(ref, got):
                worst = max(worst, abs(a - b) / max(abs(b), 1e-12) if b else abs(a))
    return worst, 1e-6, "m <= 6, N in {10, 100}, 40-digit Richardson differences"


@check("cumulants", "r_q_relation")
def _rq():
    worst = 0.0
    for N in (10, 100, 1000):
        q = cumulants(Observable.RE_LOG_P, N, 12)
        r = cumulants(Observable.IM_LOG_P, N, 12)
        for j in range(1, 7):
            ref = (-1) ** (j + 1) * q[2 * j] / (2 ** (2 * j - 1) - 1)
            worst = max(worst, abs(r[2 * j] - ref) / abs(ref))
    return worst, 1e-14, "R_2j = (-1)^{j+1} Q_2j / (2^{2j-1} - 1)"


@check("cumulants", "exact_vs_asymptotic_decay")
def _decay():
    Ns = [50 * 2 ** k for k in range(7)]
    worst = 0.0
    for obs in Observable:
        for m in range(1, 7):
            d = np.array([N * abs(cumulants(obs, N, 6)[m] - cumulants(obs, N, 6, Mode.ASYMPTOTIC)[m])
                          for N in Ns])
            # N |Delta| is bounded and settles: its increments shrink
            inc = np.abs(np.diff(d))
            worst = max(worst, float(np.max(np.maximum(inc[1:] - inc[:-1] - 1e-9, 0.0))))
    return worst, 0.0, "N |exact - asymptotic| settles over N = 50..3200"


@check("cumulants", "q_monotone_and_convergent")
def _qmono():
    Ns = [2 ** k for k in range(3, 16)]
    q = [cumulants(Observable.RE_LOG_P, N, 6) for N in Ns]
    ok = all(b[2] > a[2] for a, b in zip(q, q[1:]))
    for m in range(3, 7):
        d = [abs(b[m] - a[m]) for a, b in zip(q, q[1:])]
        ok &= all(y <= x * (1 + 1e-9) + 1e-13 for x, y in zip(d, d[1:]))
    return _bool(ok, "Q_2 increasing; dyadic increments of Q_m shrink")


# ---------------------------------------------------------------------------
# edgeworth
# ---------------------------------------------------------------------------

@check("edgeworth", "hermite_identity")
def _hermite():
    x = np.linspace(-5, 5, 101)
    worst = 0.0
    for m in range(21):
        a, b = edgeworth.hermite_weight(m, x), edgeworth.hermite_recurrence(m, x)
        worst = max(worst, float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1.0))))
    return worst, 1e-9, "binomial / double-factorial sum vs three-term recurrence, m <= 20"


# trapezoid on a fine grid is spectrally accurate for smooth, Gaussian-decaying integrands
_FINE = np.arange(-40.0, 40.005, 0.01)


@check("edgeworth", "normalization")
def _norm():
    worst = 0.0
    for obs in Observable:
        for M in (0, 6, 12, 24):
            val = np.trapezoid(edgeworth.density(obs, 50, _FINE, M), _FINE)
            worst = max(worst, abs(val - 1.0))
    return float(worst), 1e-8, "trapezoid integral of the Edgeworth curve over [-40, 40], N = 50"


@check("edgeworth", "moments")
def _moments():
    worst = 0.0
    for obs in Observable:
        d = edgeworth.density(obs, 50, _FINE, 24)
        m1, m2 = np.trapezoid(_FINE * d, _FINE), np.trapezoid(_FINE ** 2 * d, _FINE)
        worst = max(worst, abs(m1), abs(m2 - 1.0))
    return float(worst), 1e-6, "mean 0 and variance 1 of the standardized curve"


@check("edgeworth", "dominance")
def _dominance():
    worst = 1.0
    for m in range(1, 11):
        for x in (10.0, 20.0, 50.0):
            worst = min(worst, x ** m / abs(edgeworth.hermite_recurrence(m, x)))
    return 0.9 - worst, 0.0, f"min share of the p = m monomial at x >= 10 is {worst:.4f}"


@check("edgeworth", "im_symmetry")
def _symmetry():
    x = np.linspace(0, 6, 61)
    worst = 0.0
    for obs in (Observable.IM_LOG_P, Observable.IM_LOG_P_PRIME):
        worst = max(worst, float(np.max(np.abs(edgeworth.density(obs, 50, x, 30) - edgeworth.density(obs, 50, -x, 30)))))
    return worst, 1e-12, "density(x) = density(-x)"


@check("edgeworth", "truncation_stability")
def _stability():
    x = np.linspace(-4, 4, 81)
    bad = []
    for obs in Observable:
        d = [float(np.max(np.abs(edgeworth.density(obs, 50, x, M) - edgeworth.density(obs, 50, x, M + 2))))
             for M in range(10, 30, 2)]
        if not all(b <= a for a, b in zip(d, d[1:])):
            bad.append(obs.value)
    return float(len(bad)), 0.0, "non-monotone: " + (", ".join(bad) or "none")


# ---------------------------------------------------------------------------
# mgf oracle
# ---------------------------------------------------------------------------

def _richardson(f, m: int, h: float, levels: int = 4) -> complex:
    def central(step):
        i = np.arange(m + 1)
        w = np.array([(-1) ** (m - k) * math.comb(m, k) for k in i], dtype=float)
        return w @ f((i - m / 2) * step) / step ** m

    table = [[central(h / 2 ** k)] for k in range(levels)]
    for j in range(1, levels):
        for k in range(j, levels):
            table[k].append(table[k][j - 1] + (table[k][j - 1] - table[k - 1][j - 1]) / (4 ** j - 1))
    return table[-1][-1]


@check("mgf_oracle", "cumulant_round_trip")
def _round_trip():
    worst = 0.0
    for obs in Observable:
        for N in (10, 100):
            c = cumulants(obs, N, 4)
            for m in range(1, 5):
                # d^m log phi / dt^m at 0 equals i^m k_m
                d = _richardson(lambda t: np.log(char_function(obs, N, t)), m, 0.2)
                est = (d / 1j ** m).real
                if c[m]:
                    worst = max(worst, abs(est - c[m]) / abs(c[m]))
    return worst, 1e-6, "Richardson derivatives of log phi at t = 0 vs exact cumulants, m <= 4"


@check("mgf_oracle", "unit_at_zero_and_bounded")
def _phi_bounds():
    t = np.linspace(-40, 40, 2001)
    worst = 0.0
    for obs in Observable:
        phi = char_function(obs, 30, t)
        worst = max(worst, abs(char_function(obs, 30, 0.0) - 1.0), float(np.max(np.abs(phi))) - 1.0)
    return max(worst, 0.0), 1e-12, "phi(0) = 1 and |phi| <= 1 up to rounding"


@check("mgf_oracle", "second_moment_identity")
def _second_moment():
    from .mgf import mgf
    worst = max(abs(mgf(Observable.RE_LOG_P, N, 2.0) / (N + 1) - 1) for N in (2, 20, 200))
    return worst, 1e-10, "E|P_N|^2 = N + 1 from the exact MGF"


@check("mgf_oracle", "inversion_normalization_and_symmetry")
def _inversion():
    x = np.linspace(-30, 30, 3001)
    worst = 0.0
    for obs in Observable:
        cur = invert_density(obs, 50, x)
        worst = max(worst, abs(cur.integral() - 1.0))
        if obs.is_imaginary:
            worst = max(worst, float(np.max(np.abs(cur.density - cur.density[::-1]))))
    return worst, 1e-8, "integral over [-30, 30]; Im curves even"


@check("mgf_oracle", "inversion_step_halving")
def _halving():
    x = np.linspace(-8, 8, 161)
    worst = 0.0
    for obs in Observable:
        a = invert_density(obs, 50, x).density
        b = invert_density(obs, 50, x, InversionConfig(period=192.0)).density
        worst = max(worst, float(np.max(np.abs(a - b))))
    return worst, 1e-9, "period 96 vs 192"


# ---------------------------------------------------------------------------
# regimes
# ---------------------------------------------------------------------------

@check("regimes", "smoothing_trace")
def _smoothing():
    worst = max(abs(regimes.smoothing_value(s, 1e6) - math.exp(-1)) for s in regimes.Smoothing)
    return worst, 1e-5, "exp(-n^{1-alpha(N)}) at log N = 10^6"


@check("regimes", "smoothed_coefficient_continuity")
def _smooth_coef():
    worst = 0.0
    for th in regimes.Theorem:
        ref, _ = regimes.selected_coefficient(th, regimes.RegimeSpec(1.0, 1.0, 1e8))
        for s in regimes.Smoothing:
            val, _ = regimes.selected_coefficient(th, regimes.RegimeSpec(1.0, s, 1e8))
            worst = max(worst, abs(val / ref - 1))
    return worst, 1e-4, "smoothed coefficient vs the alpha = 1 branch at log N = 10^8"


@check("regimes", "coefficient_limits")
def _limits():
    worst = 0.0
    for fam in "cdfg":
        for k in (0.5, 1.0, 2.0):
            r = regimes.coefficient_limit_check(fam, k, 10 ** 6)
            worst = max(worst, abs(r.value - regimes.moment_coefficient(fam, k)))
    return worst, 1e-3, "pre-limit at N = 10^6 vs Barnes-G value"


@check("regimes", "ratio_trends")
def _trends():
    grid = [2.0 ** k for k in range(10, 41)]
    bad = []
    for th in regimes.Theorem:
        for a in (0.0, 0.5, 2.0):
            for k in (0.5, 1.0):
                tr = regimes.ratio_trend(th, k, a, grid)
                if not regimes.is_monotone_trend([abs(r.ratio - r.coefficient) for r in tr]):
                    bad.append(f"{th.value}/alpha={a}/kappa={k}")
    return float(len(bad)), 0.0, "non-convergent: " + (", ".join(bad) or "none")


@check("regimes", "g_is_d_times_gamma_factor")
def _g_vs_d():
    worst = 0.0
    for k in np.linspace(0.1, 5, 25):
        ratio = regimes.moment_coefficient("g", k) / regimes.moment_coefficient("d", k)
        worst = max(worst, abs(ratio / (math.pi * k / math.sinh(math.pi * k)) - 1))
    return worst, 1e-10, "|G(2+ik)|^2 = |G(1+ik)|^2 |Gamma(1+ik)|^2"


# ---------------------------------------------------------------------------
# sampler (reduced sizes; the acceptance tests run the full ones)
# ---------------------------------------------------------------------------

@check("sampler", "u1_uniform")
def _u1():
    ang = np.array([sampler.sample_spectrum(1, 7, i).eigenangles[0] for i in range(10 ** 4)])
    ks = stats.kstest(ang, stats.uniform(loc=-math.pi, scale=2 * math.pi).cdf).statistic
    return float(ks), 0.02, "N = 1 angles vs uniform on (-pi, pi]"


@check("sampler", "determinism")
def _det():
    a = sampler.simulate(Observable.RE_LOG_P, 8, 200, seed=42, workers=1)
    b = sampler.simulate(Observable.RE_LOG_P, 8, 200, seed=42, workers=3)
    ok = np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    return _bool(ok, "identical draws for 1 and 3 workers")


@check("sampler", "sine_series_branch")
def _sine():
    rng = np.random.default_rng(0)
    phi = rng.uniform(0.1, 2 * math.pi - 0.1, 100)
    ell = np.arange(1, 10 ** 6 + 1, dtype=float)
    worst = 0.0
    for p in phi:
        series = -np.sum(np.sin(p * ell) / ell)
        worst = max(worst, abs(series - np.angle(1 - np.exp(1j * p))))
    return worst, 1e-4, "-sum sin(l phi)/l vs principal arg(1 - e^{i phi})"


@check("sampler", "second_moment_small")
def _mc_second():
    re, _, _ = sampler.simulate(Observable.RE_LOG_P, 20, 5000, seed=11)
    v = np.exp(2 * re)
    z = abs(v.mean() - 21.0) / (v.std(ddof=1) / math.sqrt(v.size))
    return float(z), 3.0, "E|P_20|^2 vs 21 in standard errors, 5000 draws"


def run(only: list[str] | None = None) -> Report:
    report = Report()
    for module in MODULES:
        if only and module not in only:
            continue
        for name, fn in _REGISTRY[module]:
            t0 = time.perf_counter()
            try:
                observed, tol, detail = fn()
                passed = bool(observed <= tol)
            except Exception as exc:  # a crashing check is a failed check
                observed, tol, detail, passed = float("nan"), 0.0, f"error: {exc!r}", False
            report.checks.append(CheckResult(module, name, passed, float(observed), float(tol), detail,
                                             round(time.perf_counter() - t0, 3)))
    return report
