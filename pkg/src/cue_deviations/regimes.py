"""Interpolating moderate-deviation regimes between the CLT scale and the
large-deviation scale.

All formulas take log N as a float, so N may be far beyond machine range.
With n = log log N and eps = 1 - n^{-alpha} the evaluation point is

    x = kappa * sqrt((log N)^{1 + eps} / var)

and the limiting density at x is (2 pi)^{-1/2} exp(-kappa^2 e^{n - n^{1-alpha}})
times a moment coefficient chosen by alpha.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .cumulants import Mode, Observable, cumulants
from .edgeworth import DEFAULT_M, correction_factor
from .mgf import log_mgf
from .specfun import EULER_GAMMA, DomainError, log_barnes_g, zeta_int

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


class Smoothing(str, Enum):
    ABOVE = "above"
    BELOW = "below"


class Theorem(str, Enum):
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    T5 = "T5"


THEOREM_OBSERVABLE = {
    Theorem.T1: Observable.RE_LOG_P,
    Theorem.T2: Observable.IM_LOG_P,
    Theorem.T3: Observable.RE_LOG_P_PRIME,
    Theorem.T5: Observable.IM_LOG_P_PRIME,
}
THEOREM_FAMILY = {Theorem.T1: "c", Theorem.T2: "d", Theorem.T3: "f", Theorem.T5: "g"}
FAMILY_OBSERVABLE = {THEOREM_FAMILY[t]: o for t, o in THEOREM_OBSERVABLE.items()}


@dataclass(frozen=True)
class RegimeSpec:
    kappa: float
    alpha: float | Smoothing
    log_n: float

    def __post_init__(self):
        if not (self.kappa > 0 and math.isfinite(self.kappa)):
            raise DomainError("kappa must be positive")
        if not (math.isfinite(self.log_n) and self.log_n > 1.0):
            raise DomainError("need log log N > 0, i.e. N > e")
        if isinstance(self.alpha, Smoothing):
            if self.n <= 1.0:
                raise DomainError("smoothing needs log log log N > 0")
        elif not (self.alpha >= 0 and math.isfinite(self.alpha)):
            raise DomainError("alpha must be a finite number >= 0")

    @classmethod
    def from_N(cls, kappa: float, alpha: float | Smoothing, N: float) -> RegimeSpec:
        return cls(kappa, alpha, math.log(N))

    @property
    def n(self) -> float:
        return math.log(self.log_n)

    @property
    def alpha_value(self) -> float:
        if isinstance(self.alpha, Smoothing):
            delta = 1.0 / (self.log_n * math.log(self.n))
            return 1.0 + delta if self.alpha is Smoothing.ABOVE else 1.0 - delta
        return float(self.alpha)

    @property
    def n_pow(self) -> float:
        """n^{1 - alpha}."""
        return math.exp((1.0 - self.alpha_value) * math.log(self.n))

    @property
    def epsilon(self) -> float:
        return 1.0 - math.exp(-self.alpha_value * math.log(self.n))

    @property
    def gaussian_exponent(self) -> float:
        """kappa^2 exp(n - n^{1 - alpha})."""
        return self.kappa ** 2 * math.exp(self.n - self.n_pow)


def _variance(observable: Observable, spec: RegimeSpec, mode: Mode, N: int | None) -> float:
    if Mode(mode) is Mode.EXACT:
        return cumulants(observable, N, 2, Mode.EXACT).variance
    return cumulants(observable, m_max=2, mode=Mode.ASYMPTOTIC, log_n=spec.log_n).variance


def evaluation_point(spec: RegimeSpec, observable: Observable | str,
                     mode: Mode | str = Mode.ASYMPTOTIC, N: int | None = None) -> float:
    observable = Observable(observable)
    var = _variance(observable, spec, mode, N)
    return spec.kappa * math.exp(0.5 * ((1.0 + spec.epsilon) * math.log(spec.log_n) - math.log(var)))


# ---------------------------------------------------------------------------
# moment coefficients
# ---------------------------------------------------------------------------

def log_moment_coefficient(family: str, kappa: float) -> float:
    """log of c, d, f or g at kappa.

    c = G(k+1)^2 / G(2k+1)
    d = |G(1+ik)|^2
    f = G(k+2)^2 / G(2k+3) * e^{2k(1-gamma)}   (moment constant of |P'| e^{-S_1})
    g = |G(2+ik)|^2
    """
    if not (kappa >= 0 and math.isfinite(kappa)):
        raise DomainError("kappa must be a finite number >= 0")
    if family == "c":
        return 2.0 * float(log_barnes_g(kappa + 1.0)) - float(log_barnes_g(2.0 * kappa + 1.0))
    if family == "d":
        return 2.0 * complex(log_barnes_g(complex(1.0, kappa))).real
    if family == "f":
        return log_derivative_moment_constant(kappa) + 2.0 * kappa * (1.0 - EULER_GAMMA)
    if family == "g":
        return 2.0 * complex(log_barnes_g(complex(2.0, kappa))).real
    raise DomainError(f"unknown coefficient family {family!r}")


def log_derivative_moment_constant(kappa: float) -> float:
    """log G(k+2)^2 / G(2k+3): the limit of E|P'|^{2k} / N^{k^2 + 2k}."""
    return 2.0 * float(log_barnes_g(kappa + 2.0)) - float(log_barnes_g(2.0 * kappa + 3.0))


def moment_coefficient(family: str, kappa: float) -> float:
    return math.exp(log_moment_coefficient(family, kappa))


# 2 var - log N in the limit, per observable
_VARIANCE_OFFSET = {
    Observable.RE_LOG_P: EULER_GAMMA + 1.0,
    Observable.IM_LOG_P: EULER_GAMMA + 1.0,
    Observable.RE_LOG_P_PRIME: EULER_GAMMA + 3.0 - 3.0 * zeta_int(2),
    Observable.IM_LOG_P_PRIME: EULER_GAMMA + 1.0 - zeta_int(2),
}


@dataclass(frozen=True)
class CoefficientCheck:
    family: str
    kappa: float
    N: int
    value: float
    route: str  # "series" or "mgf"
    diverged: bool
    terms: int


def coefficient_limit_check(family: str, kappa: float, N: int, *, route: str = "auto",
                            m_max: int = 40, tol: float = 1e-8) -> CoefficientCheck:
    """Finite-N pre-limit of a moment coefficient.

    The series route evaluates exp(k^2 (2 var - log N) + sum_{m>=3} cum_m (2k)^m / m!)
    with exact cumulants truncated at m_max; it is flagged divergent when the
    last retained term exceeds ``tol`` times the partial sum.  The mgf route
    evaluates the same quantity through the exact log-MGF,
    exp(log M(2k) - 2k cum_1 - k^2 log N), which is its analytic continuation.
    "auto" takes the series when it converges and falls back otherwise.
    """
    if family not in FAMILY_OBSERVABLE:
        raise DomainError(f"unknown coefficient family {family!r}")
    if not (kappa >= 0 and math.isfinite(kappa)):
        raise DomainError("kappa must be a finite number >= 0")
    if N > 10**6:
        raise DomainError("coefficient_limit_check uses exact cumulants, N <= 10^6")
    observable = FAMILY_OBSERVABLE[family]
    u = 2.0 * kappa
    log_n = math.log(N)
    if route in ("auto", "series"):
        cum = cumulants(observable, N, m_max, Mode.EXACT)
        terms = [kappa ** 2 * (2.0 * cum.variance - log_n)]
        for m in range(3, m_max + 1):
            terms.append(cum[m] * u ** m / math.factorial(m))
        partial = math.fsum(terms)
        tail = max(abs(t) for t in terms[-2:])
        diverged = tail > tol * max(abs(partial), 1.0)
        if route == "series" or not diverged:
            value = math.exp(partial) if partial < 700.0 else math.inf
            return CoefficientCheck(family, kappa, N, value, "series", diverged, m_max)
    elif route != "mgf":
        raise DomainError(f"unknown route {route!r}")
    mean = cumulants(observable, N, 1, Mode.EXACT).mean
    val = float(log_mgf(observable, N, u)) - u * mean - kappa ** 2 * log_n
    return CoefficientCheck(family, kappa, N, math.exp(val), "mgf", False, 0)


# ---------------------------------------------------------------------------
# theorem right-hand sides
# ---------------------------------------------------------------------------

def selected_coefficient(theorem: Theorem | str, spec: RegimeSpec) -> tuple[float, str]:
    """Coefficient multiplying the Gaussian factor, and a label for the branch used.

    Numeric alpha uses the three-way rule (kappa for alpha > 1, kappa/sqrt(e)
    at alpha = 1, 1 below).  The smoothed rules use the continuous argument
    kappa * exp(-n^{1-alpha}/2), which tends to kappa/sqrt(e).
    """
    family = THEOREM_FAMILY[Theorem(theorem)]
    if isinstance(spec.alpha, Smoothing):
        k_eff = spec.kappa * math.exp(-0.5 * spec.n_pow)
        return moment_coefficient(family, k_eff), f"smoothed-{spec.alpha.value}"
    if spec.alpha > 1.0:
        return moment_coefficient(family, spec.kappa), "alpha>1"
    if spec.alpha == 1.0:
        return moment_coefficient(family, spec.kappa / math.sqrt(math.e)), "alpha=1"
    return 1.0, "alpha<1"


def log_gaussian_factor(spec: RegimeSpec) -> float:
    return -_LOG_SQRT_2PI - spec.gaussian_exponent


def theorem_density(theorem: Theorem | str, spec: RegimeSpec) -> float:
    coef, _ = selected_coefficient(theorem, spec)
    return math.exp(log_gaussian_factor(spec)) * coef


@dataclass(frozen=True)
class RatioDiagnostic:
    """Decomposition of log(Edgeworth density / Gaussian factor) at x(N; eps)."""

    log_n: float
    x: float
    exponent_gap: float  # -x^2/2 + kappa^2 e^{n - n^{1-alpha}}
    correction: float  # 1 + sum A_m var^{-m/2} He_m(x)
    coefficient: float
    branch: str

    @property
    def ratio(self) -> float:
        return math.exp(self.exponent_gap) * self.correction


def ratio_diagnostic(theorem: Theorem | str, spec: RegimeSpec, M: int = DEFAULT_M) -> RatioDiagnostic:
    """Edgeworth density at x(N; eps) over the theorem's Gaussian factor.

    Works in log space: with 2 var = log N + c0 the Gaussian exponents differ by
    kappa^2 (log N)^eps c0 / (log N + c0), which is evaluated without
    cancellation even at log N = 10^300.
    """
    theorem = Theorem(theorem)
    observable = THEOREM_OBSERVABLE[theorem]
    x = evaluation_point(spec, observable)
    c0 = _VARIANCE_OFFSET[observable]
    log_pow_eps = spec.epsilon * math.log(spec.log_n)
    gap = spec.kappa ** 2 * math.exp(log_pow_eps) * c0 / (spec.log_n + c0)
    # the difference between (log N)^eps and e^{n - n^{1-alpha}} is rounding only
    corr = float(correction_factor(observable, x, M, Mode.ASYMPTOTIC, log_n=spec.log_n))
    coef, branch = selected_coefficient(theorem, spec)
    return RatioDiagnostic(spec.log_n, x, gap, corr, coef, branch)


def ratio_trend(theorem: Theorem | str, kappa: float, alpha: float | Smoothing,
                log_n_grid, M: int = DEFAULT_M) -> list[RatioDiagnostic]:
    return [ratio_diagnostic(theorem, RegimeSpec(kappa, alpha, float(L)), M) for L in log_n_grid]


def is_monotone_trend(distances) -> bool:
    """Decreasing toward zero allowing isolated single-step increases."""
    d = np.asarray(distances, dtype=float)
    if d.size < 2 or not np.all(np.isfinite(d)):
        return False
    up = np.diff(d) > 0
    consecutive = bool(np.any(up[1:] & up[:-1]))
    return (not consecutive) and d[-1] < d[0]


def smoothing_value(sign: Smoothing | str, log_n: float) -> float:
    """exp(-n^{1 - alpha(N)}) for alpha(N) = 1 +/- 1/(log N log log log N)."""
    spec = RegimeSpec(1.0, Smoothing(sign), float(log_n))
    return math.exp(-spec.n_pow)


def smoothing_trace(sign: Smoothing | str, log_n_grid) -> list[tuple[float, float]]:
    return [(float(L), smoothing_value(sign, L)) for L in log_n_grid]
