"""Cumulants of the four CUE observables at finite N and in asymptotic form.

    Q_m  Re log P_N(A, theta)
    R_m  Im log P_N(A, theta)
    S_m  Re log P_N'(A, theta_1)
    T_m  Im log P_N'(A, theta_1)

Exact values are polygamma sums; asymptotic values use only log N, so N can
be astronomically large.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .specfun import EULER_GAMMA, DomainError, log_barnes_g_derivative, polygamma, power_tail_sum, zeta_int

M_MAX_LIMIT = 40
EXACT_N_LIMIT = 10**6


class Observable(str, Enum):
    RE_LOG_P = "re-log-p"
    IM_LOG_P = "im-log-p"
    RE_LOG_P_PRIME = "re-log-p-prime"
    IM_LOG_P_PRIME = "im-log-p-prime"

    @property
    def is_imaginary(self) -> bool:
        return self in (Observable.IM_LOG_P, Observable.IM_LOG_P_PRIME)

    @property
    def is_derivative(self) -> bool:
        return self in (Observable.RE_LOG_P_PRIME, Observable.IM_LOG_P_PRIME)


class Mode(str, Enum):
    EXACT = "exact"
    ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class CumulantSequence:
    observable: Observable
    N: int | None
    log_n: float
    mode: Mode
    values: tuple[float, ...]

    def __getitem__(self, m: int) -> float:
        if not 1 <= m <= len(self.values):
            raise IndexError(f"cumulant index {m} outside 1..{len(self.values)}")
        return self.values[m - 1]

    def __len__(self) -> int:
        return len(self.values)

    @property
    def m_max(self) -> int:
        return len(self.values)

    @property
    def mean(self) -> float:
        return self.values[0]

    @property
    def variance(self) -> float:
        return self.values[1]


# ---------------------------------------------------------------------------
# exact sums
# ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def _harmonic(N: int, p: int) -> float:
    """Generalised harmonic number sum_{k=1}^N k^{-p}."""
    k = np.arange(N, 0, -1, dtype=float)  # small terms first
    return math.fsum(k ** -float(p))


@lru_cache(maxsize=1024)
def polygamma_range_sum(n: int, a: int, b: int) -> float:
    """sum_{k=a}^b Psi^{(n)}(k) for n >= 1 and 1 <= a <= b.

    From Psi^{(n)}(k) = Psi^{(n)}(b+1) - (-1)^n n! sum_{j=k}^b j^{-n-1}:
    the sum is (b-a+1) Psi^{(n)}(b+1) - (-1)^n n! sum_{j=a}^b (j-a+1) j^{-n-1}.
    Both pieces carry the sign (-1)^{n+1}, so nothing cancels.
    """
    if n < 1 or a < 1 or b < a:
        raise DomainError("polygamma_range_sum needs n >= 1 and 1 <= a <= b")
    j = np.arange(b, a - 1, -1, dtype=float)
    with np.errstate(under="ignore"):
        weighted = math.fsum((j - a + 1.0) * j ** -float(n + 1))
    head = (b - a + 1) * float(polygamma(n, b + 1.0))
    return head - (-1.0) ** n * math.factorial(n) * weighted


def polygamma_sum(n: int, N: int) -> float:
    """sum_{l=1}^N Psi^{(n)}(l) for n >= 1."""
    return polygamma_range_sum(n, 1, N)


def _check(N: int | None, log_n: float | None, m_max: int, mode: Mode) -> tuple[int | None, float]:
    if m_max < 1 or m_max > M_MAX_LIMIT:
        raise DomainError(f"m_max must lie in 1..{M_MAX_LIMIT}, got {m_max}")
    mode = Mode(mode)
    if mode is Mode.EXACT:
        if N is None or int(N) != N or N < 2:
            raise DomainError("exact cumulants need an integer N >= 2")
        if N > EXACT_N_LIMIT:
            raise DomainError(f"exact cumulants are capped at N <= {EXACT_N_LIMIT}")
        return int(N), math.log(N)
    if log_n is None:
        if N is None or N < 2:
            raise DomainError("asymptotic cumulants need N >= 2 or log_n")
        log_n = math.log(N)
    if not (math.isfinite(log_n) and log_n > 0):
        raise DomainError("log N must be finite and positive")
    return (int(N) if N is not None else None), float(log_n)


def _q_exact(N: int, m: int) -> float:
    if m == 1:
        return 0.0
    return (1.0 - 2.0 ** (1 - m)) * polygamma_sum(m - 1, N)


def _r_exact(N: int, m: int) -> float:
    if m % 2:
        return 0.0
    j = m // 2
    return (-1.0) ** (j + 1) / 2.0 ** (2 * j - 1) * polygamma_sum(2 * j - 1, N)


def _s_exact(N: int, m: int) -> float:
    # sum_{l=1}^{N-1} [Psi^{(m-1)}(l+2) - 2^{1-m} Psi^{(m-1)}(l+1)]
    if m == 1:
        return _harmonic(N, 1) - 1.0
    n = m - 1
    return polygamma_range_sum(n, 3, N + 1) - 2.0 ** (1 - m) * polygamma_range_sum(n, 2, N)


def _t_exact(N: int, m: int) -> float:
    if m == 1:
        return -math.pi / 2.0
    if m % 2:
        return 0.0
    # -(i^m / 2^{m-1}) sum_{l=2}^N Psi^{(m-1)}(l)
    sign = (-1.0) ** (m // 2)
    return -sign / 2.0 ** (m - 1) * polygamma_range_sum(m - 1, 2, N)


def s_exact_barnes(N: int, m: int) -> float:
    """S_m(N) from closed-form Barnes-G log-derivatives of the derivative MGF.

    Independent route to the same numbers as the polygamma sums; used as a
    cross-check.
    """
    def L(z: float) -> float:
        return float(log_barnes_g_derivative(m, z))

    return 2.0 ** (1 - m) * (L(2.0) - L(N + 1.0)) + L(N + 2.0) - L(3.0)


# ---------------------------------------------------------------------------
# asymptotic forms
# ---------------------------------------------------------------------------

def q_limit(m: int) -> float:
    """lim Q_m(N) for m >= 3."""
    return (-1.0) ** m * (1.0 - 2.0 ** (1 - m)) * math.factorial(m - 1) * zeta_int(m - 1)


def _q_asym(log_n: float, m: int) -> float:
    if m == 1:
        return 0.0
    if m == 2:
        return 0.5 * (log_n + EULER_GAMMA + 1.0)
    return q_limit(m)


def _r_asym(log_n: float, m: int) -> float:
    if m % 2:
        return 0.0
    if m == 2:
        return _q_asym(log_n, 2)
    j = m // 2
    return (-1.0) ** (j + 1) * q_limit(m) / (2.0 ** (2 * j - 1) - 1.0)


def polygamma_tail_sum(n: int, a: int) -> float:
    """sum_{k=a}^inf Psi^{(n)}(k) for n >= 2: (-1)^{n+1} n! sum_{i>=a} (i-a+1)/i^{n+1}."""
    return (-1.0) ** (n + 1) * math.factorial(n) * power_tail_sum(n, a, a - 1.0)


def _s_asym(log_n: float, m: int) -> float:
    if m == 1:
        return log_n + EULER_GAMMA - 1.0
    if m == 2:
        return 0.5 * log_n + 0.5 * (EULER_GAMMA + 3.0 - 3.0 * zeta_int(2))
    # limit of the exact sum (only O(1) is displayed in the source)
    n = m - 1
    return polygamma_tail_sum(n, 3) - 2.0 ** (1 - m) * polygamma_tail_sum(n, 2)


def _t_asym(log_n: float, m: int) -> float:
    if m == 1:
        return -math.pi / 2.0
    if m % 2:
        return 0.0
    if m == 2:
        return 0.5 * (log_n + EULER_GAMMA + 1.0 - zeta_int(2))
    return -(-1.0) ** (m // 2) / 2.0 ** (m - 1) * polygamma_tail_sum(m - 1, 2)


_EXACT = {
    Observable.RE_LOG_P: _q_exact,
    Observable.IM_LOG_P: _r_exact,
    Observable.RE_LOG_P_PRIME: _s_exact,
    Observable.IM_LOG_P_PRIME: _t_exact,
}
_ASYM = {
    Observable.RE_LOG_P: _q_asym,
    Observable.IM_LOG_P: _r_asym,
    Observable.RE_LOG_P_PRIME: _s_asym,
    Observable.IM_LOG_P_PRIME: _t_asym,
}


def cumulants(
    observable: Observable | str,
    N: int | None = None,
    m_max: int = 24,
    mode: Mode | str = Mode.EXACT,
    *,
    log_n: float | None = None,
) -> CumulantSequence:
    """Cumulants 1..m_max of an observable.

    Exact mode needs an integer N <= 10^6; asymptotic mode accepts log_n in
    place of N.
    """
    observable = Observable(observable)
    mode = Mode(mode)
    N, log_n = _check(N, log_n, m_max, mode)
    if mode is Mode.EXACT:
        vals = tuple(_EXACT[observable](N, m) for m in range(1, m_max + 1))
    else:
        vals = tuple(_ASYM[observable](log_n, m) for m in range(1, m_max + 1))
    return CumulantSequence(observable, N, log_n, mode, vals)


def cumulants_re_logP(N=None, m_max=24, mode=Mode.EXACT, *, log_n=None) -> CumulantSequence:
    return cumulants(Observable.RE_LOG_P, N, m_max, mode, log_n=log_n)


def cumulants_im_logP(N=None, m_max=24, mode=Mode.EXACT, *, log_n=None) -> CumulantSequence:
    return cumulants(Observable.IM_LOG_P, N, m_max, mode, log_n=log_n)


def cumulants_re_logPprime(N=None, m_max=24, mode=Mode.EXACT, *, log_n=None) -> CumulantSequence:
    return cumulants(Observable.RE_LOG_P_PRIME, N, m_max, mode, log_n=log_n)


def cumulants_im_logPprime(N=None, m_max=24, mode=Mode.EXACT, *, log_n=None) -> CumulantSequence:
    return cumulants(Observable.IM_LOG_P_PRIME, N, m_max, mode, log_n=log_n)
