"""Edgeworth (Gram-Charlier) density expansions of the standardized observables."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import hermite_e

from .cumulants import M_MAX_LIMIT, CumulantSequence, Mode, Observable, cumulants
from .mgf import DensityCurve, Method
from .specfun import DomainError

DEFAULT_M = 24
LOW_ACCURACY_N = 5
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class SeriesCoefficients:
    """Coefficients of u^m, m = 0..M, in exp(sum_{m>=3} cum_m u^m / m!)."""

    observable: Observable | None
    N: int | None
    M: int
    values: tuple[float, ...]

    def __getitem__(self, m: int) -> float:
        return self.values[m]


def exp_formal_series(tail: dict[int, float] | list[tuple[int, float]], M: int) -> np.ndarray:
    """Coefficients a_0..a_M of exp(b(u)) with b(u) = sum_m b_m u^m.

    ``tail`` maps m (>= 3) to b_m = cum_m / m!.  Uses a_0 = 1 and
    n a_n = sum_{k=1}^n k b_k a_{n-k}.
    """
    if M > M_MAX_LIMIT:
        raise DomainError(f"truncation M must be <= {M_MAX_LIMIT}")
    items = dict(tail)
    if any(m < 3 for m in items):
        raise DomainError("the exponentiated tail starts at u^3")
    b = np.zeros(M + 1)
    for m, v in items.items():
        if m <= M:
            b[m] = v
    a = np.zeros(M + 1)
    a[0] = 1.0
    k = np.arange(M + 1)
    for n in range(1, M + 1):
        a[n] = np.dot(k[1:n + 1] * b[1:n + 1], a[n - 1::-1][:n]) / n
    return a


def series_coefficients(cum: CumulantSequence, M: int = DEFAULT_M) -> SeriesCoefficients:
    if cum.m_max < M:
        raise DomainError("cumulant sequence shorter than the truncation")
    tail = {m: cum[m] / math.factorial(m) for m in range(3, M + 1)}
    a = exp_formal_series(tail, M)
    return SeriesCoefficients(cum.observable, cum.N, M, tuple(a.tolist()))


def _double_factorial(n: int) -> int:
    return 1 if n <= 0 else math.prod(range(n, 0, -2))


def pairing_weight(m: int, p: int) -> int:
    """E(m, p): (m-p-1)!! when m-p is even, else 0; (-1)!! = 1."""
    return _double_factorial(m - p - 1) if (m - p) % 2 == 0 else 0


def hermite_weight(m: int, x):
    """sum_p binom(m,p) E(m,p) (-1)^{(m-p)/2} x^p, i.e. He_m(x)."""
    if m < 0:
        raise DomainError("m must be >= 0")
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for p in range(m, -1, -2):
        out = out + math.comb(m, p) * pairing_weight(m, p) * (-1.0) ** ((m - p) // 2) * x ** p
    return out[()] if out.ndim == 0 else out


def hermite_recurrence(m: int, x):
    """He_m(x) by He_{k+1} = x He_k - k He_{k-1}."""
    x = np.asarray(x, dtype=float)
    prev, cur = np.ones_like(x), x.copy()
    if m == 0:
        return prev
    for k in range(1, m):
        prev, cur = cur, x * cur - k * prev
    return cur


@lru_cache(maxsize=512)
def _series(observable: Observable, N: int | None, log_n: float | None,
            M: int, mode: Mode) -> tuple[np.ndarray, float]:
    """(A_0..A_M, var); A_1 = A_2 = 0."""
    cum = cumulants(observable, N, max(M, 2), mode, log_n=log_n)
    if M < 3:
        return np.array([1.0]), cum.variance
    return np.array(series_coefficients(cum, M).values), cum.variance


def _lookup(observable, N, M, mode, log_n):
    observable = Observable(observable)
    mode = Mode(mode)
    if M < 0 or M > M_MAX_LIMIT:
        raise DomainError(f"M must lie in 0..{M_MAX_LIMIT}")
    if mode is Mode.EXACT:
        return _series(observable, N, None, M, mode)
    if log_n is None:
        if N is None:
            raise DomainError("asymptotic mode needs N or log_n")
        log_n = math.log(N)
    return _series(observable, None, float(log_n), M, mode)


def _correction(a: np.ndarray, var: float, x: np.ndarray) -> np.ndarray:
    """1 + sum_m A_m var^{-m/2} He_m(x).

    For |x| > 1 the sum is taken over A_m (x/sqrt(var))^m h_m(x) with
    h_m = He_m(x)/x^m from h_{m+1} = h_m - m h_{m-1}/x^2, so that huge x
    (deep regime points) never overflows.
    """
    big = np.abs(x) > 1.0
    out = np.empty_like(x)
    out[~big] = hermite_e.hermeval(x[~big], a * var ** (-0.5 * np.arange(a.size)))
    if np.any(big):
        xb = x[big]
        y = xb / math.sqrt(var)
        inv2 = 1.0 / (xb * xb)
        h_prev, h = np.ones_like(xb), np.ones_like(xb)  # h_0, h_1
        acc = np.ones_like(xb)
        ym = y.copy()
        for m in range(1, a.size - 1):
            h_prev, h = h, h - m * h_prev * inv2
            ym = ym * y
            if a[m + 1] != 0.0:
                acc = acc + a[m + 1] * ym * h
        out[big] = acc
    return out


def density(
    observable: Observable | str,
    N: int | None,
    x,
    M: int = DEFAULT_M,
    mode: Mode | str = Mode.EXACT,
    *,
    log_n: float | None = None,
):
    """Edgeworth density of the standardized observable at x.

    phi(x) (1 + sum_{m=3}^M A_m var^{-m/2} He_m(x)), where A_m are the
    exponential-series coefficients of the cumulant tail.
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("x must be finite")
    a, var = _lookup(observable, N, M, mode, log_n)
    out = _INV_SQRT_2PI * np.exp(-0.5 * x * x) * _correction(a, var, np.atleast_1d(x)).reshape(x.shape)
    return out[()] if out.ndim == 0 else out


def correction_factor(observable, x, M=DEFAULT_M, mode=Mode.ASYMPTOTIC, *, N=None, log_n=None):
    """1 + sum_m A_m var^{-m/2} He_m(x), without the Gaussian."""
    x = np.asarray(x, dtype=float)
    a, var = _lookup(observable, N, M, mode, log_n)
    out = _correction(a, var, np.atleast_1d(x)).reshape(x.shape)
    return out[()] if out.ndim == 0 else out


def density_curve(observable, N: int, x, M: int = DEFAULT_M) -> DensityCurve:
    observable = Observable(observable)
    x = np.asarray(x, dtype=float)
    return DensityCurve(
        observable, N, Method.EDGEWORTH, x, density(observable, N, x, M),
        low_accuracy=N < LOW_ACCURACY_N, meta={"M": M},
    )
