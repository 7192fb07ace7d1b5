"""Independent high-precision references used by the verification suite.

These evaluate the raw Gamma-function products with mpmath, bypassing every
rewrite used in the double-precision code paths.
"""
from __future__ import annotations

import math
from functools import lru_cache

import mpmath as mp

from .cumulants import Observable

_DPS = 40


def log_mgf_mp(observable: Observable | str, N: int, s) -> mp.mpf:
    """log E[exp(s X)] from the Gamma products, at 40 digits, for real s."""
    observable = Observable(observable)
    with mp.workdps(_DPS):
        s = mp.mpf(s)
        lg = mp.loggamma
        if observable is Observable.RE_LOG_P:
            return mp.fsum(lg(j) + lg(j + s) - 2 * lg(j + s / 2) for j in range(1, N + 1))
        if observable is Observable.RE_LOG_P_PRIME:
            return mp.fsum(lg(l) + lg(l + 2 + s) - 2 * lg(l + 1 + s / 2) for l in range(1, N)) - mp.log(N)
        y = mp.mpc(0, s / 2)
        if observable is Observable.IM_LOG_P:
            return mp.fsum(2 * lg(j) - 2 * mp.re(lg(j + y)) for j in range(1, N + 1))
        return -mp.pi * s / 2 + mp.fsum(
            lg(l) + lg(l + 2) - 2 * mp.re(lg(l + 1 + y)) for l in range(1, N)
        ) - mp.log(N)


def richardson_derivative(f, m: int, h: float, levels: int = 4) -> float:
    """m-th derivative at 0 by central differences at h, h/2, ... with Richardson.

    ``f`` is called on mpmath numbers; the central stencil has error
    c_1 h^2 + c_2 h^4 + ..., which each Richardson level removes in turn.
    """
    with mp.workdps(_DPS):
        cache: dict = {}

        def ev(x):
            key = mp.nstr(x, 30)
            if key not in cache:
                cache[key] = f(x)
            return cache[key]

        def central(step):
            step = mp.mpf(step)
            total = mp.mpf(0)
            for i in range(m + 1):
                total += (-1) ** (m - i) * math.comb(m, i) * ev((i - mp.mpf(m) / 2) * step)
            return total / step ** m

        table = [[central(mp.mpf(h) / 2 ** i)] for i in range(levels)]
        for j in range(1, levels):
            for i in range(j, levels):
                prev = table[i][j - 1]
                table[i].append(prev + (prev - table[i - 1][j - 1]) / (4 ** j - 1))
        return float(table[-1][-1])


@lru_cache(maxsize=64)
def cumulants_by_differences(observable: Observable | str, N: int, m_max: int = 6,
                             h: float = 0.05) -> tuple[float, ...]:
    """Cumulants 1..m_max as derivatives of the high-precision log-MGF at 0."""
    observable = Observable(observable)
    memo: dict = {}

    def f(x):
        key = mp.nstr(x, 30)
        if key not in memo:
            memo[key] = log_mgf_mp(observable, N, x)
        return memo[key]

    return tuple(richardson_derivative(f, m, h) for m in range(1, m_max + 1))
