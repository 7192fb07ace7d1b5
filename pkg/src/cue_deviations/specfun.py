"""Special functions in double precision: log-Gamma, polygamma, zeta at
integers and the log of the Barnes G-function.

Everything here is vectorised over numpy arrays where that is cheap, and
pure: identical inputs give bit-identical outputs.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

EULER_GAMMA = 0.57721566490153286061
LOG_2PI = math.log(2.0 * math.pi)
# zeta'(-1) = 1/12 - log(Glaisher's constant); only the Barnes-G asymptotic uses it
ZETA_PRIME_MINUS_1 = -0.16542114370045092921

_STIRLING_MIN = 15.0
_POLYGAMMA_SHIFT = 16.0
_BARNES_DISK = 0.5
_BARNES_LARGE = 20.0


class DomainError(ValueError):
    """Argument outside the domain where a function is defined or supported."""


@lru_cache(maxsize=None)
def bernoulli_numbers(count: int = 64) -> tuple[Fraction, ...]:
    """Exact B_0 .. B_{count-1} (convention B_1 = -1/2)."""
    b = [Fraction(0)] * count
    b[0] = Fraction(1)
    for m in range(1, count):
        b[m] = -sum(math.comb(m + 1, k) * b[k] for k in range(m)) / (m + 1)
    return tuple(b)


def _b2k(k: int) -> float:
    return float(bernoulli_numbers()[2 * k])


# ---------------------------------------------------------------------------
# zeta at integers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def zeta_int(n: int) -> float:
    """Riemann zeta at an integer n >= 2 (direct sum + Euler-Maclaurin tail)."""
    if int(n) != n or n < 2:
        raise DomainError(f"zeta_int needs an integer n >= 2, got {n!r}")
    n = int(n)
    if n == 2:
        return math.pi ** 2 / 6.0
    if n == 4:
        return math.pi ** 4 / 90.0
    cut = 10
    return math.fsum([k ** -float(n) for k in range(1, cut)] + [_em_tail(n, cut)])


def _em_tail(n: int, cut: int) -> float:
    """sum_{k >= cut} k^{-n} by Euler-Maclaurin, for n >= 2 and cut >= 10."""
    terms = [cut ** (1.0 - n) / (n - 1), 0.5 * cut ** -float(n)]
    rising = float(n)
    fact = 2.0
    for j in range(1, 12):
        terms.append(_b2k(j) / fact * rising * cut ** (-float(n) - 2 * j + 1))
        rising *= (n + 2 * j - 1) * (n + 2 * j)
        fact *= (2 * j + 1) * (2 * j + 2)
    return math.fsum(terms)


def power_tail_sum(n: int, a: int, weight_shift: float = 0.0) -> float:
    """sum_{k >= a} (k - c) / k^{n+1} with c = weight_shift.

    Needs n >= 2 and integer a >= 1.  With c = a - 1 every term is >= 0, so the sum is free of
    cancellation even when n is large.
    """
    if n < 2 or a < 1:
        raise DomainError("power_tail_sum needs n >= 2 and a >= 1")
    cut = max(a + 10, 10)
    k = np.arange(cut - 1, a - 1, -1, dtype=float)
    with np.errstate(under="ignore"):
        head = math.fsum((k - weight_shift) * k ** -float(n + 1))
        tail = _em_tail(n, cut) - weight_shift * _em_tail(n + 1, cut)
    return head + tail


# ---------------------------------------------------------------------------
# log-Gamma
# ---------------------------------------------------------------------------

def _stirling(w):
    """log Gamma(w) for |w| >= 15, |arg w| < pi."""
    out = (w - 0.5) * np.log(w) - w + 0.5 * LOG_2PI
    inv = 1.0 / w
    inv2 = inv * inv
    p = inv
    for k in range(1, 12):
        out = out + _b2k(k) / (2 * k * (2 * k - 1)) * p
        p = p * inv2
    return out


def _log_gamma_any(z):
    """Continuous-branch log Gamma for complex z off the poles.

    Shifts z right until |z| >= 15 and applies Stirling.  For Re z > 0 this is
    the principal branch (the one real on the positive axis)."""
    z = np.asarray(z, dtype=complex)
    need = np.sqrt(np.maximum(0.0, _STIRLING_MIN ** 2 - z.imag ** 2)) - z.real
    shift = np.maximum(0, np.ceil(need)).astype(int)
    acc = np.zeros_like(z)
    for k in range(int(shift.max(initial=0))):
        active = shift > k
        acc = acc + np.where(active, np.log(np.where(active, z + k, 1.0)), 0.0)
    return _stirling(z + shift) - acc


def log_gamma(z):
    """Principal log Gamma(z) for Re z > 0.

    Real input gives real output; complex input gives complex output.
    """
    arr = np.asarray(z)
    if np.any(np.real(arr) <= 0) or not np.all(np.isfinite(arr)):
        raise DomainError("log_gamma needs finite z with Re(z) > 0")
    out = _log_gamma_any(arr)
    if not np.iscomplexobj(arr):
        out = out.real
    return out[()] if out.ndim == 0 else out


def log_gamma_1p(z):
    """log Gamma(1 + z), accurate in the relative sense for small |z|."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 0.5
    out = np.empty_like(z)
    if np.any(small):
        w = z[small]
        acc = -EULER_GAMMA * w
        p = -w
        for k in range(2, 60):
            p = -p * w
            acc = acc + zeta_int(k) * p / k
        out[small] = acc
    if np.any(~small):
        out[~small] = _log_gamma_any(1.0 + z[~small])
    return out[()] if out.ndim == 0 else out


def log_rgamma_real(x):
    """(log|1/Gamma(x)|, sign(1/Gamma(x))) for any real x.

    Poles of Gamma give log = -inf and sign 0, so exp(log)*sign is exactly 0.
    """
    x = np.asarray(x, dtype=float)
    logv = np.empty_like(x)
    sign = np.ones_like(x)
    pos = x > 0
    logv[pos] = -_log_gamma_any(x[pos]).real
    neg = ~pos
    if np.any(neg):
        xn = x[neg]
        k = np.round(xn)
        r = xn - k
        # 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi
        s = np.sin(np.pi * r) * np.where(k % 2 == 0, 1.0, -1.0)
        with np.errstate(divide="ignore"):
            logv[neg] = np.log(np.abs(s)) + _log_gamma_any(1.0 - xn).real - math.log(math.pi)
        sign[neg] = np.sign(s)
    return logv, sign


# ---------------------------------------------------------------------------
# polygamma
# ---------------------------------------------------------------------------

def _polygamma_asymptotic(n: int, w):
    if n == 0:
        out = np.log(w) - 0.5 / w
        inv2 = 1.0 / (w * w)
        p = inv2.copy()
        for k in range(1, 20):
            out = out - _b2k(k) / (2 * k) * p
            p = p * inv2
        return out
    inv = 1.0 / w
    inv2 = inv * inv
    bracket = 1.0 + n * 0.5 * inv
    rising = float(n) * (n + 1)  # (n)_{2k}
    fact = 2.0  # (2k)!
    p = inv2.copy()
    for k in range(1, 24):
        bracket = bracket + _b2k(k) / fact * rising * p
        rising *= (n + 2 * k) * (n + 2 * k + 1)
        fact *= (2 * k + 1) * (2 * k + 2)
        p = p * inv2
    lead = math.exp(math.lgamma(n)) * inv ** n
    return (-1.0) ** (n + 1) * lead * bracket


def polygamma(n: int, x):
    """Psi^{(n)}(x) = d^{n+1}/dx^{n+1} log Gamma(x) for real x > 0.

    Forward recurrence up to max(16, n), then the Bernoulli asymptotic series.
    """
    if int(n) != n or n < 0:
        raise DomainError(f"polygamma order must be a non-negative integer, got {n!r}")
    n = int(n)
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("polygamma needs x > 0")
    thresh = max(_POLYGAMMA_SHIFT, float(n))
    flat = x.ravel()
    out = np.empty_like(flat)
    low = flat < thresh
    hi_idx = ~low
    if np.any(hi_idx):
        out[hi_idx] = _polygamma_asymptotic(n, flat[hi_idx])
    if np.any(low):
        xl = flat[low]
        shift = np.ceil(thresh - xl).astype(int)
        sign_fact = (-1.0) ** (n + 1) * math.factorial(n)
        acc = np.zeros_like(xl)
        for k in range(int(shift.max())):
            active = shift > k
            acc = acc + np.where(active, sign_fact / (xl + k) ** (n + 1), 0.0)
        out[low] = _polygamma_asymptotic(n, xl + shift) + acc
    out = out.reshape(x.shape)
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Barnes G
# ---------------------------------------------------------------------------

def _log_g_taylor(w: complex) -> complex:
    """log G(1 + w) for |w| <= 1/2."""
    acc = w * (LOG_2PI - 1.0) / 2.0 - (1.0 + EULER_GAMMA) * w * w / 2.0
    p = w * w
    terms = [acc]
    for k in range(3, 64):
        p = p * w
        terms.append((-1) ** (k - 1) * zeta_int(k - 1) * p / k)
    return complex(math.fsum(t.real for t in map(complex, terms)),
                   math.fsum(t.imag for t in map(complex, terms)))


def _log_g_asymptotic(w: complex) -> complex:
    """log G(1 + w) for |w| >= 20 away from the negative axis."""
    lw = np.log(w)
    acc = w * w / 2.0 * lw - 0.75 * w * w + w / 2.0 * LOG_2PI - lw / 12.0 + ZETA_PRIME_MINUS_1
    inv2 = 1.0 / (w * w)
    p = inv2
    for k in range(1, 14):
        acc = acc + _b2k(k + 1) / (4 * k * (k + 1)) * p
        p = p * inv2
    return complex(acc)


def _log_barnes_g_scalar(z: complex) -> complex:
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise DomainError(f"Barnes G vanishes at non-positive integer {z.real:g}")
    w = z - 1.0
    if abs(w) <= _BARNES_DISK:
        return _log_g_taylor(w)
    if abs(w) >= _BARNES_LARGE and (w.real > 0 or abs(w.imag) > abs(w.real)):
        return _log_g_asymptotic(w)
    if abs(z.imag) <= _BARNES_DISK and z.real > 1.0:
        # step down: log G(z) = log G(z - 1) + log Gamma(z - 1)
        k = int(math.floor(z.real - 1.0 + 0.5))
        base = z - k
        args = base + np.arange(k)
        return _log_g_taylor(base - 1.0) + complex(np.sum(_log_gamma_any(args)))
    # step up until |z + K - 1| >= 20
    k = 0
    while abs(z + k - 1.0) < _BARNES_LARGE or (z + k - 1.0).real <= 0:
        k += 1
    args = z + np.arange(k)
    return _log_g_asymptotic(z + k - 1.0) - complex(np.sum(_log_gamma_any(args)))


def log_barnes_g(z):
    """log G(z) of the Barnes G-function, continuous along the path from the real axis.

    Supported on Re z >= 0 (minus the zeros of G) plus the lines 1 +/- i*kappa;
    real input gives real output.
    """
    arr = np.asarray(z)
    cplx = np.iscomplexobj(arr)
    flat = np.asarray(arr, dtype=complex).ravel()
    out = np.array([_log_barnes_g_scalar(complex(v)) for v in flat]).reshape(arr.shape)
    if not cplx:
        out = out.real
    return out[()] if out.ndim == 0 else out


def log_barnes_g_derivative(m: int, z):
    """d^m/dz^m log G(z) for real z > 0 in closed form.

    m = 1: (log 2pi + 1)/2 - z + (z - 1) Psi(z)
    m = 2: Psi(z) + (z - 1) Psi'(z) - 1
    m >= 3: (m - 1) Psi^{(m-2)}(z) + (z - 1) Psi^{(m-1)}(z)
    """
    z = np.asarray(z, dtype=float)
    if m < 1:
        raise DomainError("derivative order must be >= 1")
    if m == 1:
        return 0.5 * LOG_2PI + 0.5 - z + (z - 1.0) * polygamma(0, z)
    out = (m - 1) * polygamma(m - 2, z) + (z - 1.0) * polygamma(m - 1, z)
    return out - 1.0 if m == 2 else out
