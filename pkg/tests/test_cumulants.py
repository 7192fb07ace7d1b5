from __future__ import annotations

import math

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cue_deviations.cumulants import (
    M_MAX_LIMIT,
    Mode,
    Observable,
    cumulants,
    cumulants_im_logP,
    cumulants_im_logPprime,
    cumulants_re_logP,
    cumulants_re_logPprime,
    polygamma_range_sum,
    q_limit,
    s_exact_barnes,
)
from cue_deviations.specfun import DomainError


def _mp_psi_sum(n, a, b):
    with mp.workdps(40):
        return mp.fsum(mp.polygamma(n, j) for j in range(a, b + 1))


def _mp_reference(obs: Observable, N: int, m: int) -> float:
    """Cumulants written directly as 40-digit polygamma sums."""
    with mp.workdps(40):
        if obs is Observable.RE_LOG_P:
            return 0.0 if m == 1 else float((1 - mp.mpf(2) ** (1 - m)) * _mp_psi_sum(m - 1, 1, N))
        if obs is Observable.IM_LOG_P:
            return 0.0 if m % 2 else float((-1) ** (m // 2 + 1) / mp.mpf(2) ** (m - 1) * _mp_psi_sum(m - 1, 1, N))
        if obs is Observable.RE_LOG_P_PRIME:
            return float(mp.fsum(mp.polygamma(m - 1, l + 2) - mp.mpf(2) ** (1 - m) * mp.polygamma(m - 1, l + 1)
                                 for l in range(1, N)))
        if m == 1:
            return -math.pi / 2
        return 0.0 if m % 2 else float(-((-1) ** (m // 2)) / mp.mpf(2) ** (m - 1) * _mp_psi_sum(m - 1, 2, N))


@given(st.sampled_from(list(Observable)), st.integers(2, 300), st.integers(1, 40))
def test_exact_matches_high_precision_polygamma_sums(obs, N, m):
    got = cumulants(obs, N, m)[m]
    ref = _mp_reference(obs, N, m)
    assert got == pytest.approx(ref, rel=1e-11, abs=1e-300)


@given(st.integers(2, 5000), st.integers(1, 8))
def test_r_even_cumulants_follow_q(N, j):
    q, r = cumulants_re_logP(N, 16), cumulants_im_logP(N, 16)
    assert r[2 * j] == pytest.approx((-1) ** (j + 1) * q[2 * j] / (2 ** (2 * j - 1) - 1), rel=1e-13)


@pytest.mark.parametrize("obs", [Observable.IM_LOG_P, Observable.IM_LOG_P_PRIME])
def test_odd_im_cumulants_vanish_beyond_the_mean(obs):
    c = cumulants(obs, 40, 11)
    assert all(c[m] == 0.0 for m in range(3, 12, 2))


def test_means():
    assert cumulants_re_logP(30).mean == 0.0
    assert cumulants_im_logP(30).mean == 0.0
    assert cumulants_im_logPprime(30).mean == -math.pi / 2
    assert cumulants_re_logPprime(30).mean == pytest.approx(sum(1 / k for k in range(2, 31)))


@pytest.mark.parametrize("N", [2, 10, 1000])
@pytest.mark.parametrize("m", [2, 3, 4, 7])
def test_s_matches_barnes_route(N, m):
    assert cumulants_re_logPprime(N, m)[m] == pytest.approx(s_exact_barnes(N, m), rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("obs", list(Observable))
@pytest.mark.parametrize("m", [1, 2, 3, 4, 6])
def test_exact_tends_to_asymptotic(obs, m):
    N = 10 ** 6
    ex = cumulants(obs, N, 6)[m]
    asym = cumulants(obs, N, 6, Mode.ASYMPTOTIC)[m]
    assert abs(ex - asym) < 1e-5


@pytest.mark.parametrize("m", [3, 4, 10, 25])
def test_q_limit_is_zeta_closed_form(m):
    with mp.workdps(30):
        ref = (-1) ** m * (1 - mp.mpf(2) ** (1 - m)) * mp.factorial(m - 1) * mp.zeta(m - 1)
    assert q_limit(m) == pytest.approx(float(ref), rel=1e-14)


def test_asymptotic_accepts_huge_log_n():
    c = cumulants(Observable.RE_LOG_P, m_max=4, mode=Mode.ASYMPTOTIC, log_n=1e300)
    assert c.variance == pytest.approx(0.5e300) and c.N is None


def test_sequence_indexing_is_one_based():
    c = cumulants_re_logP(10, 3)
    assert len(c) == c.m_max == 3 and c[2] == c.values[1]
    with pytest.raises(IndexError):
        c[0]


@given(st.integers(1, 12), st.integers(1, 30), st.integers(0, 40))
def test_polygamma_range_sum(n, a, width):
    b = a + width
    assert polygamma_range_sum(n, a, b) == pytest.approx(float(_mp_psi_sum(n, a, b)), rel=1e-12)


@pytest.mark.parametrize("kwargs", [
    dict(N=1), dict(N=10 ** 6 + 1), dict(N=10, m_max=0), dict(N=10, m_max=M_MAX_LIMIT + 1), dict(N=2.5),
])
def test_domain_errors(kwargs):
    with pytest.raises(DomainError):
        cumulants(Observable.RE_LOG_P, **kwargs)


def test_string_observable_and_mode():
    assert cumulants("im-log-p", 20, 4, "asymptotic") == cumulants(Observable.IM_LOG_P, 20, 4, Mode.ASYMPTOTIC)
