from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import eval_hermitenorm

from cue_deviations import edgeworth
from cue_deviations.cumulants import Mode, Observable, cumulants
from cue_deviations.specfun import DomainError


def _exp_series_bruteforce(tail: dict[int, float], M: int) -> np.ndarray:
    """exp(sum_m b_m u^m) expanded by repeated polynomial products."""
    g = np.zeros(M + 1)
    for m, b in tail.items():
        if m <= M:
            g[m] = b
    out = np.zeros(M + 1)
    out[0] = 1.0
    term = np.zeros(M + 1)
    term[0] = 1.0
    for j in range(1, M + 1):
        term = np.convolve(term, g)[: M + 1] / j
        out += term
    return out


@given(st.dictionaries(st.integers(3, 12), st.floats(-3, 3), min_size=1, max_size=5), st.integers(3, 20))
def test_exp_formal_series_matches_power_expansion(tail, M):
    got = edgeworth.exp_formal_series(tail, M)
    assert np.allclose(got, _exp_series_bruteforce(tail, M), rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("m", range(0, 21))
def test_hermite_weight_is_probabilists_hermite(m):
    x = np.linspace(-5, 5, 41)
    ref = eval_hermitenorm(m, x)
    assert np.allclose(edgeworth.hermite_weight(m, x), ref, rtol=1e-9, atol=1e-9)
    assert np.allclose(edgeworth.hermite_recurrence(m, x), ref, rtol=1e-9, atol=1e-9)


def test_pairing_weight_parity():
    assert edgeworth.pairing_weight(6, 6) == 1
    assert edgeworth.pairing_weight(6, 0) == 15
    assert edgeworth.pairing_weight(5, 0) == 0


def test_m_zero_is_standard_normal():
    x = np.linspace(-3, 3, 7)
    assert np.allclose(edgeworth.density(Observable.RE_LOG_P, 20, x, 0), np.exp(-x * x / 2) / math.sqrt(2 * math.pi))


def test_third_order_term_is_classical_skewness_correction():
    N, x = 30, np.linspace(-3, 3, 13)
    c = cumulants(Observable.RE_LOG_P, N, 3)
    skew = c[3] / c.variance ** 1.5
    ref = np.exp(-x * x / 2) / math.sqrt(2 * math.pi) * (1 + skew / 6 * (x ** 3 - 3 * x))
    assert np.allclose(edgeworth.density(Observable.RE_LOG_P, N, x, 3), ref, rtol=1e-13)


@pytest.mark.parametrize("obs", list(Observable))
def test_normalized(obs):
    x = np.arange(-40.0, 40.005, 0.01)
    for M in (3, 12, 24, 30):
        d = edgeworth.density(obs, 50, x, M)
        # the divergent Re series reach |density| ~ 1e8 at high M; rounding scales with the L1 mass
        mass = max(1.0, float(np.trapezoid(np.abs(d), x)))
        assert np.trapezoid(d, x) == pytest.approx(1.0, abs=1e-8 * mass)


@pytest.mark.parametrize("obs", [Observable.IM_LOG_P, Observable.IM_LOG_P_PRIME])
@given(x=st.floats(0, 10))
def test_im_densities_are_even(obs, x):
    assert edgeworth.density(obs, 50, x) == pytest.approx(edgeworth.density(obs, 50, -x), abs=1e-14)


def test_huge_arguments_do_not_overflow():
    x = np.array([1e3, 1e6, 1e10])
    corr = edgeworth.correction_factor(Observable.IM_LOG_P, x, 24, Mode.ASYMPTOTIC, log_n=1e6)
    assert np.all(np.isfinite(corr))
    assert np.all(edgeworth.density(Observable.IM_LOG_P, 50, x) == 0.0)


def test_scaled_hermite_branch_agrees_with_direct_sum():
    x = np.linspace(1.01, 6, 30)
    a = edgeworth.correction_factor(Observable.RE_LOG_P_PRIME, x, 12, Mode.EXACT, N=40)
    ref = edgeworth.density(Observable.RE_LOG_P_PRIME, 40, x, 12) * math.sqrt(2 * math.pi) * np.exp(x * x / 2)
    assert np.allclose(a, ref, rtol=1e-12)


def test_density_curve_flags_small_n():
    assert edgeworth.density_curve(Observable.RE_LOG_P, 4, [0.0, 1.0]).low_accuracy
    assert not edgeworth.density_curve(Observable.RE_LOG_P, 50, [0.0, 1.0]).low_accuracy


def test_domain():
    with pytest.raises(DomainError):
        edgeworth.density(Observable.RE_LOG_P, 20, 0.0, M=41)
    with pytest.raises(DomainError):
        edgeworth.density(Observable.RE_LOG_P, 20, float("nan"))
