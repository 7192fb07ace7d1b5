from __future__ import annotations

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cue_deviations.cumulants import Observable, cumulants
from cue_deviations.mgf import (
    DensityCurve,
    InversionConfig,
    Method,
    char_function,
    invert_density,
    log_mgf,
    mgf,
)
from cue_deviations.oracles import log_mgf_mp
from cue_deviations.specfun import DomainError


@given(st.sampled_from(list(Observable)), st.integers(2, 120), st.floats(-0.9, 3.0))
def test_log_mgf_matches_gamma_products(obs, N, s):
    if obs is Observable.RE_LOG_P_PRIME and s <= -1.8:
        return
    ref = float(log_mgf_mp(obs, N, s))
    assert float(log_mgf(obs, N, s)) == pytest.approx(ref, rel=1e-11, abs=1e-12)


@pytest.mark.parametrize("N", [2, 20, 200])
def test_second_moment_identity(N):
    assert mgf(Observable.RE_LOG_P, N, 2.0) == pytest.approx(N + 1, rel=1e-10)


@pytest.mark.parametrize("obs", list(Observable))
def test_char_function_unit_and_bounded(obs):
    t = np.linspace(-50, 50, 1001)
    phi = char_function(obs, 25, t)
    assert char_function(obs, 25, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert np.max(np.abs(phi)) <= 1 + 1e-12


@pytest.mark.parametrize("obs", list(Observable))
@given(t=st.floats(-5, 5))
def test_char_function_is_hermitian(obs, t):
    assert char_function(obs, 15, -t) == pytest.approx(np.conj(char_function(obs, 15, t)), abs=1e-14)


def test_char_function_second_order_taylor():
    t = 1e-3
    for obs in Observable:
        c = cumulants(obs, 30, 2)
        ref = np.exp(1j * t * c.mean - t * t * c.variance / 2)
        assert abs(char_function(obs, 30, t) - ref) < 1e-8


def test_im_log_p_char_function_has_exact_zeros():
    # phi(t) = prod Gamma(j)^2 / (Gamma(j + t/2) Gamma(j - t/2)) vanishes at t = 2N
    assert char_function(Observable.IM_LOG_P, 5, 10.0) == 0.0


def test_im_log_p_char_function_matches_mpmath():
    t, N = 3.3, 12
    with mp.workdps(30):
        ref = mp.fprod(mp.gamma(j) ** 2 / (mp.gamma(j + t / 2) * mp.gamma(j - t / 2)) for j in range(1, N + 1))
    assert char_function(Observable.IM_LOG_P, N, t) == pytest.approx(float(ref), rel=1e-12)


@pytest.mark.parametrize("obs", list(Observable))
def test_inversion_normalized_and_converged(obs):
    x = np.linspace(-30, 30, 3001)
    cur = invert_density(obs, 50, x)
    assert cur.method is Method.INVERSION and not cur.low_accuracy
    assert cur.integral() == pytest.approx(1.0, abs=1e-8)
    assert np.all(cur.density > -1e-12)
    finer = invert_density(obs, 50, x[::10], InversionConfig(period=192.0)).density
    assert np.allclose(cur.density[::10], finer, atol=1e-10)


def test_inversion_refuses_aliasing_grid():
    with pytest.raises(DomainError):
        invert_density(Observable.RE_LOG_P, 20, [0.0, 40.0])


def test_char_function_refuses_large_n():
    with pytest.raises(DomainError):
        char_function(Observable.RE_LOG_P, 501, 1.0)


def test_density_curve_validation():
    with pytest.raises(ValueError):
        DensityCurve(Observable.RE_LOG_P, 10, Method.EDGEWORTH, [0.0, 0.0], [1.0, 1.0])
    cur = DensityCurve(Observable.RE_LOG_P, 10, Method.EDGEWORTH, [0.0, 1.0], [1.0, 1.0])
    assert cur.grid == [(0.0, 1.0), (1.0, 1.0)] and cur.integral() == 1.0
