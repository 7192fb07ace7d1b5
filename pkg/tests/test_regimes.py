from __future__ import annotations

import math

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cue_deviations import regimes
from cue_deviations.cumulants import Mode, Observable, cumulants
from cue_deviations.regimes import RegimeSpec, Smoothing, Theorem
from cue_deviations.specfun import DomainError


def _mp_coefficient(family: str, k: float) -> float:
    with mp.workdps(30):
        G = mp.barnesg
        if family == "c":
            return float(G(1 + k) ** 2 / G(1 + 2 * k))
        if family == "d":
            return float(abs(G(mp.mpc(1, k))) ** 2)
        if family == "f":
            return float(G(k + 2) ** 2 / G(2 * k + 3) * mp.exp(2 * k * (1 - mp.euler)))
        return float(abs(G(mp.mpc(2, k))) ** 2)


@pytest.mark.parametrize("family", list("cdfg"))
@given(k=st.floats(0.0, 4.0))
def test_moment_coefficients_match_mpmath(family, k):
    assert regimes.moment_coefficient(family, k) == pytest.approx(_mp_coefficient(family, k), rel=1e-10)


def test_spot_values():
    assert regimes.moment_coefficient("c", 1.0) == pytest.approx(1.0, abs=1e-14)
    assert regimes.moment_coefficient("c", 2.0) == pytest.approx(1 / 12, rel=1e-13)
    assert regimes.moment_coefficient("f", 0.0) == pytest.approx(1.0, abs=1e-15)
    assert all(regimes.moment_coefficient(f, 0.0) == pytest.approx(1.0) for f in "cdfg")


@pytest.mark.parametrize("family", list("cdfg"))
@pytest.mark.parametrize("kappa", [0.5, 1.0, 2.0])
def test_pre_limits_converge(family, kappa):
    chk = regimes.coefficient_limit_check(family, kappa, 10 ** 6)
    assert abs(chk.value - regimes.moment_coefficient(family, kappa)) <= 1e-3


def test_series_and_mgf_routes_agree_where_series_converges():
    a = regimes.coefficient_limit_check("d", 0.5, 1000, route="series")
    b = regimes.coefficient_limit_check("d", 0.5, 1000, route="mgf")
    assert not a.diverged and a.value == pytest.approx(b.value, rel=1e-9)


def test_divergent_series_is_flagged():
    chk = regimes.coefficient_limit_check("c", 2.0, 1000, route="series")
    assert chk.diverged


def test_second_moment_of_p_is_exact_through_c1():
    # E|P_N|^2 = N + 1 so the kappa = 1 pre-limit is (N + 1)/N
    chk = regimes.coefficient_limit_check("c", 1.0, 1000, route="mgf")
    assert chk.value == pytest.approx(1001 / 1000, rel=1e-10)


@given(st.floats(0.1, 3.0), st.floats(0.0, 3.0), st.floats(20.0, 1e12))
def test_evaluation_point_definition(kappa, alpha, log_n):
    spec = RegimeSpec(kappa, alpha, log_n)
    var = cumulants(Observable.RE_LOG_P, m_max=2, mode=Mode.ASYMPTOTIC, log_n=log_n).variance
    x = regimes.evaluation_point(spec, Observable.RE_LOG_P)
    assert x == pytest.approx(kappa * math.sqrt(log_n ** (1 + spec.epsilon) / var), rel=1e-12)


def test_epsilon_of_alpha():
    spec = RegimeSpec(1.0, 2.0, 1e8)
    assert spec.epsilon == pytest.approx(1 - math.log(1e8) ** -2.0)
    assert RegimeSpec(1.0, 0.0, 1e8).epsilon == 0.0


@pytest.mark.parametrize("theorem", list(Theorem))
def test_branch_selector(theorem):
    fam = regimes.THEOREM_FAMILY[theorem]
    assert regimes.selected_coefficient(theorem, RegimeSpec(1.0, 0.5, 1e6)) == (1.0, "alpha<1")
    val, label = regimes.selected_coefficient(theorem, RegimeSpec(1.0, 1.0, 1e6))
    assert label == "alpha=1" and val == pytest.approx(regimes.moment_coefficient(fam, math.exp(-0.5)))
    val, label = regimes.selected_coefficient(theorem, RegimeSpec(1.0, 3.0, 1e6))
    assert label == "alpha>1" and val == pytest.approx(regimes.moment_coefficient(fam, 1.0))


@pytest.mark.parametrize("sign", list(Smoothing))
def test_smoothing_reaches_inverse_e(sign):
    assert regimes.smoothing_value(sign, 1e6) == pytest.approx(math.exp(-1), abs=1e-5)
    trace = regimes.smoothing_trace(sign, [10.0 ** k for k in range(2, 9)])
    dist = [abs(v - math.exp(-1)) for _, v in trace]
    assert all(b < a for a, b in zip(dist, dist[1:]))


def test_smoothing_sides():
    assert regimes.smoothing_value(Smoothing.ABOVE, 1e4) > math.exp(-1) > regimes.smoothing_value(Smoothing.BELOW, 1e4)


def test_ratio_diagnostic_at_tiny_offsets_is_finite():
    d = regimes.ratio_diagnostic(Theorem.T2, RegimeSpec(1.0, 2.0, 1e300))
    assert math.isfinite(d.ratio) and d.ratio > 0


@pytest.mark.parametrize("theorem", [Theorem.T2, Theorem.T5])
@pytest.mark.parametrize("alpha", [0.0, 0.5, 2.0])
def test_im_theorem_ratio_trends_converge(theorem, alpha):
    tr = regimes.ratio_trend(theorem, 1.0, alpha, [2.0 ** k for k in range(10, 41)])
    assert regimes.is_monotone_trend([abs(r.ratio - r.coefficient) for r in tr])


def test_is_monotone_trend_allows_isolated_bumps():
    assert regimes.is_monotone_trend([5, 4, 4.5, 3, 2])
    assert not regimes.is_monotone_trend([5, 4, 4.5, 4.7, 2])
    assert not regimes.is_monotone_trend([1, 2])


def test_theorem_density_underflows_cleanly():
    assert regimes.theorem_density(Theorem.T1, RegimeSpec(1.0, 2.0, 2.0 ** 30)) == 0.0


@pytest.mark.parametrize("kwargs", [dict(kappa=0.0, alpha=1.0, log_n=10.0), dict(kappa=1.0, alpha=-1.0, log_n=10.0),
                                    dict(kappa=1.0, alpha=1.0, log_n=0.5),
                                    dict(kappa=1.0, alpha=Smoothing.ABOVE, log_n=2.0)])
def test_spec_domain(kwargs):
    with pytest.raises(DomainError):
        RegimeSpec(**kwargs)


def test_unknown_family():
    with pytest.raises(DomainError):
        regimes.moment_coefficient("z", 1.0)
