"""Finite-N and asymptotic statistics of log-characteristic polynomials of
Haar-random unitary matrices."""
from __future__ import annotations

from .cumulants import CumulantSequence, Mode, Observable, cumulants
from .edgeworth import density, exp_formal_series, hermite_weight
from .mgf import DensityCurve, char_function, invert_density, log_mgf
from .regimes import (
    RegimeSpec,
    Smoothing,
    Theorem,
    coefficient_limit_check,
    evaluation_point,
    moment_coefficient,
    smoothing_trace,
    theorem_density,
)
from .sampler import log_P, log_P_prime, monte_carlo, sample_spectrum
from .specfun import DomainError, log_barnes_g, log_gamma, polygamma, zeta_int

__version__ = "0.1.0"
