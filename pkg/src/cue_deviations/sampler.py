"""Haar-random unitary spectra and the empirical log-characteristic-polynomial
observables.

Every draw owns a random stream derived from (seed, stream_index), so results
do not depend on how draws are split across worker threads.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .cumulants import Mode, Observable, cumulants
from .specfun import DomainError

N_LIMIT = 2000
UNIT_DRIFT = 1e-10
DEGENERACY = 1e-12
WORKERS_ENV = "CUE_DEVIATIONS_WORKERS"


class DegenerateSpectrum(ValueError):
    """A factor 1 - e^{i phi} is numerically zero; the caller should redraw."""


@dataclass(frozen=True)
class SpectrumSample:
    N: int
    eigenangles: np.ndarray  # sorted, in (-pi, pi]
    seed: int
    stream_index: int
    attempt: int = 0


@dataclass(frozen=True)
class ObservableValue:
    re: float
    im: float
    observable: str  # "log-p" or "log-p-prime"
    N: int
    theta: float | None = None


def _rng(seed: int, stream_index: int, attempt: int) -> np.random.Generator:
    key = (stream_index,) if attempt == 0 else (stream_index, attempt)
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def haar_unitary(N: int, rng: np.random.Generator) -> np.ndarray:
    """QR of a complex Ginibre matrix with the phases of diag(R) divided out."""
    z = (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _draw(N: int, seed: int, stream_index: int, first_attempt: int = 0, max_attempts: int = 8):
    if not 1 <= N <= N_LIMIT:
        raise DomainError(f"N must lie in 1..{N_LIMIT}")
    for attempt in range(first_attempt, first_attempt + max_attempts):
        rng = _rng(seed, stream_index, attempt)
        lam = np.linalg.eigvals(haar_unitary(N, rng))
        if np.max(np.abs(np.abs(lam) - 1.0)) > UNIT_DRIFT:
            continue
        angles = np.sort(np.angle(lam / np.abs(lam)))
        angles[angles == -math.pi] = math.pi
        return SpectrumSample(N, np.sort(angles), seed, stream_index, attempt), rng
    raise RuntimeError("eigenvalues repeatedly left the unit circle")


def sample_spectrum(N: int, seed: int, stream_index: int = 0) -> SpectrumSample:
    return _draw(N, seed, stream_index)[0]


def _factor_logs(phi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(log|1 - e^{i phi}|, principal arg(1 - e^{i phi})) per factor."""
    w = 1.0 - np.exp(1j * phi)
    mod = np.abs(w)
    if np.any(mod <= DEGENERACY):
        raise DegenerateSpectrum("point within 1e-12 of an eigenvalue")
    return np.log(mod), np.angle(w)


def log_P(sample: SpectrumSample, theta: float = 0.0) -> ObservableValue:
    """log det(I - A e^{i theta}) summed factor by factor on the principal branch."""
    re, im = _factor_logs(theta - sample.eigenangles)
    return ObservableValue(math.fsum(re), math.fsum(im), "log-p", sample.N, float(theta))


def log_P_prime(sample: SpectrumSample, eigen_index: int = 0) -> ObservableValue:
    """log of P_N' at the eigenangle theta_k: the product over j != k plus -pi/2."""
    if sample.N < 2:
        raise DomainError("log P' needs N >= 2")
    ang = sample.eigenangles
    others = np.delete(ang, eigen_index)
    re, im = _factor_logs(ang[eigen_index] - others)
    return ObservableValue(math.fsum(re), -math.pi / 2.0 + math.fsum(im), "log-p-prime", sample.N)


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

@dataclass
class MonteCarloSummary:
    observable: Observable
    N: int
    draws: int
    seed: int
    theta: float
    raw: np.ndarray  # unstandardized values, in draw order
    partner: np.ndarray  # the other part (im for re observables and vice versa)
    standardized: np.ndarray
    mean: float
    variance: float
    skewness: float
    ks: float
    redraws: int
    hist_edges: np.ndarray = field(repr=False, default=None)
    hist_counts: np.ndarray = field(repr=False, default=None)

    @property
    def mean_se(self) -> float:
        return math.sqrt(self.variance / self.draws)

    @property
    def skewness_se(self) -> float:
        n = self.draws
        return math.sqrt(6.0 * n * (n - 1) / ((n - 2) * (n + 1) * (n + 3)))

    def histogram_density(self) -> np.ndarray:
        width = np.diff(self.hist_edges)
        return self.hist_counts / (self.hist_counts.sum() * width)


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return max(1, min(8, os.cpu_count() or 1))


def _one(observable: Observable, N: int, theta: float, seed: int, index: int) -> tuple[float, float, int]:
    attempt = 0
    while True:
        try:
            sample, rng = _draw(N, seed, index, first_attempt=100 * attempt)
            if observable.is_derivative:
                # a uniformly chosen eigenangle; LAPACK's ordering is not exchangeable
                v = log_P_prime(sample, int(rng.integers(N)))
            else:
                v = log_P(sample, theta)
            return v.re, v.im, attempt
        except DegenerateSpectrum:
            attempt += 1


def simulate(observable: Observable | str, N: int, draws: int, seed: int = 0, theta: float = 0.0,
             workers: int | None = None) -> tuple[np.ndarray, np.ndarray, int]:
    """(re, im, redraws) for draws independent spectra, in draw order."""
    observable = Observable(observable)
    workers = workers or default_workers()
    re = np.empty(draws)
    im = np.empty(draws)

    def run(chunk: range) -> int:
        extra = 0
        for i in chunk:
            re[i], im[i], a = _one(observable, N, theta, seed, i)
            extra += a
        return extra

    step = max(1, -(-draws // workers))
    chunks = [range(s, min(s + step, draws)) for s in range(0, draws, step)]
    if workers == 1 or len(chunks) == 1:
        redraws = sum(run(c) for c in chunks)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            redraws = sum(pool.map(run, chunks))
    return re, im, redraws


def monte_carlo(observable: Observable | str, N: int, theta: float = 0.0, draws: int = 5000,
                seed: int = 0, workers: int | None = None, bins: int = 50) -> MonteCarloSummary:
    """Empirical law of an observable, standardized by its exact first two cumulants."""
    observable = Observable(observable)
    if draws < 100:
        raise DomainError("monte_carlo needs at least 100 draws")
    re, im, redraws = simulate(observable, N, draws, seed, theta, workers)
    if redraws > max(1, draws // 1000):
        raise RuntimeError(f"{redraws} degenerate redraws exceed 0.1% of {draws}")
    raw, partner = (im, re) if observable.is_imaginary else (re, im)
    cum = cumulants(observable, N, 2, Mode.EXACT)
    z = (raw - cum.mean) / math.sqrt(cum.variance)
    counts, edges = np.histogram(z, bins=bins, range=(-5.0, 5.0))
    return MonteCarloSummary(
        observable=observable, N=N, draws=draws, seed=seed, theta=theta,
        raw=raw, partner=partner, standardized=z,
        mean=float(np.mean(raw)), variance=float(np.var(raw, ddof=1)),
        skewness=float(stats.skew(raw)), ks=float(stats.kstest(z, "norm").statistic),
        redraws=redraws, hist_edges=edges, hist_counts=counts,
    )
