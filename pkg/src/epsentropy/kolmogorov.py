"""Kolmogorov epsilon-entropy of Gaussian measures.

Under the R.V. norm this is the Gaussian rate-distortion function, obtained by
reverse water-filling over the covariance spectrum. Under the TV norm the
infimum collapses to zero (a channel that ignores its input and emits a copy
of the state is within any distance).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptySpectrum, NonFinite, NonpositiveEps, NonzeroMean, NotPositiveSemidefinite
from .gaussian_core import (
    GaussianChannel,
    GaussianMeasure,
    covariance_spectrum,
    make_channel,
    scalar_channel,
)
from .metrics import _check_var

INACTIVE_NOISE_REL = 1e-6


@dataclass(frozen=True)
class WaterFillResult:
    theta2: float
    allocations: tuple[float, ...]
    entropy_nats: float
    active_count: int


def water_fill(eigenvalues, eps: float) -> WaterFillResult:
    """Solve ``sum_i min(lambda_i, theta2) = eps^2`` for the water level.

    The left side is piecewise linear in ``theta2`` with breakpoints at the
    eigenvalues, so the solution is found exactly by walking them in
    ascending order. Allocations are returned in the input order.
    """
    lam = np.asarray(eigenvalues, dtype=float).ravel()
    if lam.size == 0 or not np.any(lam > 0.0):
        raise EmptySpectrum("need at least one positive eigenvalue")
    if not np.all(np.isfinite(lam)):
        raise NonFinite("eigenvalues must be finite")
    if np.any(lam < 0.0):
        raise NotPositiveSemidefinite("eigenvalues must be nonnegative")
    if not (eps > 0.0) or not math.isfinite(eps):
        raise NonpositiveEps(f"eps must be positive and finite, got {eps!r}")

    budget = eps * eps
    asc = np.sort(lam)
    n = asc.size
    # rounding in the eigen-decomposition must not turn a full budget into a tiny rate
    if budget >= asc.sum() * (1.0 - 1e-12):
        theta2 = float(asc[-1])
    else:
        filled = 0.0  # sum of eigenvalues already below the water
        theta2 = float(asc[-1])
        for k in range(n):
            # Water level between asc[k-1] and asc[k]: filled + (n - k) * theta2.
            if filled + (n - k) * asc[k] >= budget:
                theta2 = (budget - filled) / (n - k)
                break
            filled += asc[k]

    alloc = np.minimum(lam, theta2)
    active = lam > theta2
    rate = 0.5 * float(np.sum(np.log(lam[active] / theta2)))
    return WaterFillResult(
        theta2=theta2,
        allocations=tuple(float(x) for x in alloc),
        entropy_nats=rate,
        active_count=int(np.count_nonzero(active)),
    )


def s_k_rv_detail(mu: GaussianMeasure, eps: float) -> WaterFillResult:
    if not mu.is_centered:
        raise NonzeroMean("entropy is defined here for zero-mean measures only")
    return water_fill(covariance_spectrum(mu.cov), eps)


def s_k_rv(mu: GaussianMeasure, eps: float) -> float:
    """Kolmogorov epsilon-entropy in the R.V. norm, nats."""
    return s_k_rv_detail(mu, eps).entropy_nats


def optimal_test_channel(mu: GaussianMeasure, eps: float) -> GaussianChannel:
    """Forward channel attaining the water-filling bound.

    In the eigenbasis, component ``i`` gets gain ``1 - t_i / lambda_i`` and noise
    ``(lambda_i - t_i) t_i / lambda_i`` with ``t_i = min(lambda_i, theta2)``.
    Inactive components get zero gain and a noise floor of ``1e-6 theta2`` so
    ``R0`` stays invertible; distortion and rate are therefore attained only
    to about one part in 1e6.
    """
    eig, vecs = np.linalg.eigh(mu.cov)
    eig = np.clip(eig, 0.0, None)
    wf = water_fill(eig, eps)
    gains = np.zeros_like(eig)
    noise = np.zeros_like(eig)
    for i, lam in enumerate(eig):
        t = min(lam, wf.theta2)
        if lam > wf.theta2:
            gains[i] = 1.0 - t / lam
            noise[i] = (lam - t) * t / lam
    noise = np.where(noise > 0.0, noise, INACTIVE_NOISE_REL * wf.theta2)
    a = vecs @ np.diag(gains) @ vecs.T
    r0 = vecs @ np.diag(noise) @ vecs.T
    return make_channel(a, r0)


def s_k_tv(sigma2: float, eps: float) -> tuple[float, GaussianChannel]:
    """Kolmogorov epsilon-entropy in the TV norm: always 0.

    Returns the witness channel ``beta = 0, noise = sigma2``; its output equals
    the input state exactly, and it carries no information.
    """
    _check_var(sigma2)
    if not (eps > 0.0):
        raise NonpositiveEps(f"eps must be positive, got {eps!r}")
    return 0.0, scalar_channel(0.0, sigma2)
