"""Distances between a state and its channel output.

Two norms are supported:

* the random-variable (R.V.) norm, ``sqrt((1/n) E|f - g|^2)`` with ``g = A f + w``;
* the total-variation norm in the *mass* convention ``|mu - nu|(R)``, i.e. the
  L1 distance between densities. This is twice the probabilist's TV distance,
  so values live in ``[0, 2)``.

TV is only implemented for centred 1-D Gaussians, which is all that is needed.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import DeltaOutOfRange, NonpositiveVariance, NoSolution
from .gaussian_core import GaussianChannel, GaussianMeasure, _require_compatible

FIRST_ORDER_COEF = 4.0 / math.sqrt(2.0 * math.pi)

BISECT_TOL = 1e-12
BISECT_MAXITER = 200
# |ln(C / sigma^2)| bracket limit; exp(700) is near the float ceiling.
_LOG_RATIO_MAX = 700.0


class TvBranch(enum.Enum):
    UPPER = "upper"  # output variance >= input variance
    LOWER = "lower"  # output variance < input variance


def tv_branch(sigma2: float, c: float) -> TvBranch:
    return TvBranch.UPPER if c >= sigma2 else TvBranch.LOWER


def rv_distortion(mu: GaussianMeasure, ch: GaussianChannel) -> float:
    """Root mean-square per-coordinate distance between input and output.

    ``E|f - g|^2 = tr((I - A) R (I - A)^T) + tr R0``.
    """
    _require_compatible(mu, ch)
    resid = np.eye(mu.dim) - ch.a
    total = float(np.trace(resid @ mu.cov @ resid.T) + np.trace(ch.r0))
    return math.sqrt(max(total, 0.0) / mu.dim)


def gaussian_cdf(x: float) -> float:
    """Standard normal CDF through ``erfc``; accurate in both tails."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _check_var(*values: float) -> None:
    for v in values:
        if not (v > 0.0) or not math.isfinite(v):
            raise NonpositiveVariance(f"variance must be positive and finite, got {v!r}")


def _tv_from_log_ratio(t: float) -> float:
    # With C = sigma^2 e^t the crossing point satisfies (a/sigma)^2 = t / (1 - e^-t),
    # and a / sqrt(C) = (a/sigma) e^(-t/2). The TV depends on t alone.
    if t == 0.0:
        return 0.0
    u = math.sqrt(t / -math.expm1(-t))
    v = u * math.exp(-0.5 * t)
    # Phi(u) - Phi(v) = (erf(u/sqrt2) - erf(v/sqrt2)) / 2; erf keeps the small-t difference exact.
    return 2.0 * abs(math.erf(u / math.sqrt(2.0)) - math.erf(v / math.sqrt(2.0)))


def crossing_point(sigma2: float, c: float) -> float:
    """Positive abscissa where the two centred densities are equal."""
    _check_var(sigma2, c)
    if c == sigma2:
        raise NonpositiveVariance("identical variances have no crossing point")
    return math.sqrt(math.log(c / sigma2) / (1.0 / sigma2 - 1.0 / c))


def tv_exact(sigma2: float, c: float) -> float:
    """L1 distance between ``N(0, sigma2)`` and ``N(0, c)``.

    Closed form ``4 |Phi(a/s_min) - Phi(a/s_max)|`` at the crossing point ``a``.
    """
    _check_var(sigma2, c)
    return _tv_from_log_ratio(math.log(c / sigma2))


def tv_first_order(sigma2: float, c: float) -> float:
    """Linear estimate ``(4/sqrt(2 pi)) |sqrt(c) - sigma| / sigma``.

    The sign is dropped; use :func:`tv_branch` for the side. Note this
    overestimates the true TV: as ``c -> sigma2`` the exact value is
    ``4 phi(1) |sqrt(c) - sigma| / sigma``, a factor ``exp(-1/2)`` smaller.
    """
    _check_var(sigma2, c)
    sigma = math.sqrt(sigma2)
    return FIRST_ORDER_COEF * abs(math.sqrt(c) - sigma) / sigma


def tv_invert(sigma2: float, delta: float, branch: TvBranch) -> float:
    """Output variance ``C`` on the given side with ``tv_exact(sigma2, C) == delta``.

    Bisection in ``t = ln(C / sigma2)``, where the TV is monotone in ``|t|``.
    """
    _check_var(sigma2)
    if not (0.0 <= delta < 2.0) or not math.isfinite(delta):
        raise DeltaOutOfRange(f"delta must lie in [0, 2), got {delta!r}")
    if delta == 0.0:
        return sigma2
    sign = 1.0 if branch is TvBranch.UPPER else -1.0

    lo, hi = 0.0, 1.0
    while _tv_from_log_ratio(sign * hi) < delta:
        lo, hi = hi, 2.0 * hi
        if hi > _LOG_RATIO_MAX:
            sup = _tv_from_log_ratio(sign * _LOG_RATIO_MAX)
            raise NoSolution(
                f"TV level {delta!r} not attainable on the {branch.value} branch "
                f"(supremum in floating point {sup!r})",
                supremum=sup,
            )

    for _ in range(BISECT_MAXITER):
        mid = 0.5 * (lo + hi)
        resid = _tv_from_log_ratio(sign * mid) - delta
        if abs(resid) <= BISECT_TOL:
            break
        if resid < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4.0 * np.finfo(float).eps * max(1.0, hi):
            break
    return sigma2 * math.exp(sign * mid)
