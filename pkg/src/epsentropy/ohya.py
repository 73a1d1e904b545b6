"""Maximum mutual entropy J and Ohya's epsilon-entropy of Gaussian states.

R.V. norm: two channels with the same output state produce the same joint law,
so J equals the plain mutual entropy and the epsilon-entropy reduces to the
water-filling value.

TV norm (1-D only): J is a supremum over all channels sharing the output
variance ``C``. Restricting to channels whose noise is at least the TV level
``delta`` (otherwise the supremum is infinite), the supremum sits on that
floor and equals ``(1/2) ln(C / delta)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import AdmissibilityViolated, DimensionMismatch, EpsOutOfRange
from .gaussian_core import GaussianChannel, GaussianMeasure
from .kolmogorov import s_k_rv
from .metrics import TvBranch, _check_var, tv_branch, tv_exact, tv_invert

# sqrt(2 pi) / 4, the inverse slope of the first-order TV estimate
HALF_SLOPE = math.sqrt(2.0 * math.pi) / 4.0
# relative slack on the noise >= delta floor, where J is attained
ADMISSIBLE_RTOL = 1e-9


class JMode(enum.Enum):
    FIRST_ORDER = "first-order"
    EXACT = "exact"


def _check_eps(eps: float) -> None:
    if not (0.0 < eps < 2.0) or not math.isfinite(eps):
        raise EpsOutOfRange(f"eps must lie in (0, 2) for the TV norm, got {eps!r}")


def j_first_order(sigma2: float, delta: float, branch: TvBranch) -> float:
    """``(1/2) ln(sigma2 / delta) +- ln(1 + sqrt(2 pi)/4 * delta)``, + on the upper branch."""
    _check_var(sigma2)
    if delta == 0.0:
        return math.inf
    corr = math.log1p(HALF_SLOPE * delta)
    if branch is TvBranch.LOWER:
        corr = -corr
    return 0.5 * math.log(sigma2 / delta) + corr


def j_exact(sigma2: float, delta: float, branch: TvBranch) -> float:
    """``(1/2) ln(C_delta / delta)`` where ``C_delta`` is the output variance at TV level delta."""
    if delta == 0.0:
        return math.inf
    c = tv_invert(sigma2, delta, branch)
    return 0.5 * math.log(c / delta)


def max_mutual_entropy_tv(
    sigma2: float, ch: GaussianChannel, mode: JMode = JMode.FIRST_ORDER
) -> float:
    """J for a 1-D channel under the TV norm, nats.

    Returns ``inf`` when the channel output equals the input (delta = 0).
    Raises :class:`AdmissibilityViolated` if the channel noise is below delta.
    """
    _check_var(sigma2)
    if ch.dim != 1:
        raise DimensionMismatch("TV-norm J is implemented for 1-D channels only")
    beta = float(ch.a[0, 0])
    noise = float(ch.r0[0, 0])
    c = beta * beta * sigma2 + noise
    _check_var(c)
    delta = tv_exact(sigma2, c)
    if delta == 0.0:
        return math.inf
    if noise < delta * (1.0 - ADMISSIBLE_RTOL):
        raise AdmissibilityViolated(
            f"noise variance {noise:.6g} is below the TV level {delta:.6g}",
            gap=delta - noise,
        )
    if mode is JMode.EXACT:
        return 0.5 * math.log(c / delta)
    return j_first_order(sigma2, delta, tv_branch(sigma2, c))


@dataclass(frozen=True)
class OhyaTvResult:
    entropy_nats: float
    branch_variance: float  # output variance C on the lower branch at delta = eps
    raw_nats: float  # value before clamping at zero
    clamped: bool


def ohya_tv(sigma2: float, eps: float, mode: JMode = JMode.FIRST_ORDER) -> OhyaTvResult:
    # J on the lower branch is below the upper one and decreasing in delta,
    # so the infimum over delta in (0, eps] is the lower-branch value at eps.
    _check_var(sigma2)
    _check_eps(eps)
    if mode is JMode.EXACT:
        c = tv_invert(sigma2, eps, TvBranch.LOWER)
        raw = 0.5 * math.log(c / eps)
    else:
        c = sigma2 / (1.0 + HALF_SLOPE * eps) ** 2
        raw = j_first_order(sigma2, eps, TvBranch.LOWER)
    clamped = raw < 0.0
    return OhyaTvResult(max(raw, 0.0), c, raw, clamped)


def s_o_tv(sigma2: float, eps: float, mode: JMode = JMode.FIRST_ORDER) -> float:
    """Ohya epsilon-entropy of ``[0, sigma2]`` in the TV norm, nats (clamped at 0)."""
    return ohya_tv(sigma2, eps, mode).entropy_nats


def s_o_tv_search(sigma2: float, eps: float, mode: JMode = JMode.FIRST_ORDER, points: int = 200):
    """Numeric infimum over a delta grid, for inspecting the monotone curve.

    Returns ``(value, deltas, upper_j, lower_j)``; ``value`` should match
    :func:`s_o_tv` up to clamping.
    """
    _check_var(sigma2)
    _check_eps(eps)
    j = j_exact if mode is JMode.EXACT else j_first_order
    deltas = eps * np.linspace(1.0 / points, 1.0, points)
    upper = np.array([j(sigma2, d, TvBranch.UPPER) for d in deltas])
    lower = np.array([j(sigma2, d, TvBranch.LOWER) for d in deltas])
    value = float(np.min(np.minimum(upper, lower)))
    return max(value, 0.0), deltas, upper, lower


def s_o_rv(mu: GaussianMeasure, eps: float) -> float:
    """Ohya epsilon-entropy in the R.V. norm; coincides with Kolmogorov's."""
    return s_k_rv(mu, eps)
