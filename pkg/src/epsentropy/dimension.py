"""Capacity dimension of a state: growth rate of S(eps) against ln(1/eps)."""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .errors import DegenerateGrid, EntropyError, SweepRowFailed, TooFewPoints, UnsupportedDimension
from .gaussian_core import GaussianMeasure
from .kolmogorov import s_k_rv_detail
from .ohya import JMode, ohya_tv


class Norm(enum.Enum):
    RV = "rv"
    TV = "tv"


class DimMethod(enum.Enum):
    REGRESSION = "regression"
    LAST_RATIO = "last-ratio"


@dataclass(frozen=True)
class SweepRow:
    eps: float
    entropy_nats: float
    norm: Norm
    extra_name: str = ""
    extra_value: Optional[float] = None


@dataclass(frozen=True)
class DimensionEstimate:
    slope: float
    stderr: float
    points_used: int
    method: DimMethod


def geometric_grid(eps_max: float, eps_min: float, points: int) -> np.ndarray:
    """``points`` log-spaced values from ``eps_max`` down to ``eps_min``."""
    if points < 2:
        raise TooFewPoints("a grid needs at least 2 points")
    if not (0.0 < eps_min < eps_max):
        raise DegenerateGrid(f"need 0 < eps_min < eps_max, got {eps_min!r}, {eps_max!r}")
    return np.geomspace(eps_max, eps_min, points)


def _row(mu: GaussianMeasure, eps: float, norm: Norm, mode: JMode) -> SweepRow:
    if norm is Norm.RV:
        wf = s_k_rv_detail(mu, eps)
        return SweepRow(eps, wf.entropy_nats, norm, "theta2", wf.theta2)
    res = ohya_tv(float(mu.cov[0, 0]), eps, mode)
    return SweepRow(eps, res.entropy_nats, norm, "branch_variance", res.branch_variance)


def entropy_sweep(
    mu: GaussianMeasure,
    eps_grid: Sequence[float],
    norm: Norm = Norm.RV,
    mode: JMode = JMode.FIRST_ORDER,
    workers: Optional[int] = None,
) -> list[SweepRow]:
    """Evaluate the epsilon-entropy on a strictly decreasing grid, one row per eps.

    R.V. rows carry the water level, TV rows the lower-branch output variance.
    Rows come back in grid order even when ``workers`` > 1.
    """
    grid = [float(e) for e in eps_grid]
    if not grid:
        raise DegenerateGrid("empty eps grid")
    if any(b >= a for a, b in zip(grid, grid[1:])):
        raise DegenerateGrid("eps grid must be strictly decreasing")
    if norm is Norm.TV and mu.dim != 1:
        raise UnsupportedDimension("the TV norm is implemented for 1-D measures only")

    def one(eps: float) -> SweepRow:
        try:
            return _row(mu, eps, norm, mode)
        except EntropyError as exc:
            raise SweepRowFailed(eps, exc) from exc

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, grid))
    return [one(e) for e in grid]


def capacity_dimension(
    rows: Sequence[SweepRow], method: DimMethod = DimMethod.REGRESSION
) -> DimensionEstimate:
    """Estimate ``lim S(eps) / ln(1/eps)``.

    Regression fits the slope of S against ln(1/eps), which absorbs the
    additive constant in S; LastRatio is the plain ratio at the smallest eps.
    """
    if len(rows) < 2:
        raise TooFewPoints(f"need at least 2 rows, got {len(rows)}")
    eps = np.array([r.eps for r in rows], dtype=float)
    ent = np.array([r.entropy_nats for r in rows], dtype=float)
    if np.unique(eps).size != eps.size:
        raise DegenerateGrid("eps values must be distinct")
    x = np.log(1.0 / eps)

    if method is DimMethod.LAST_RATIO:
        i = int(np.argmin(eps))
        if x[i] <= 0.0:
            raise DegenerateGrid("smallest eps must be below 1 for the ratio estimate")
        return DimensionEstimate(float(ent[i] / x[i]), 0.0, 1, method)

    if np.ptp(ent) == 0.0:
        return DimensionEstimate(0.0, 0.0, len(rows), method)
    fit = stats.linregress(x, ent)
    stderr = float(fit.stderr) if math.isfinite(fit.stderr) else 0.0
    return DimensionEstimate(float(fit.slope), stderr, len(rows), method)
