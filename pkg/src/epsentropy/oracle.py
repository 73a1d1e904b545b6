"""Brute-force verifiers for the closed forms.

None of these call the routine they check: the S_K oracle searches channel
grids directly, the J oracle scans the output-equivalence class, and the TV
oracle integrates the density difference numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleClass, NonpositiveEps, UnsupportedDimension, ValidationError
from .gaussian_core import (
    GaussianMeasure,
    centered,
    make_channel,
    mutual_entropy,
    scalar_channel,
)
from .kolmogorov import s_k_rv
from .metrics import _check_var, rv_distortion, tv_exact

BETA_MAX = 1.5
# Smallest noise variance on the S_K grid, relative to the eigenvalue.
NOISE_FLOOR_REL = 1e-8
MIN_RESOLUTION = 50
QUAD_TOL = 1e-9
QUAD_MAX_DOUBLINGS = 14


@dataclass(frozen=True)
class OracleReport:
    oracle_value: float
    closed_form_value: float
    abs_gap: float
    rel_gap: float
    grid: dict = field(default_factory=dict)
    argmin_or_argmax: dict = field(default_factory=dict)

    @classmethod
    def build(cls, oracle_value, closed_form_value, grid, arg):
        gap = abs(oracle_value - closed_form_value)
        rel = gap / max(abs(closed_form_value), 1e-12)
        return cls(float(oracle_value), float(closed_form_value), gap, rel, grid, arg)

    def as_dict(self) -> dict:
        return {
            "oracle_value": self.oracle_value,
            "closed_form_value": self.closed_form_value,
            "abs_gap": self.abs_gap,
            "rel_gap": self.rel_gap,
            "grid": self.grid,
            "argmin_or_argmax": self.argmin_or_argmax,
        }


def _component_grid(lam: float, resolution: int):
    beta = np.linspace(0.0, BETA_MAX, resolution)
    noise = np.geomspace(NOISE_FLOOR_REL * lam, lam, resolution)
    b, s = np.meshgrid(beta, noise, indexing="ij")
    b, s = b.ravel(), s.ravel()
    rate = 0.5 * np.log1p(b * b * lam / s)
    dist = (1.0 - b) ** 2 * lam + s
    return b, s, rate, dist


def brute_force_sk(mu: GaussianMeasure, eps: float, resolution: int = 400) -> OracleReport:
    """Grid-minimize the mutual entropy over channels within distortion ``eps``.

    Channels are diagonal in the eigenbasis of the source covariance, with gain
    in ``[0, 1.5]`` and noise log-spaced in ``(0, lambda]`` per component. The
    constraint is on the total squared error ``E|f - g|^2 <= eps^2``, the budget
    the water level is defined against. For n = 2 the minimum over the full
    four-parameter product grid is found exactly with a sorted running minimum.
    """
    if mu.dim not in (1, 2):
        raise UnsupportedDimension(f"brute_force_sk supports n in {{1, 2}}, got {mu.dim}")
    if resolution < MIN_RESOLUTION:
        raise ValidationError(f"resolution must be >= {MIN_RESOLUTION}")
    if not (eps > 0.0):
        raise NonpositiveEps(f"eps must be positive, got {eps!r}")
    lam, vecs = np.linalg.eigh(mu.cov)
    if lam[0] <= 0.0:
        raise UnsupportedDimension("brute_force_sk needs a nondegenerate covariance")
    budget = eps * eps
    comps = [_component_grid(float(l), resolution) for l in lam]

    if mu.dim == 1:
        b, s, rate, dist = comps[0]
        feasible = np.flatnonzero(dist <= budget)
        if feasible.size == 0:
            raise InfeasibleClass("no grid channel meets the distortion budget")
        best = feasible[np.argmin(rate[feasible])]
        gains, noise = [b[best]], [s[best]]
    else:
        b1, s1, r1, d1 = comps[0]
        b2, s2, r2, d2 = comps[1]
        order = np.argsort(d1, kind="stable")
        d1s = d1[order]
        r1s = r1[order]
        runmin_idx = np.zeros(order.size, dtype=int)
        cur = 0
        for k in range(1, order.size):
            if r1s[k] < r1s[cur]:
                cur = k
            runmin_idx[k] = cur
        pos = np.searchsorted(d1s, budget - d2, side="right") - 1
        ok = np.flatnonzero(pos >= 0)
        if ok.size == 0:
            raise InfeasibleClass("no grid channel meets the distortion budget")
        partner = runmin_idx[pos[ok]]
        totals = r1s[partner] + r2[ok]
        j = int(np.argmin(totals))
        i1 = order[partner[j]]
        i2 = ok[j]
        gains, noise = [b1[i1], b2[i2]], [s1[i1], s2[i2]]

    a = vecs @ np.diag(gains) @ vecs.T
    r0 = vecs @ np.diag(noise) @ vecs.T
    ch = make_channel(a, r0)
    value = mutual_entropy(mu, ch)
    grid = {
        "beta_range": [0.0, BETA_MAX],
        "noise_range_rel": [NOISE_FLOOR_REL, 1.0],
        "noise_spacing": "geometric",
        "resolution": resolution,
    }
    arg = {
        "gains": [float(g) for g in gains],
        "noise_variances": [float(x) for x in noise],
        "distortion_sq_total": mu.dim * rv_distortion(mu, ch) ** 2,
    }
    return OracleReport.build(value, s_k_rv(mu, eps), grid, arg)


def brute_force_j(sigma2: float, c_delta: float, delta: float, resolution: int = 400) -> OracleReport:
    """Scan channels with output variance ``c_delta`` and noise >= ``delta``; maximize I."""
    _check_var(sigma2, c_delta)
    if not (delta > 0.0) or c_delta <= delta:
        raise InfeasibleClass(f"need c_delta > delta > 0, got c={c_delta!r}, delta={delta!r}")
    if resolution < MIN_RESOLUTION:
        raise ValidationError(f"resolution must be >= {MIN_RESOLUTION}")
    beta_max = math.sqrt((c_delta - delta) / sigma2)
    beta = np.linspace(0.0, beta_max, resolution)
    noise = np.maximum(c_delta - beta * beta * sigma2, delta)
    rate = 0.5 * np.log((beta * beta * sigma2 + noise) / noise)
    k = int(np.argmax(rate))
    best = scalar_channel(float(beta[k]), float(noise[k]))
    value = mutual_entropy(centered([[sigma2]]), best)
    return OracleReport.build(
        value,
        0.5 * math.log(c_delta / delta),
        {"beta_range": [0.0, beta_max], "resolution": resolution},
        {"beta": float(beta[k]), "noise_variance": float(noise[k])},
    )


def _density(x: np.ndarray, var: float) -> np.ndarray:
    return np.exp(-0.5 * x * x / var) / math.sqrt(2.0 * math.pi * var)


def quadrature_tv(sigma2: float, c: float, n_points: int = 1000) -> float:
    """Composite Simpson estimate of ``int |p1 - p2| dx`` over ``[-L, L]``.

    ``L`` is ten times the larger standard deviation. Panels double until two
    successive estimates differ by less than 1e-9.
    """
    _check_var(sigma2, c)
    if n_points < 1000:
        raise ValidationError("n_points must be >= 1000")
    half = 10.0 * math.sqrt(max(sigma2, c))

    def simpson(panels: int) -> float:
        x = np.linspace(-half, half, panels + 1)
        y = np.abs(_density(x, sigma2) - _density(x, c))
        h = 2.0 * half / panels
        return float(h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum()))

    panels = n_points + (n_points % 2)
    prev = simpson(panels)
    for _ in range(QUAD_MAX_DOUBLINGS):
        panels *= 2
        cur = simpson(panels)
        if abs(cur - prev) < QUAD_TOL:
            return cur
        prev = cur
    return cur


def oracle_tv(sigma2: float, c: float, n_points: int = 1000) -> OracleReport:
    value = quadrature_tv(sigma2, c, n_points)
    half = 10.0 * math.sqrt(max(sigma2, c))
    return OracleReport.build(
        value,
        tv_exact(sigma2, c),
        {"interval": [-half, half], "initial_panels": n_points, "rule": "composite Simpson"},
        {},
    )
