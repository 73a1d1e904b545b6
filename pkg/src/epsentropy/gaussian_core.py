"""Gaussian measures on R^n, Gaussian channels and their mutual entropy.

A channel maps ``x`` to ``A x + w`` with ``w ~ N(0, R0)`` independent of ``x``,
so a centred input ``[0, R]`` leaves as ``[0, A R A^T + R0]``.
All logarithms are natural (nats).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .errors import (
    DimensionMismatch,
    NonFinite,
    NonzeroMean,
    NotPositiveSemidefinite,
    NotSymmetric,
    SingularNoise,
)

PSD_TOL = 1e-12
SYM_TOL = 1e-12
# |R0| at or below this is treated as singular noise.
DET_FLOOR = 1e-300


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float, copy=True)
    arr.flags.writeable = False
    return arr


def _as_square(m, name: str) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(m, dtype=float))
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"{name} must be a square matrix, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise DimensionMismatch(f"{name} must have dimension >= 1")
    if not np.all(np.isfinite(arr)):
        raise NonFinite(f"{name} has non-finite entries")
    return arr


def _check_psd(sym: np.ndarray, name: str) -> None:
    eig = np.linalg.eigvalsh(sym)
    tol = PSD_TOL * max(1.0, float(np.max(np.abs(eig))))
    if eig[0] < -tol:
        raise NotPositiveSemidefinite(
            f"{name} has eigenvalue {eig[0]:.6g} below -{tol:.1e}"
        )


@dataclass(frozen=True, eq=False)
class GaussianMeasure:
    """The state ``[mean, cov]``. Build through :func:`make_measure`."""

    mean: np.ndarray
    cov: np.ndarray

    @property
    def dim(self) -> int:
        return self.cov.shape[0]

    @property
    def is_centered(self) -> bool:
        return not np.any(self.mean)


@dataclass(frozen=True, eq=False)
class GaussianChannel:
    """Linear gain ``a`` plus independent centred Gaussian noise of covariance ``r0``."""

    a: np.ndarray
    r0: np.ndarray

    @property
    def dim(self) -> int:
        return self.a.shape[0]


@dataclass(frozen=True, eq=False)
class CompoundCovariance:
    """Joint covariance of (input, output), shape ``2n x 2n``."""

    c: np.ndarray
    n: int

    @property
    def input_block(self) -> np.ndarray:
        return self.c[: self.n, : self.n]

    @property
    def cross_block(self) -> np.ndarray:
        return self.c[: self.n, self.n :]

    @property
    def output_block(self) -> np.ndarray:
        return self.c[self.n :, self.n :]


def make_measure(mean, cov) -> GaussianMeasure:
    """Validated constructor. ``cov`` is symmetrized as ``(cov + cov.T) / 2`` first."""
    cov = _as_square(cov, "cov")
    mean = np.atleast_1d(np.asarray(mean, dtype=float))
    if mean.ndim != 1 or mean.shape[0] != cov.shape[0]:
        raise DimensionMismatch(
            f"mean has length {mean.size} but cov is {cov.shape[0]}x{cov.shape[0]}"
        )
    if not np.all(np.isfinite(mean)):
        raise NonFinite("mean has non-finite entries")
    cov = 0.5 * (cov + cov.T)
    _check_psd(cov, "cov")
    return GaussianMeasure(_frozen(mean), _frozen(cov))


def centered(cov) -> GaussianMeasure:
    cov = _as_square(cov, "cov")
    return make_measure(np.zeros(cov.shape[0]), cov)


def make_channel(a, r0) -> GaussianChannel:
    a = _as_square(a, "a")
    r0 = _as_square(r0, "r0")
    if a.shape != r0.shape:
        raise DimensionMismatch(f"a is {a.shape} but r0 is {r0.shape}")
    r0 = 0.5 * (r0 + r0.T)
    _check_psd(r0, "r0")
    return GaussianChannel(_frozen(a), _frozen(r0))


def scalar_channel(beta: float, noise_var: float) -> GaussianChannel:
    """1-D channel ``x -> beta x + N(0, noise_var)``."""
    return make_channel([[beta]], [[noise_var]])


def _require_compatible(mu: GaussianMeasure, ch: GaussianChannel) -> None:
    if mu.dim != ch.dim:
        raise DimensionMismatch(f"measure has dimension {mu.dim}, channel {ch.dim}")
    if not mu.is_centered:
        raise NonzeroMean("channel and entropy operations require a zero-mean measure")


def _output_cov(mu: GaussianMeasure, ch: GaussianChannel) -> np.ndarray:
    out = ch.a @ mu.cov @ ch.a.T + ch.r0
    return 0.5 * (out + out.T)


def apply_channel(mu: GaussianMeasure, ch: GaussianChannel) -> GaussianMeasure:
    """Output state ``[0, A R A^T + R0]``."""
    _require_compatible(mu, ch)
    return make_measure(np.zeros(mu.dim), _output_cov(mu, ch))


def compound_covariance(mu: GaussianMeasure, ch: GaussianChannel) -> CompoundCovariance:
    """Block matrix ``[[R, R A^T], [A R, A R A^T + R0]]``."""
    _require_compatible(mu, ch)
    r = mu.cov
    cross = r @ ch.a.T
    c = np.block([[r, cross], [cross.T, _output_cov(mu, ch)]])
    return CompoundCovariance(_frozen(c), mu.dim)


def mutual_entropy(mu: GaussianMeasure, ch: GaussianChannel) -> float:
    """``(1/2) ln(|A R A^T + R0| / |R0|)`` in nats.

    Evaluated as ``(1/2) sum log1p(eig(L^-1 A R A^T L^-T))`` with ``R0 = L L^T``,
    which is nonnegative by construction and stable for ill-conditioned noise.
    """
    _require_compatible(mu, ch)
    noise_eig = np.linalg.eigvalsh(ch.r0)
    if noise_eig[0] <= 0.0 or np.sum(np.log(noise_eig)) <= np.log(DET_FLOOR):
        raise SingularNoise("noise covariance is singular; mutual entropy is infinite")
    try:
        chol = linalg.cholesky(ch.r0, lower=True)
    except linalg.LinAlgError as exc:
        raise SingularNoise(f"Cholesky of noise covariance failed: {exc}") from exc
    signal = ch.a @ mu.cov @ ch.a.T
    half = linalg.solve_triangular(chol, signal, lower=True)
    whitened = linalg.solve_triangular(chol, half.T, lower=True)
    whitened = 0.5 * (whitened + whitened.T)
    eig = np.clip(np.linalg.eigvalsh(whitened), 0.0, None)
    return 0.5 * float(np.sum(np.log1p(eig)))


def covariance_spectrum(cov) -> np.ndarray:
    """Eigenvalues of a symmetric PSD matrix, descending, tiny negatives clamped to 0."""
    cov = _as_square(cov, "cov")
    scale = max(1.0, float(np.max(np.abs(cov))))
    if np.max(np.abs(cov - cov.T)) > SYM_TOL * scale:
        raise NotSymmetric("covariance matrix is not symmetric")
    eig = np.linalg.eigvalsh(0.5 * (cov + cov.T))[::-1]
    tol = PSD_TOL * max(1.0, float(np.max(np.abs(eig))))
    if eig[-1] < -tol:
        raise NotPositiveSemidefinite(f"eigenvalue {eig[-1]:.6g} below -{tol:.1e}")
    return np.clip(eig, 0.0, None)
