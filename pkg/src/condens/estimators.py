"""Model-independent density estimator combinators.

Conditional-density averaging, the Gaussian KDE with a rule-of-thumb
bandwidth, assembly of likelihood-ratio terms, control-variate convex
combinations of estimators, and ratio estimators with a delta-method
variance.  Everything here is pure over immutable inputs.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "ConditionalDensity",
    "KdeSpec",
    "GlrTerm",
    "ComboWeights",
    "RatioAccumulator",
    "cde_average",
    "kde_estimate",
    "kde_bandwidth",
    "glrde_estimate",
    "fit_combo_weights",
    "combine_rows",
    "ratio_density",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class ConditionalDensity:
    """One realized conditional density/cdf pair over an interval.

    ``density(x)`` must be >= 0 and ``cdf(x)`` non-decreasing with values
    in [0,1]; ``tag`` is an opaque handle on the hidden information that
    produced the realization (useful for debugging only).
    """

    density: Callable[[np.ndarray], np.ndarray]
    cdf: Callable[[np.ndarray], np.ndarray]
    tag: object = None


def cde_average(densities: Sequence[ConditionalDensity], x) -> np.ndarray | float:
    """Average of the realized conditional densities at x (the CDE)."""
    if len(densities) == 0:
        raise ValueError("cde_average requires at least one conditional density")
    xs = np.asarray(x, dtype=float)
    total = np.zeros_like(xs, dtype=float)
    for cd in densities:
        total += np.asarray(cd.density(xs), dtype=float)
    out = total / len(densities)
    return float(out) if np.isscalar(x) else out


@dataclass(frozen=True)
class KdeSpec:
    """Gaussian-kernel KDE specification (the kernel is fixed to phi)."""

    h: float

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("bandwidth must be positive")


def kde_estimate(samples, spec: KdeSpec, x) -> np.ndarray | float:
    """(1/nh) sum_i phi((x - X_i)/h), vectorized over x."""
    samp = np.asarray(samples, dtype=float)
    if samp.size == 0:
        raise ValueError("kde_estimate requires at least one sample")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(xs.shape, dtype=float)
    # chunk over x to bound the (n, n_x) work array
    step = max(1, int(4e6 / samp.size))
    for lo in range(0, xs.size, step):
        block = xs[lo:lo + step]
        t = (block[None, :] - samp[:, None]) / spec.h
        out[lo:lo + step] = np.exp(-0.5 * t * t).mean(axis=0) / (spec.h * _SQRT_2PI)
    return float(out[0]) if np.isscalar(x) else out.reshape(np.shape(x))


def kde_bandwidth(samples, interval: tuple[float, float] | None = None) -> float:
    """Rule-of-thumb bandwidth h = 1.06 sigma n^(-1/5) (Silverman).

    Matches the n^(-4/5) MISE target of the Gaussian KDE.  ``interval`` is
    accepted for interface symmetry; the rule does not use it.
    """
    samp = np.asarray(samples, dtype=float)
    if samp.size < 2:
        raise ValueError("bandwidth selection requires at least two samples")
    sd = samp.std(ddof=1)
    if sd == 0.0:
        raise ValueError("bandwidth selection requires non-degenerate samples")
    return 1.06 * sd * samp.size ** (-0.2)


@dataclass(frozen=True)
class GlrTerm:
    """One likelihood-ratio term: indicator threshold X and weight psi."""

    threshold: float
    psi: float

    def __post_init__(self):
        if not np.isfinite(self.psi):
            raise ValueError("psi must be finite")


def glrde_estimate(terms: Sequence[GlrTerm], x) -> np.ndarray | float:
    """Mean of 1[X_i <= x] psi_i over the terms.

    The estimate is unbiased for the density but, unlike a CDE, it is not
    pointwise non-negative for finite samples.
    """
    if len(terms) == 0:
        raise ValueError("glrde_estimate requires at least one term")
    thr = np.array([t.threshold for t in terms])
    psi = np.array([t.psi for t in terms])
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = ((thr[:, None] <= xs[None, :]) * psi[:, None]).mean(axis=0)
    return float(out[0]) if np.isscalar(x) else out.reshape(np.shape(x))


@dataclass(frozen=True)
class ComboWeights:
    """Convex-combination coefficients over q+1 estimators (sum to 1)."""

    beta: tuple[float, ...]
    singular_fallback: bool = False

    def __post_init__(self):
        if abs(sum(self.beta) - 1.0) > 1e-12:
            raise ValueError("combination weights must sum to 1")


def fit_combo_weights(per_replicate_values: np.ndarray, grid=None) -> ComboWeights:
    """Variance-minimizing constant coefficients for a convex combination.

    ``per_replicate_values`` has shape (n_r, q+1, n_e) (or (n_r, q+1) for a
    single evaluation point): independent replicates of q+1 unbiased
    estimators on a common grid.  Estimator 0 is the base; the differences
    base - estimator_l act as control variates, and the coefficients solve
    the usual least-squares normal equations on integrated covariances.
    A singular covariance falls back to beta = (1, 0, ..., 0).
    """
    vals = np.asarray(per_replicate_values, dtype=float)
    if vals.ndim == 2:
        vals = vals[:, :, None]
    n_r, m, _ = vals.shape
    if m < 2:
        raise ValueError("need a base estimator and at least one alternative")
    if n_r < 3:
        raise ValueError("need at least 3 replicates to estimate covariances")
    base = vals[:, 0, :]
    diffs = base[:, None, :] - vals[:, 1:, :]          # (n_r, q, n_e)
    dc = diffs - diffs.mean(axis=0, keepdims=True)
    bc = base - base.mean(axis=0, keepdims=True)
    # integrated covariances (grid averages; the common (b-a) factor cancels)
    cov = np.einsum("rie,rke->ik", dc, dc) / (n_r - 1)
    rhs = np.einsum("rie,re->i", dc, bc) / (n_r - 1)
    scale = np.abs(np.diag(cov)).max() if cov.size else 0.0
    if scale <= 0 or np.linalg.cond(cov) > 1e12:
        warnings.warn("singular control-variate covariance; using base estimator only")
        return ComboWeights(beta=(1.0,) + (0.0,) * (m - 1), singular_fallback=True)
    b = np.linalg.solve(cov, rhs)
    beta = np.concatenate([[1.0 - b.sum()], b])
    return ComboWeights(beta=tuple(float(v) for v in beta))


def combine_rows(per_replicate_values: np.ndarray, weights: ComboWeights) -> np.ndarray:
    """Apply combination weights: (n_r, q+1, n_e) -> (n_r, n_e)."""
    vals = np.asarray(per_replicate_values, dtype=float)
    beta = np.asarray(weights.beta)
    return np.einsum("rke,k->re", vals, beta)


@dataclass
class RatioAccumulator:
    """Per-replication numerator rows and denominator means for a ratio.

    ``num`` holds D-bar_j on the evaluation grid, shape (n_r, n_e); ``den``
    holds N-bar_j, shape (n_r,).  ``known_mean`` short-circuits the
    denominator when E[N] is known exactly (then the estimator is an
    unbiased plain mean).
    """

    num: np.ndarray
    den: np.ndarray
    known_mean: float | None = None

    def __post_init__(self):
        self.num = np.atleast_2d(np.asarray(self.num, dtype=float))
        self.den = np.asarray(self.den, dtype=float)
        if self.num.shape[0] != self.den.shape[0]:
            raise ValueError("numerator and denominator replication counts differ")

    def merge(self, other: "RatioAccumulator") -> "RatioAccumulator":
        if (self.known_mean is None) != (other.known_mean is None):
            raise ValueError("cannot merge accumulators with different denominators")
        return RatioAccumulator(
            np.vstack([self.num, other.num]),
            np.concatenate([self.den, other.den]),
            self.known_mean,
        )


def ratio_density(acc: RatioAccumulator, x_index=slice(None)) -> tuple[np.ndarray, np.ndarray]:
    """Grand-sum ratio estimate and its delta-method variance, per grid point.

    With an exact denominator mean the estimate is mean(D-bar)/E[N] with
    variance Var[D-bar]/(n_r E[N]^2); otherwise the classic ratio form
    (Var[D-bar] + Var[N-bar] f^2 - 2 Cov f) / (n_r mean(N-bar)^2) with
    empirical plug-ins.
    """
    num = acc.num[:, x_index]
    n_r = num.shape[0]
    if acc.known_mean is not None:
        mean_n = acc.known_mean
        est = num.mean(axis=0) / mean_n
        if n_r < 2:
            return est, np.full_like(est, np.nan)
        var = num.var(axis=0, ddof=1) / (n_r * mean_n ** 2)
        return est, var
    den_sum = acc.den.sum()
    if den_sum <= 0:
        raise ZeroDivisionError("ratio denominator is zero")
    est = num.sum(axis=0) / den_sum
    if n_r < 2:
        return est, np.full_like(est, np.nan)
    mean_n = acc.den.mean()
    var_d = num.var(axis=0, ddof=1)
    var_n = acc.den.var(ddof=1)
    dc = num - num.mean(axis=0, keepdims=True)
    nc = acc.den - mean_n
    cov = dc.T @ nc / (n_r - 1)
    var = (var_d + var_n * est ** 2 - 2.0 * cov * est) / (n_r * mean_n ** 2)
    return est, np.maximum(var, 0.0)
