"""Shared pieces for the simulation model zoo."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr, ndtri

from ..estimators import ConditionalDensity

__all__ = ["ModelSpec", "norm_pdf", "norm_cdf", "norm_ppf", "conditional_density"]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def norm_pdf(x):
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * x * x) / _SQRT_2PI


def norm_cdf(x):
    return ndtr(np.asarray(x, dtype=float))


def norm_ppf(u):
    return ndtri(np.asarray(u, dtype=float))


@dataclass(frozen=True)
class ModelSpec:
    """Introspection record for a model: what it can do and where it lives."""

    name: str
    dim: int | None                 # point dimension of the default estimator
    interval: tuple[float, float]
    variants: tuple[str, ...]
    capabilities: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        a, b = self.interval
        if not a < b:
            raise ValueError("estimation interval must have a < b")


def conditional_density(model, u_row) -> ConditionalDensity:
    """Wrap one realization of a model's conditional density/cdf pair."""
    u = np.atleast_2d(np.asarray(u_row, dtype=float))

    def density(x):
        return model.cde_matrix(u, np.atleast_1d(np.asarray(x, dtype=float)))[0]

    def cdf(x):
        return model.cdf_matrix(u, np.atleast_1d(np.asarray(x, dtype=float)))[0]

    return ConditionalDensity(density=density, cdf=cdf, tag=u)
