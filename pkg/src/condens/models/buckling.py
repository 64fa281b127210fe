"""Buckling strength of a steel plate, a six-input reliability model.

X = (2.1/L - 0.9/L^2)(1 - 0.75 Y5/L)(1 - 2 Y6 Y2/Y1) with
L = (Y1/Y2) sqrt(Y3/Y4).  Inputs are normal or lognormal given (mean, cv);
lognormal parameters come from exact moment matching.  Hiding Y5 or Y6
leaves a one-dimensional normal conditional law; draws where the retained
product terms are not positive cannot be inverted and are rejected
(counted; probability is negligible at the default parameters).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .base import ModelSpec, norm_cdf, norm_pdf, norm_ppf

__all__ = ["BucklingInput", "BucklingModel", "BUCKLING_TABLE", "lognormal_from_mean_cv"]


def lognormal_from_mean_cv(mean: float, cv: float) -> tuple[float, float]:
    """(mu, sigma) of the lognormal with the given mean and coefficient of variation."""
    s2 = math.log(1.0 + cv * cv)
    return math.log(mean) - 0.5 * s2, math.sqrt(s2)


@dataclass(frozen=True)
class BucklingInput:
    kind: str          # "normal" | "lognormal"
    mean: float
    cv: float

    def ppf(self, u: np.ndarray) -> np.ndarray:
        z = norm_ppf(u)
        if self.kind == "normal":
            return self.mean + self.cv * self.mean * z
        mu, sd = lognormal_from_mean_cv(self.mean, self.cv)
        return np.exp(mu + sd * z)

    def pdf(self, y: np.ndarray) -> np.ndarray:
        if self.kind == "normal":
            sd = self.cv * self.mean
            return norm_pdf((y - self.mean) / sd) / sd
        mu, sd = lognormal_from_mean_cv(self.mean, self.cv)
        out = np.zeros_like(y)
        pos = y > 0
        yy = np.where(pos, y, 1.0)
        out[pos] = (norm_pdf((np.log(yy) - mu) / sd) / (yy * sd))[pos]
        return out

    def cdf(self, y: np.ndarray) -> np.ndarray:
        if self.kind == "normal":
            return norm_cdf((y - self.mean) / (self.cv * self.mean))
        mu, sd = lognormal_from_mean_cv(self.mean, self.cv)
        pos = y > 0
        yy = np.where(pos, y, 1.0)
        return np.where(pos, norm_cdf((np.log(yy) - mu) / sd), 0.0)


BUCKLING_TABLE = (
    BucklingInput("normal", 23.808, 0.028),
    BucklingInput("lognormal", 0.525, 0.044),
    BucklingInput("lognormal", 44.2, 0.1235),
    BucklingInput("normal", 28623.0, 0.076),
    BucklingInput("normal", 0.35, 0.05),
    BucklingInput("normal", 5.25, 0.07),
)


class BucklingModel:
    """Conditional density of the buckling strength, hiding Y5 or Y6."""

    def __init__(self, hide: int = 6, interval=(0.5169, 0.6511),
                 table: tuple[BucklingInput, ...] = BUCKLING_TABLE):
        if hide not in (5, 6):
            raise ValueError("only Y5 or Y6 can be hidden")
        self.hide = hide
        self.interval = interval
        self.table = table
        self.name = "buckling"
        self.variant = f"g-{hide}"
        self.cde_dim = 5
        self.sample_dim = 6
        self.glr_dim = 6
        self.rejected = 0

    def spec(self) -> ModelSpec:
        return ModelSpec(
            self.name, 5, self.interval, ("g-5", "g-6"),
            frozenset({"cde", "glr", "kde-sample"}),
        )

    def _inputs(self, u: np.ndarray, skip: int) -> list[np.ndarray]:
        """All six inputs, with the hidden one (1-based ``skip``) set to None."""
        vals: list[np.ndarray | None] = [None] * 6
        col = 0
        for k in range(6):
            if k == skip - 1:
                continue
            vals[k] = self.table[k].ppf(u[:, col])
            col += 1
        return vals

    @staticmethod
    def _lam(y1, y2, y3, y4):
        return (y1 / y2) * np.sqrt(y3 / y4)

    def _pieces(self, u: np.ndarray):
        y = self._inputs(u, self.hide)
        lam = self._lam(y[0], y[1], y[2], y[3])
        v1 = 2.1 / lam - 0.9 / lam ** 2
        if self.hide == 5:
            v_other = 1.0 - 2.0 * y[5] * y[1] / y[0]          # V2
            scale = 4.0 * lam / 3.0
        else:
            v_other = 1.0 - 0.75 * y[4] / lam                 # V3
            scale = y[0] / (2.0 * y[1])
        prod = v1 * v_other
        ok = (prod > 0) & (scale > 0) & np.isfinite(prod)
        self.rejected += int((~ok).sum())
        return prod, scale, ok

    def cde_matrix(self, u: np.ndarray, x: np.ndarray) -> np.ndarray:
        prod, scale, ok = self._pieces(u)
        xs = np.asarray(x, dtype=float)
        hidden = self.table[self.hide - 1]
        arg = (1.0 - xs[None, :] / prod[:, None]) * scale[:, None]
        dens = hidden.pdf(arg) * scale[:, None] / prod[:, None]
        return np.where(ok[:, None], dens, 0.0)

    def cdf_matrix(self, u: np.ndarray, x: np.ndarray) -> np.ndarray:
        prod, scale, ok = self._pieces(u)
        xs = np.asarray(x, dtype=float)
        hidden = self.table[self.hide - 1]
        arg = (1.0 - xs[None, :] / prod[:, None]) * scale[:, None]
        return np.where(ok[:, None], 1.0 - hidden.cdf(arg), 0.0)

    def sample_x(self, u: np.ndarray) -> np.ndarray:
        y = [self.table[k].ppf(u[:, k]) for k in range(6)]
        lam = self._lam(y[0], y[1], y[2], y[3])
        v1 = 2.1 / lam - 0.9 / lam ** 2
        return v1 * (1.0 - 0.75 * y[4] / lam) * (1.0 - 2.0 * y[5] * y[1] / y[0])

    def glr_matrix(self, u: np.ndarray, x: np.ndarray) -> np.ndarray:
        """Likelihood-ratio terms for the Y6 direction (normal input)."""
        y = [self.table[k].ppf(u[:, k]) for k in range(6)]
        lam = self._lam(y[0], y[1], y[2], y[3])
        v1 = 2.1 / lam - 0.9 / lam ** 2
        c = v1 * (1.0 - 0.75 * y[4] / lam)
        xs_val = c * (1.0 - 2.0 * y[5] * y[1] / y[0])
        mu6, sd6 = self.table[5].mean, self.table[5].cv * self.table[5].mean
        psi = y[0] * (y[5] - mu6) / (2.0 * c * y[1] * sd6 ** 2)
        return (xs_val[:, None] <= np.asarray(x, dtype=float)[None, :]) * psi[:, None]
