"""Cantilever beam displacement under random modulus and loads.

X = (kappa / Y1) sqrt(Y2^2/w^4 + Y3^2/t^4) with independent normal inputs.
Each input can be hidden in turn, giving three conditional density
estimators with very different spikiness, plus per-input likelihood-ratio
weights for the GLR estimator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import ModelSpec, norm_cdf, norm_pdf, norm_ppf

__all__ = ["CantileverModel", "CANTILEVER_DEFAULTS"]

CANTILEVER_DEFAULTS = dict(
    ell=100.0, w=4.0, t=2.0,
    mu=(2.9e7, 500.0, 1000.0),
    sd=(1.45e6, 100.0, 100.0),
)


@dataclass
class CantileverModel:
    hide: int = 3                     # which Y_k the conditioning removes
    interval: tuple[float, float] = (3.1707, 5.6675)
    mu: tuple[float, float, float] = CANTILEVER_DEFAULTS["mu"]
    sd: tuple[float, float, float] = CANTILEVER_DEFAULTS["sd"]
    ell: float = CANTILEVER_DEFAULTS["ell"]
    w: float = CANTILEVER_DEFAULTS["w"]
    t: float = CANTILEVER_DEFAULTS["t"]

    def __post_init__(self):
        if self.hide not in (1, 2, 3):
            raise ValueError("hide must be 1, 2 or 3")
        self.kappa = 4.0 * self.ell ** 3 / (self.w * self.t)
        self.name = "cantilever"
        self.variant = f"g-{self.hide}"
        self.cde_dim = 2
        self.sample_dim = 3
        self.glr_dim = 3

    def spec(self) -> ModelSpec:
        return ModelSpec(
            self.name, 2, self.interval, ("g-1", "g-2", "g-3"),
            frozenset({"cde", "glr", "kde-sample"}),
        )

    # -- simulation -------------------------------------------------------

    def _retained(self, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """The two kept inputs, sampled by inversion, in index order."""
        idx = [k for k in range(3) if k != self.hide - 1]
        ya = self.mu[idx[0]] + self.sd[idx[0]] * norm_ppf(u[:, 0])
        yb = self.mu[idx[1]] + self.sd[idx[1]] * norm_ppf(u[:, 1])
        return ya, yb

    def deflection(self, y: np.ndarray) -> np.ndarray:
        """h(Y) for full samples y of shape (n, 3)."""
        s = y[:, 1] ** 2 / self.w ** 4 + y[:, 2] ** 2 / self.t ** 4
        return self.kappa / y[:, 0] * np.sqrt(s)

    def sample_x(self, u: np.ndarray) -> np.ndarray:
        y = np.array(self.mu)[None, :] + np.array(self.sd)[None, :] * norm_ppf(u[:, :3])
        return self.deflection(y)

    # -- conditional density ----------------------------------------------

    def cde_matrix(self, u: np.ndarray, x: np.ndarray) -> np.ndarray:
        xs = np.asarray(x, dtype=float)[None, :]
        ya, yb = self._retained(u)
        if self.hide == 1:
            root = np.sqrt(ya[:, None] ** 2 / self.w ** 4 + yb[:, None] ** 2 / self.t ** 4)
            w1 = self.kappa / xs * root
            return norm_pdf((w1 - self.mu[0]) / self.sd[0]) * w1 / (xs * self.sd[0])
        y1 = ya[:, None]
        if self.hide == 2:
            other, pw, mu_k, sd_k = yb[:, None], self.w ** 4, self.mu[1], self.sd[1]
            wk = pw * ((xs * y1 / self.kappa) ** 2 - other ** 2 / self.t ** 4)
        else:
            other, pw, mu_k, sd_k = yb[:, None], self.t ** 4, self.mu[2], self.sd[2]
            wk = pw * ((xs * y1 / self.kappa) ** 2 - other ** 2 / self.w ** 4)
        pos = wk > 0
        rt = np.sqrt(np.where(pos, wk, 1.0))
        dens = (
            (norm_pdf((rt - mu_k) / sd_k) + norm_pdf((rt + mu_k) / sd_k))
            * pw * xs * (y1 / self.kappa) ** 2 / (sd_k * rt)
        )
        return np.where(pos, dens, 0.0)

    def cdf_matrix(self, u: np.ndarray, x: np.ndarray) -> np.ndarray:
        xs = np.asarray(x, dtype=float)[None, :]
        ya, yb = self._retained(u)
        if self.hide == 1:
            root = np.sqrt(ya[:, None] ** 2 / self.w ** 4 + yb[:, None] ** 2 / self.t ** 4)
            w1 = self.kappa / xs * root
            return 1.0 - norm_cdf((w1 - self.mu[0]) / self.sd[0])
        y1 = ya[:, None]
        if self.hide == 2:
            other, pw, mu_k, sd_k = yb[:, None], self.w ** 4, self.mu[1], self.sd[1]
            wk = pw * ((xs * y1 / self.kappa) ** 2 - other ** 2 / self.t ** 4)
        else:
            other, pw, mu_k, sd_k = yb[:, None], self.t ** 4, self.mu[2], self.sd[2]
            wk = pw * ((xs * y1 / self.kappa) ** 2 - other ** 2 / self.w ** 4)
        pos = wk > 0
        rt = np.sqrt(np.where(pos, wk, 1.0))
        cdf = norm_cdf((rt - mu_k) / sd_k) - norm_cdf(-(rt + mu_k) / sd_k)
        return np.where(pos, cdf, 0.0)

    # -- likelihood-ratio terms ---------------------------------------------

    def glr_matrix(self, u: np.ndarray, x: np.ndarray) -> np.ndarray:
        y = np.array(self.mu)[None, :] + np.array(self.sd)[None, :] * norm_ppf(u[:, :3])
        h = self.deflection(y)
        if np.any(h == 0) or np.any(y[:, 1] == 0) or np.any(y[:, 2] == 0):
            raise FloatingPointError("degenerate draw (h or load exactly zero)")
        z = (y - np.array(self.mu)[None, :]) / np.array(self.sd)[None, :] ** 2
        s = y[:, 1] ** 2 / self.w ** 4 + y[:, 2] ** 2 / self.t ** 4
        j = self.hide
        if j == 1:
            psi = (y[:, 0] * z[:, 0] - 2.0) / h
        elif j == 2:
            psi = -(y[:, 1] * z[:, 1] * s + y[:, 2] ** 2 / self.t ** 4) / (h * y[:, 1] ** 2 / self.w ** 4)
        else:
            psi = -(y[:, 2] * z[:, 2] * s + y[:, 1] ** 2 / self.w ** 4) / (h * y[:, 2] ** 2 / self.t ** 4)
        return (h[:, None] <= np.asarray(x, dtype=float)[None, :]) * psi[:, None]
