"""Two analytically tractable sum models used as estimator test beds.

Both have known output densities, and the normalized sum of normals also
has a closed form for the per-sample variance of its conditional density
estimator, which makes them the primary correctness oracles of the suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .base import ModelSpec, norm_cdf, norm_pdf, norm_ppf

__all__ = ["SumNormalsModel", "SumUniformsModel", "sum_uniforms_exact_iv"]


@dataclass
class SumNormalsModel:
    """X = (a_1 Z_1 + ... + a_d Z_d)/sigma, standard normal by construction.

    Hiding Z_k leaves a normal conditional law for X given the other terms;
    the model also supplies the likelihood-ratio weight -Z_k sigma / a_k
    and the exact per-sample variance of the conditional density estimate.
    """

    a_vec: tuple[float, ...] = (1.0, 1.0)
    hide: int = 2                     # 1-based index k of the hidden term
    interval: tuple[float, float] = (-2.0, 2.0)

    def __post_init__(self):
        self.a_vec = tuple(float(v) for v in self.a_vec)
        if any(v == 0 for v in self.a_vec):
            raise ValueError("all coefficients must be non-zero")
        if not 1 <= self.hide <= len(self.a_vec):
            raise ValueError("hidden index out of range")
        self.sigma = math.sqrt(sum(v * v for v in self.a_vec))
        self.name = "sum-normals"
        self.variant = f"g-{self.hide}"
        d = len(self.a_vec)
        self.cde_dim = d - 1
        self.sample_dim = d
        self.glr_dim = d

    def spec(self) -> ModelSpec:
        d = len(self.a_vec)
        return ModelSpec(
            self.name, self.cde_dim, self.interval,
            tuple(f"g-{k}" for k in range(1, d + 1)),
            frozenset({"cde", "glr", "kde-sample", "exact-density", "exact-variance"}),
        )

    def _retained_sum(self, u: np.ndarray) -> np.ndarray:
        a = np.array(self.a_vec)
        keep = np.delete(a, self.hide - 1)
        z = norm_ppf(u[:, : self.cde_dim])
        return z @ keep

    def _w(self, u: np.ndarray, x: np.ndarray) -> np.ndarray:
        s_rest = self._retained_sum(u)
        a_k = self.a_vec[self.hide - 1]
        return (x[None, :] * self.sigma - s_rest[:, None]) / a_k

    def cde_matrix(self, u: np.ndarray, x: np.ndarray) -> np.ndarray:
        a_k = self.a_vec[self.hide - 1]
        return norm_pdf(self._w(u, x)) * (self.sigma / abs(a_k))

    def cdf_matrix(self, u: np.ndarray, x: np.ndarray) -> np.ndarray:
        w = self._w(u, x)
        return norm_cdf(w) if self.a_vec[self.hide - 1] > 0 else norm_cdf(-w)

    def sample_x(self, u: np.ndarray) -> np.ndarray:
        z = norm_ppf(u)
        return z @ np.array(self.a_vec) / self.sigma

    def glr_matrix(self, u: np.ndarray, x: np.ndarray) -> np.ndarray:
        z = norm_ppf(u)
        xs = z @ np.array(self.a_vec) / self.sigma
        psi = -z[:, self.hide - 1] * self.sigma / self.a_vec[self.hide - 1]
        return (xs[:, None] <= x[None, :]) * psi[:, None]

    def exact_density(self, x: np.ndarray) -> np.ndarray:
        return norm_pdf(np.asarray(x, dtype=float))

    def exact_cdf(self, x: np.ndarray) -> np.ndarray:
        return norm_cdf(np.asarray(x, dtype=float))

    def exact_cde_variance(self, x) -> np.ndarray | float:
        """Closed-form per-sample variance of the conditional density at x."""
        s2sq = (self.a_vec[self.hide - 1] / self.sigma) ** 2
        s1sq = 1.0 - s2sq
        if s2sq == 0:
            raise ValueError("degenerate hidden coefficient")
        xs = np.asarray(x, dtype=float)
        first = norm_pdf(math.sqrt(2.0) * xs / math.sqrt(1.0 + s1sq)) / (
            math.sqrt(s2sq) * math.sqrt(2.0 * math.pi * (1.0 + s1sq))
        )
        return first - norm_pdf(xs) ** 2


def sum_uniforms_exact_iv(eps: float, hide: int) -> float:
    """Exact one-sample integrated variance over [0, 1+eps]."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0,1)")
    if hide == 1:
        return eps / 3.0
    if hide == 2:
        return 1.0 / eps - 1.0 + eps / 3.0
    raise ValueError("hide must be 1 or 2")


@dataclass
class SumUniformsModel:
    """X = Y_1 + Y_2 with Y_1 ~ U(0,1), Y_2 ~ U(0,eps); indicator-form CDEs.

    Hiding Y_1 leaves the flat density 1[Y_2 <= x <= 1+Y_2]; hiding Y_2 the
    narrow spike 1[Y_1 <= x <= eps+Y_1]/eps.  Their exact one-sample IVs are
    eps/3 and 1/eps - 1 + eps/3, the textbook case for conditioning on
    low-variance information.
    """

    eps: float = 0.75
    hide: int = 1

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0,1)")
        if self.hide not in (1, 2):
            raise ValueError("hide must be 1 or 2")
        self.interval = (0.0, 1.0 + self.eps)
        self.name = "sum-uniforms"
        self.variant = f"g-{self.hide}"
        self.cde_dim = 1
        self.sample_dim = 2

    def spec(self) -> ModelSpec:
        return ModelSpec(
            self.name, 1, self.interval, ("g-1", "g-2"),
            frozenset({"cde", "kde-sample", "exact-density", "exact-iv"}),
        )

    def _retained(self, u: np.ndarray) -> np.ndarray:
        y = u[:, 0]
        return y * self.eps if self.hide == 1 else y  # hide Y1 -> retain Y2

    def cde_matrix(self, u: np.ndarray, x: np.ndarray) -> np.ndarray:
        y = self._retained(u)[:, None]
        xs = x[None, :]
        if self.hide == 1:
            return ((y <= xs) & (xs <= 1.0 + y)).astype(float)
        return ((y <= xs) & (xs <= self.eps + y)).astype(float) / self.eps

    def cdf_matrix(self, u: np.ndarray, x: np.ndarray) -> np.ndarray:
        y = self._retained(u)[:, None]
        xs = x[None, :]
        width = 1.0 if self.hide == 1 else self.eps
        return np.clip((xs - y) / width, 0.0, 1.0)

    def sample_x(self, u: np.ndarray) -> np.ndarray:
        return u[:, 0] + self.eps * u[:, 1]

    def exact_density(self, x) -> np.ndarray:
        xs = np.asarray(x, dtype=float)
        out = np.zeros_like(xs)
        out = np.where((xs >= 0) & (xs <= self.eps), xs / self.eps, out)
        out = np.where((xs > self.eps) & (xs <= 1.0), 1.0, out)
        out = np.where((xs > 1.0) & (xs <= 1.0 + self.eps), (1.0 + self.eps - xs) / self.eps, out)
        return out

    def exact_iv(self) -> float:
        return sum_uniforms_exact_iv(self.eps, self.hide)
