"""Arithmetic average of a discretely sampled geometric Brownian path.

X = (S_1 + ... + S_s)/s with S_j = S_0 exp(Y_j) and Y_j a Gaussian random
walk.  Two conditionings are provided:

* sequential: hide the last increment Z_s; the conditional law of X given
  the earlier steps is an explicit lognormal-type density.
* bridge: build the path by midpoint conditioning starting from the
  terminal value, then hide the terminal normal Z.  Every Y_j moves with
  Z, so X = gamma(Z) for a strictly increasing per-realization map gamma,
  and the conditional density is phi(z)/gamma'(z) at z = gamma^{-1}(x),
  inverted by warm-started Newton iterations.

Means interpolate by cumulative-drift ratios and variances by the product
formula on cumulative variances; for equal per-step parameters (the
default) this is the exact bridge law, so both conditionings estimate the
same density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .base import ModelSpec, norm_cdf, norm_pdf, norm_ppf

__all__ = ["AsianParams", "AsianSequentialModel", "AsianBridgeModel",
           "GammaEvaluator", "gamma_inverse_newton", "bridge_order"]


@dataclass(frozen=True)
class AsianParams:
    s0: float = 100.0
    steps: int = 12
    mu: float = 0.00771966
    sigma: float = 0.035033
    strike: float = 101.0

    def __post_init__(self):
        if self.steps < 1 or self.sigma <= 0 or self.s0 <= 0:
            raise ValueError("invalid Asian parameters")

    def mu_bar(self, j: int) -> float:
        return self.mu * j

    def var_bar(self, j: int) -> float:
        return self.sigma ** 2 * j


DEFAULT_INTERVAL = (101.0, 128.13)


class AsianSequentialModel:
    """Hide the final increment of the sequentially generated path."""

    def __init__(self, params: AsianParams | None = None, interval=DEFAULT_INTERVAL):
        self.params = params if params is not None else AsianParams()
        self.interval = interval
        self.name = "asian"
        self.variant = "seq"
        self.cde_dim = self.params.steps - 1
        self.sample_dim = self.params.steps

    def spec(self) -> ModelSpec:
        return ModelSpec(
            self.name, self.cde_dim, self.interval, ("seq", "bridge"),
            frozenset({"cde", "kde-sample"}),
        )

    def _partials(self, u: np.ndarray):
        """(sum of S_1..S_{s-1}, Y_{s-1}) from the first s-1 increments."""
        p = self.params
        z = norm_ppf(u[:, : p.steps - 1])
        y = np.cumsum(p.mu + p.sigma * z, axis=1)
        s_partial = p.s0 * np.exp(y)
        return s_partial.sum(axis=1), (y[:, -1] if p.steps > 1 else np.zeros(u.shape[0]))

    def cde_matrix(self, u: np.ndarray, x: np.ndarray) -> np.ndarray:
        p = self.params
        ssum, y_last = self._partials(u)
        xs = np.asarray(x, dtype=float)
        gap = p.steps * xs[None, :] - ssum[:, None]
        pos = gap > 0
        safe = np.where(pos, gap, 1.0)
        w = (np.log(safe / p.s0) - y_last[:, None] - p.mu) / p.sigma
        dens = norm_pdf(w) * p.steps / (safe * p.sigma)
        return np.where(pos, dens, 0.0)

    def cdf_matrix(self, u: np.ndarray, x: np.ndarray) -> np.ndarray:
        p = self.params
        ssum, y_last = self._partials(u)
        xs = np.asarray(x, dtype=float)
        gap = p.steps * xs[None, :] - ssum[:, None]
        pos = gap > 0
        safe = np.where(pos, gap, 1.0)
        w = (np.log(safe / p.s0) - y_last[:, None] - p.mu) / p.sigma
        return np.where(pos, norm_cdf(w), 0.0)

    def sample_x(self, u: np.ndarray) -> np.ndarray:
        p = self.params
        z = norm_ppf(u[:, : p.steps])
        y = np.cumsum(p.mu + p.sigma * z, axis=1)
        return p.s0 * np.exp(y).mean(axis=1)


def bridge_order(steps: int) -> list[tuple[int, int, int]]:
    """Midpoint fill-in order as (left, mid, right) index triples.

    Indices are path positions 0..s with 0 the (deterministic) start and s
    the terminal point; segments split at floor((l+r)/2), left child first.
    """
    order = []
    queue = [(0, steps)]
    while queue:
        left, right = queue.pop(0)
        if right - left <= 1:
            continue
        mid = (left + right) // 2
        order.append((left, mid, right))
        queue.append((left, mid))
        queue.append((mid, right))
    return order


@dataclass
class GammaEvaluator:
    """Per-realization map z -> X of the hidden terminal normal.

    gamma(z) = (S0/s) sum_j exp(y0_j + z c_j) with the baseline path y0
    computed at z = 0 and c_j > 0 the sensitivity of Y_j to z; gamma is
    strictly increasing with gamma'(z) = (S0/s) sum_j c_j exp(...).
    """

    y0: np.ndarray          # (n, s) baseline log-path
    coef: np.ndarray        # (s,) positive sensitivities
    s0: float
    steps: int

    def value(self, z: np.ndarray) -> np.ndarray:
        # far z probes may overflow to inf; the inversion fallback handles it
        with np.errstate(over="ignore"):
            e = np.exp(self.y0 + z[:, None] * self.coef[None, :])
            return self.s0 / self.steps * e.sum(axis=1)

    def slope(self, z: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore"):
            e = np.exp(self.y0 + z[:, None] * self.coef[None, :])
            return self.s0 / self.steps * (e * self.coef[None, :]).sum(axis=1)


def gamma_inverse_newton(ev: GammaEvaluator, x: np.ndarray, z0: np.ndarray,
                         iters: int = 5, tol: float = 1e-9,
                         bracket: float = 12.0) -> np.ndarray:
    """Solve gamma(z) = x per row, warm-started at z0.

    Newton steps are taken first; rows still above tol fall back to
    bisection on [-bracket, bracket].  Raises if x is outside the range of
    gamma over the bracket.
    """
    x = np.asarray(x, dtype=float)
    z = np.asarray(z0, dtype=float).copy()
    target = tol * np.maximum(1.0, np.abs(x))
    with np.errstate(invalid="ignore"):    # inf/inf on far-out probes -> NaN -> fallback
        for _ in range(iters):
            step = (ev.value(z) - x) / ev.slope(z)
            z = z - step
            if np.all(np.abs(step) <= 1e-14 * np.maximum(1.0, np.abs(z))):
                break
    r = np.abs(ev.value(z) - x)
    if np.all(r <= target):
        return z
    bad = ~(r <= target)          # catches NaN as well
    if not np.any(bad):
        return z
    lo = np.full(bad.sum(), -bracket)
    hi = np.full(bad.sum(), bracket)
    ev_bad = GammaEvaluator(ev.y0[bad], ev.coef, ev.s0, ev.steps)
    xb = x[bad] if x.ndim else np.full(bad.sum(), float(x))
    if np.any(ev_bad.value(lo) > xb) or np.any(ev_bad.value(hi) < xb):
        raise ValueError("x outside the range of gamma on the working bracket")
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        above = ev_bad.value(mid) >= xb
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    z[bad] = 0.5 * (lo + hi)
    return z


class AsianBridgeModel:
    """Hide the terminal normal of the midpoint-bridge construction."""

    def __init__(self, params: AsianParams | None = None, interval=DEFAULT_INTERVAL,
                 newton_iters: int = 5):
        self.params = params if params is not None else AsianParams()
        if self.params.mu <= 0:
            raise ValueError("bridge interpolation requires positive cumulative drift")
        self.interval = interval
        self.newton_iters = newton_iters
        self.name = "asian"
        self.variant = "bridge"
        self.cde_dim = self.params.steps - 1
        self.sample_dim = self.params.steps
        self._order = bridge_order(self.params.steps)

    def spec(self) -> ModelSpec:
        return ModelSpec(
            self.name, self.cde_dim, self.interval, ("seq", "bridge"),
            frozenset({"cde", "kde-sample"}),
        )

    def _baseline_paths(self, u: np.ndarray, z_terminal: np.ndarray) -> np.ndarray:
        """Path log-values (n, s) with the terminal normal fixed at z_terminal."""
        p = self.params
        n = u.shape[0]
        y = np.zeros((n, p.steps + 1))
        mub = np.array([p.mu_bar(j) for j in range(p.steps + 1)])
        varb = np.array([p.var_bar(j) for j in range(p.steps + 1)])
        y[:, p.steps] = mub[p.steps] + math.sqrt(varb[p.steps]) * z_terminal
        for col, (l, m, r) in enumerate(self._order):
            w = (mub[m] - mub[l]) / (mub[r] - mub[l])
            cvar = (varb[m] - varb[l]) * (varb[r] - varb[m]) / (varb[r] - varb[l])
            z = norm_ppf(u[:, col])
            y[:, m] = y[:, l] + w * (y[:, r] - y[:, l]) + math.sqrt(cvar) * z
        return y[:, 1:]

    def gamma_evaluator(self, u: np.ndarray) -> GammaEvaluator:
        """Per-realization gamma from the s-1 midpoint uniforms."""
        p = self.params
        y0 = self._baseline_paths(u, np.zeros(u.shape[0]))
        mub_s = p.mu_bar(p.steps)
        coef = np.array([
            p.mu_bar(j) / mub_s * math.sqrt(p.var_bar(p.steps))
            for j in range(1, p.steps + 1)
        ])
        return GammaEvaluator(y0=y0, coef=coef, s0=p.s0, steps=p.steps)

    def _invert_grid(self, ev: GammaEvaluator, x: np.ndarray) -> np.ndarray:
        """z-roots for every (realization, sorted grid point), warm-started."""
        xs = np.asarray(x, dtype=float)
        n = ev.y0.shape[0]
        z = np.empty((n, xs.size))
        x_star = ev.value(np.zeros(n))
        j_star = np.searchsorted(xs, np.median(x_star))
        j_star = min(max(j_star, 0), xs.size - 1)
        z[:, j_star] = gamma_inverse_newton(
            ev, np.full(n, xs[j_star]), np.zeros(n), self.newton_iters)
        for j in range(j_star + 1, xs.size):
            z[:, j] = gamma_inverse_newton(
                ev, np.full(n, xs[j]), z[:, j - 1], self.newton_iters)
        for j in range(j_star - 1, -1, -1):
            z[:, j] = gamma_inverse_newton(
                ev, np.full(n, xs[j]), z[:, j + 1], self.newton_iters)
        return z

    def cde_matrix(self, u: np.ndarray, x: np.ndarray) -> np.ndarray:
        ev = self.gamma_evaluator(u)
        z = self._invert_grid(ev, x)
        out = np.empty_like(z)
        for j in range(z.shape[1]):
            out[:, j] = norm_pdf(z[:, j]) / ev.slope(z[:, j])
        return out

    def cdf_matrix(self, u: np.ndarray, x: np.ndarray) -> np.ndarray:
        ev = self.gamma_evaluator(u)
        z = self._invert_grid(ev, x)
        return norm_cdf(z)

    def sample_x(self, u: np.ndarray) -> np.ndarray:
        """Full bridge simulation (terminal normal from the last coordinate)."""
        p = self.params
        z_term = norm_ppf(u[:, p.steps - 1])
        y = self._baseline_paths(u[:, : p.steps - 1], z_term)
        return p.s0 / p.steps * np.exp(y).sum(axis=1)
