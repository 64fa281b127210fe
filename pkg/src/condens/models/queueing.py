"""Waiting-time density in a single-server FIFO queue.

Waiting times follow the Lindley recurrence W_j = max(0, W_{j-1} + S_{j-1}
- A_j).  Hiding the previous service time smooths each indicator
1[W_j <= x] into G(x + A_j - W_{j-1}), giving a continuous per-customer
density term g(x + A_j - W_{j-1}); the day (or cycle) total D(x) over a
renewal-reward ratio estimates the waiting-time density.  The sum starts
at the second customer: the first always finds the system empty, so its
waiting time is the point mass at zero and contributes no density term.

Two regimes: independent days of fixed horizon tau (arrivals stop at tau,
service runs on), and steady-state regenerative cycles delimited by
arrivals to an empty system.  Input dimension is random and unbounded;
coordinates are consumed per customer in the order A_1, S_1, A_2, S_2, ...
(cycles skip the inert A_1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..pointsets import RandomizedPointSet
from .base import ModelSpec, norm_cdf, norm_pdf, norm_ppf

__all__ = ["QueueParams", "QueueBatch", "QueueModel"]

_MAX_CUSTOMERS = 4096  # safety stop for the lazy-coordinate loop


@dataclass(frozen=True)
class QueueParams:
    """Poisson(rate) arrivals, lognormal(mu, sigma2) services."""

    rate: float = 1.0
    mu: float = -0.7
    sigma2: float = 0.4
    horizon: float = 60.0
    regenerative: bool = False

    def __post_init__(self):
        if self.rate <= 0 or self.sigma2 <= 0:
            raise ValueError("rate and sigma2 must be positive")

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    def service_pdf(self, v):
        v = np.asarray(v, dtype=float)
        out = np.zeros_like(v)
        pos = v > 0
        vv = np.where(pos, v, 1.0)
        out[pos] = (norm_pdf((np.log(vv) - self.mu) / self.sigma) / (vv * self.sigma))[pos]
        return out

    def service_cdf(self, v):
        v = np.asarray(v, dtype=float)
        pos = v > 0
        vv = np.where(pos, v, 1.0)
        return np.where(pos, norm_cdf((np.log(vv) - self.mu) / self.sigma), 0.0)


@dataclass
class QueueBatch:
    """Vectorized trajectories of n days (or cycles).

    ``count`` is the number of customers per day; ``c_terms``/``w``/``s_prev``
    hold A_j - W_{j-1}, W_j and S_{j-1} for customers j = 2..count, stored
    as (n, J) arrays with ``active`` masking real entries.
    """

    count: np.ndarray
    c_terms: np.ndarray
    w: np.ndarray
    s_prev: np.ndarray
    active: np.ndarray

    def flat_terms(self):
        """Active per-customer records grouped by day, for segment sums.

        Returns (c, w, s, starts) where the first three are 1-D arrays in
        day-major order and ``starts`` has one segment start per day plus a
        terminal sentinel.
        """
        mask = self.active
        counts = mask.sum(axis=1)
        starts = np.concatenate([[0], np.cumsum(counts)])
        return self.c_terms[mask], self.w[mask], self.s_prev[mask], starts


def _segmented_apply(row_block, starts: np.ndarray, n_e: int,
                     rows_per_chunk: int = 200_000) -> np.ndarray:
    """Per-day sums of row_block(lo, hi) rows, chunked on day boundaries.

    ``row_block(lo, hi)`` returns the (hi-lo, n_e) values for flat rows
    [lo, hi); days are contiguous row segments delimited by ``starts``.
    """
    n_days = starts.size - 1
    out = np.zeros((n_days, n_e))
    d0 = 0
    while d0 < n_days:
        d1 = d0 + 1
        while d1 < n_days and starts[d1 + 1] - starts[d0] <= rows_per_chunk:
            d1 += 1
        lo, hi = int(starts[d0]), int(starts[d1])
        if hi > lo:
            block = row_block(lo, hi)
            local = (starts[d0:d1] - lo).clip(max=hi - lo - 1)
            sums = np.add.reduceat(block, local, axis=0)
            nonempty = starts[d0:d1] < starts[d0 + 1:d1 + 1]
            out[d0:d1][nonempty] = sums[nonempty]
        d0 = d1
    return out


class QueueModel:
    """Density of a random customer's waiting time over (0, b]."""

    def __init__(self, params: QueueParams | None = None,
                 interval: tuple[float, float] = (0.0, 2.2)):
        self.params = params if params is not None else QueueParams()
        self.interval = interval
        self.name = "queue"
        self.variant = "regen" if self.params.regenerative else "day"
        self.cde_dim = None          # unbounded
        self.sample_dim = None
        self.is_ratio = True

    def spec(self) -> ModelSpec:
        return ModelSpec(
            self.name, None, self.interval, ("day", "regen"),
            frozenset({"cde", "glr", "ratio"}),
        )

    @property
    def known_mean_count(self) -> float | None:
        """E[N] when it is known exactly (Poisson arrivals, finite horizon)."""
        if self.params.regenerative:
            return None
        return self.params.rate * self.params.horizon

    # -- trajectory simulation ---------------------------------------------

    def simulate(self, pts: RandomizedPointSet) -> QueueBatch:
        return self._simulate_cycles(pts) if self.params.regenerative else self._simulate_days(pts)

    def _inv_arrival(self, u: np.ndarray) -> np.ndarray:
        return -np.log1p(-u) / self.params.rate

    def _inv_service(self, u: np.ndarray) -> np.ndarray:
        return np.exp(self.params.mu + self.params.sigma * norm_ppf(u))

    def _simulate_days(self, pts: RandomizedPointSet) -> QueueBatch:
        p, n = self.params, pts.n
        t = self._inv_arrival(pts.column(0))        # arrival of customer 1
        arrived = t < p.horizon
        count = arrived.astype(np.int64)
        w_prev = np.zeros(n)
        c_cols, w_cols, s_cols, a_cols = [], [], [], []
        j, col = 2, 1
        while np.any(arrived) and j <= _MAX_CUSTOMERS:
            s_prev = self._inv_service(pts.column(col))
            a_j = self._inv_arrival(pts.column(col + 1))
            col += 2
            t = t + a_j
            now = arrived & (t < p.horizon)
            c = a_j - w_prev
            w_j = np.maximum(0.0, w_prev + s_prev - a_j)
            count += now
            c_cols.append(np.where(now, c, 0.0))
            w_cols.append(np.where(now, w_j, 0.0))
            s_cols.append(np.where(now, s_prev, 1.0))
            a_cols.append(now)
            w_prev = np.where(now, w_j, w_prev)
            arrived = now
            j += 1
        return QueueBatch(
            count=count,
            c_terms=np.column_stack(c_cols) if c_cols else np.zeros((n, 0)),
            w=np.column_stack(w_cols) if w_cols else np.zeros((n, 0)),
            s_prev=np.column_stack(s_cols) if s_cols else np.ones((n, 0)),
            active=np.column_stack(a_cols) if a_cols else np.zeros((n, 0), bool),
        )

    def _simulate_cycles(self, pts: RandomizedPointSet) -> QueueBatch:
        """One regenerative cycle per point: customers until W returns to 0."""
        p, n = self.params, pts.n
        count = np.ones(n, dtype=np.int64)          # customer 1 opens the cycle
        w_prev = np.zeros(n)
        open_ = np.ones(n, dtype=bool)
        c_cols, w_cols, s_cols, a_cols = [], [], [], []
        col = 0
        while np.any(open_) and col // 2 <= _MAX_CUSTOMERS:
            s_prev = self._inv_service(pts.column(col))
            a_j = self._inv_arrival(pts.column(col + 1))
            col += 2
            c = a_j - w_prev
            w_j = np.maximum(0.0, w_prev + s_prev - a_j)
            in_cycle = open_ & (w_j > 0.0)
            count += in_cycle
            c_cols.append(np.where(in_cycle, c, 0.0))
            w_cols.append(np.where(in_cycle, w_j, 0.0))
            s_cols.append(np.where(in_cycle, s_prev, 1.0))
            a_cols.append(in_cycle)
            w_prev = np.where(in_cycle, w_j, w_prev)
            open_ = in_cycle
        return QueueBatch(
            count=count,
            c_terms=np.column_stack(c_cols) if c_cols else np.zeros((n, 0)),
            w=np.column_stack(w_cols) if w_cols else np.zeros((n, 0)),
            s_prev=np.column_stack(s_cols) if s_cols else np.ones((n, 0)),
            active=np.column_stack(a_cols) if a_cols else np.zeros((n, 0), bool),
        )

    # -- estimators ----------------------------------------------------------

    def cde_day_matrix(self, batch: QueueBatch, x: np.ndarray) -> np.ndarray:
        """Per-day D(x) = sum over customers j>=2 of g(x + A_j - W_{j-1})."""
        xs = np.asarray(x, dtype=float)
        c, _, _, starts = batch.flat_terms()
        mu, sig = self.params.mu, self.params.sigma
        inv_norm = 1.0 / (sig * math.sqrt(2.0 * math.pi))

        def block(lo, hi):
            v = xs[None, :] + c[lo:hi][:, None]
            np.maximum(v, 1e-300, out=v)        # log of non-positive gaps -> huge t
            t = np.log(v)
            t -= mu
            t /= sig
            t *= t
            t *= -0.5
            np.exp(t, out=t)
            t /= v
            t *= inv_norm
            return t

        return _segmented_apply(block, starts, xs.size)

    def zero_mass(self, batch: QueueBatch) -> np.ndarray:
        """Per-day conditional mass at W = 0, including customer 1's unit mass."""
        c, _, _, starts = batch.flat_terms()
        vals = self.params.service_cdf(c)[:, None]
        mass = _segmented_apply(lambda lo, hi: vals[lo:hi], starts, 1)[:, 0]
        return mass + np.where(batch.count >= 1, 1.0, 0.0)

    def glr_day_matrix(self, batch: QueueBatch, x: np.ndarray) -> np.ndarray:
        """Per-day L(x) = sum over customers j>=2 of 1[W_j <= x] Psi_j."""
        xs = np.asarray(x, dtype=float)
        _, w, s, starts = batch.flat_terms()
        sig = self.params.sigma
        z = (np.log(s) - self.params.mu) / sig
        psi = -(z + sig) / (s * sig)

        def block(lo, hi):
            return (w[lo:hi][:, None] <= xs[None, :]) * psi[lo:hi][:, None]

        return _segmented_apply(block, starts, xs.size)
