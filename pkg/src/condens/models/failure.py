"""Failure time of a multicomponent system with exponential lifetimes.

Components fail one by one; the system dies at the C-th failure, where the
critical number C depends only on the failure order pi through a monotone
structure function.  Conditioning on pi (hiding the actual times) leaves a
hypoexponential law with rates Lambda_1 > ... > Lambda_C, where Lambda_1
is the total rate and each failure removes the failed component's rate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..hypoexp import hypoexp_cdf, hypoexp_density
from .base import ModelSpec
from .san import SanSpec, default_san_spec

__all__ = ["FailureSpec", "FailureModel", "connectivity_structure",
           "series_structure", "parallel_structure"]


def series_structure(states: np.ndarray) -> np.ndarray:
    return states.all(axis=-1)


def parallel_structure(states: np.ndarray) -> np.ndarray:
    return states.any(axis=-1)


def connectivity_structure(san: SanSpec) -> Callable[[np.ndarray], np.ndarray]:
    """System up iff a source-sink path of up arcs exists in the graph."""

    def phi(states: np.ndarray) -> np.ndarray:
        states = np.atleast_2d(states)
        n = states.shape[0]
        reach = {v: np.zeros(n, dtype=bool) for v in range(san.nodes)}
        reach[san.source] = np.ones(n, dtype=bool)
        by_tail: dict[int, list[int]] = {}
        for j, (t, _) in enumerate(san.arcs):
            by_tail.setdefault(t, []).append(j)
        for v in san.topo:
            for j in by_tail.get(v, []):
                h = san.arcs[j][1]
                reach[h] |= reach[v] & states[:, j]
        return reach[san.sink]

    return phi


@dataclass
class FailureSpec:
    """Component rates plus a monotone structure function on {0,1}^d."""

    rates: tuple[float, ...]
    structure: Callable[[np.ndarray], np.ndarray]

    def __post_init__(self):
        self.rates = tuple(float(r) for r in self.rates)
        if any(r <= 0 for r in self.rates):
            raise ValueError("rates must be positive")
        d = len(self.rates)
        up = np.ones((1, d), dtype=bool)
        down = np.zeros((1, d), dtype=bool)
        if not bool(self.structure(up)[0]):
            raise ValueError("structure function must be up with all components up")
        if bool(self.structure(down)[0]):
            raise ValueError("structure function never fails: down state is up")
        self._spot_check_monotone()

    def _spot_check_monotone(self, trials: int = 64):
        d = len(self.rates)
        rng = np.random.Generator(np.random.PCG64(12345))
        lower = rng.random((trials, d)) < 0.5
        upper = lower | (rng.random((trials, d)) < 0.5)
        if np.any(self.structure(lower) & ~self.structure(upper)):
            raise ValueError("structure function is not monotone")

    def critical_numbers(self, perms: np.ndarray) -> np.ndarray:
        """C(pi) per row: failures, in pi order, until the system is down.

        Computed by the reverse resurrection scan (restore components from
        the last failure backwards until the system comes up), which visits
        each component once.
        """
        perms = np.atleast_2d(perms)
        n, d = perms.shape
        states = np.zeros((n, d), dtype=bool)
        c = np.full(n, d, dtype=np.int64)
        rows = np.arange(n)
        down = ~self.structure(states)              # all-failed: down everywhere
        for k in range(d - 1, -1, -1):
            states[rows, perms[:, k]] = True
            nowup = self.structure(states)
            # up with k failures but down with k+1: the (k+1)-th failure killed it
            c[nowup & down] = k + 1
            down &= ~nowup
        if np.any(down):
            raise AssertionError("structure function inconsistent with all-up check")
        return c

    def forward_critical_numbers(self, perms: np.ndarray) -> np.ndarray:
        """C(pi) by the direct forward scan (used to cross-check the reverse one)."""
        perms = np.atleast_2d(perms)
        n, d = perms.shape
        states = np.ones((n, d), dtype=bool)
        c = np.zeros(n, dtype=np.int64)
        alive = np.ones(n, dtype=bool)
        rows = np.arange(n)
        for k in range(d):
            states[rows, perms[:, k]] = False
            down = ~self.structure(states)
            newly = down & alive
            c[newly] = k + 1
            alive &= ~down
        return c


class FailureModel:
    """Conditional (hypoexponential) density of the system failure time."""

    def __init__(self, spec: FailureSpec | None = None,
                 interval: tuple[float, float] = (1e-9, 1.829)):
        if spec is None:
            spec = FailureSpec(
                rates=(1.0,) * 13, structure=connectivity_structure(default_san_spec())
            )
        self.fspec = spec
        self.interval = interval
        self.name = "failure"
        self.variant = "order"
        d = len(spec.rates)
        self.cde_dim = d
        self.sample_dim = d

    def spec(self) -> ModelSpec:
        return ModelSpec(
            self.name, self.cde_dim, self.interval, ("order",),
            frozenset({"cde", "kde-sample"}),
        )

    def simulate_order(self, u: np.ndarray):
        """(pi, C, Lambda-rows) for each sample of lifetimes by inversion."""
        rates = np.array(self.fspec.rates)
        y = -np.log1p(-u[:, : rates.size]) / rates[None, :]
        perms = np.argsort(y, axis=1)
        c = self.fspec.critical_numbers(perms)
        lam_removed = np.take(rates, perms)                 # rate removed at each step
        lam = np.empty_like(lam_removed)
        lam[:, 0] = rates.sum()
        lam[:, 1:] = rates.sum() - np.cumsum(lam_removed[:, :-1], axis=1)
        return perms, c, lam

    def _per_sample(self, u, x, fn):
        xs = np.asarray(x, dtype=float)
        perms, c, lam = self.simulate_order(u)
        out = np.empty((u.shape[0], xs.size))
        # group identical (C, Lambda-prefix) rows; with equal rates this
        # collapses to one evaluation per distinct C
        keys = {}
        for i in range(u.shape[0]):
            key = (int(c[i]), lam[i, : c[i]].tobytes())
            got = keys.get(key)
            if got is None:
                got = fn(lam[i, : c[i]], xs)
                keys[key] = got
            out[i] = got
        return out

    def cde_matrix(self, u: np.ndarray, x: np.ndarray) -> np.ndarray:
        return self._per_sample(u, x, hypoexp_density)

    def cdf_matrix(self, u: np.ndarray, x: np.ndarray) -> np.ndarray:
        return self._per_sample(u, x, hypoexp_cdf)

    def sample_x(self, u: np.ndarray) -> np.ndarray:
        rates = np.array(self.fspec.rates)
        y = -np.log1p(-u[:, : rates.size]) / rates[None, :]
        order = np.sort(y, axis=1)
        perms = np.argsort(y, axis=1)
        c = self.fspec.critical_numbers(perms)
        return order[np.arange(u.shape[0]), c - 1]
