"""Longest source-to-sink path in a stochastic activity network.

The conditioning hides the lengths of the arcs in a uniformly directed
cut: every source-sink path crosses the cut exactly once, so given the
other arcs the longest-path cdf factorizes over the cut arcs and stays
continuous in x.  Arc length distributions are configurable (JSON table);
the bundled default uses normals truncated at 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np
from scipy import stats

from .base import ModelSpec

__all__ = ["ArcDistribution", "SanSpec", "SanModel", "load_san_spec", "default_san_spec"]


@dataclass(frozen=True)
class ArcDistribution:
    """Per-arc length law with cdf/pdf/inverse-cdf, built from a descriptor."""

    kind: str
    params: tuple[float, ...]

    @classmethod
    def from_descriptor(cls, desc: dict) -> "ArcDistribution":
        kind = desc["type"]
        if kind == "normal":          # truncated at 0
            return cls("normal", (float(desc["mu"]), float(desc["sigma"])))
        if kind == "lognormal":
            return cls("lognormal", (float(desc["mu"]), float(desc["sigma"])))
        if kind == "expon":
            return cls("expon", (float(desc["rate"]),))
        raise ValueError(f"unknown arc distribution type {kind!r}")

    def _frozen(self):
        if self.kind == "normal":
            mu, sd = self.params
            return stats.truncnorm(-mu / sd, np.inf, loc=mu, scale=sd)
        if self.kind == "lognormal":
            mu, sd = self.params
            return stats.lognorm(s=sd, scale=np.exp(mu))
        rate, = self.params
        return stats.expon(scale=1.0 / rate)

    def cdf(self, y):
        return self._frozen().cdf(y)

    def pdf(self, y):
        return self._frozen().pdf(y)

    def ppf(self, u):
        return self._frozen().ppf(u)

    def mean(self):
        return float(self._frozen().mean())


@dataclass
class SanSpec:
    """Directed acyclic activity graph with a chosen uniformly directed cut.

    Arcs are (tail, head) node pairs, 0-based nodes; ``cut`` holds 0-based
    arc indices.  Construction validates the DAG, the unique source/sink,
    and the exactly-once cut property by enumerating all paths.
    """

    nodes: int
    arcs: list[tuple[int, int]]
    dists: list[ArcDistribution]
    cut: list[int]

    def __post_init__(self):
        if len(self.arcs) != len(self.dists):
            raise ValueError("one distribution per arc is required")
        heads = {h for _, h in self.arcs}
        tails = {t for t, _ in self.arcs}
        sources = [v for v in range(self.nodes) if v in tails and v not in heads]
        sinks = [v for v in range(self.nodes) if v in heads and v not in tails]
        if len(sources) != 1 or len(sinks) != 1:
            raise ValueError("graph must have a unique source and a unique sink")
        self.source, self.sink = sources[0], sinks[0]
        self.topo = self._topological_order()
        cut_set = set(self.cut)
        for path in self._all_paths():
            hits = sum(1 for a in path if a in cut_set)
            if hits != 1:
                raise ValueError(
                    f"not a uniformly directed cut: path {path} crosses it {hits} times"
                )

    def _topological_order(self) -> list[int]:
        indeg = [0] * self.nodes
        out = [[] for _ in range(self.nodes)]
        for t, h in self.arcs:
            indeg[h] += 1
            out[t].append(h)
        frontier = [v for v in range(self.nodes) if indeg[v] == 0]
        order = []
        while frontier:
            v = frontier.pop()
            order.append(v)
            for h in out[v]:
                indeg[h] -= 1
                if indeg[h] == 0:
                    frontier.append(h)
        if len(order) != self.nodes:
            raise ValueError("graph has a cycle")
        return order

    def _all_paths(self) -> list[list[int]]:
        by_tail: dict[int, list[int]] = {}
        for j, (t, _) in enumerate(self.arcs):
            by_tail.setdefault(t, []).append(j)
        paths = []

        def walk(v, acc):
            if v == self.sink:
                paths.append(list(acc))
                return
            for j in by_tail.get(v, []):
                acc.append(j)
                walk(self.arcs[j][1], acc)
                acc.pop()

        walk(self.source, [])
        return paths

    def longest_path(self, lengths: np.ndarray) -> np.ndarray:
        """Longest source-sink path length; lengths has shape (n, n_arcs)."""
        n = lengths.shape[0]
        neg = -np.inf
        dist = {v: np.full(n, neg) for v in range(self.nodes)}
        dist[self.source] = np.zeros(n)
        arcs_by_tail: dict[int, list[int]] = {}
        for j, (t, _) in enumerate(self.arcs):
            arcs_by_tail.setdefault(t, []).append(j)
        for v in self.topo:
            dv = dist[v]
            for j in arcs_by_tail.get(v, []):
                h = self.arcs[j][1]
                dist[h] = np.maximum(dist[h], dv + lengths[:, j])
        return dist[self.sink]

    def cut_prefix_suffix(self, lengths_rest: np.ndarray) -> np.ndarray:
        """P_j for each cut arc: longest path through arc j, excluding Y_j.

        ``lengths_rest`` has shape (n, n_arcs) with arbitrary values in the
        cut columns (they are never read: paths through a cut arc cannot
        pass through another one).
        """
        n = lengths_rest.shape[0]
        cut_set = set(self.cut)
        use = lengths_rest.copy()
        for j in cut_set:
            use[:, j] = -np.inf
        # forward longest distances from the source
        fwd = {v: np.full(n, -np.inf) for v in range(self.nodes)}
        fwd[self.source] = np.zeros(n)
        by_tail: dict[int, list[int]] = {}
        by_head: dict[int, list[int]] = {}
        for j, (t, h) in enumerate(self.arcs):
            by_tail.setdefault(t, []).append(j)
            by_head.setdefault(h, []).append(j)
        for v in self.topo:
            for j in by_tail.get(v, []):
                if j in cut_set:
                    continue
                h = self.arcs[j][1]
                fwd[h] = np.maximum(fwd[h], fwd[v] + use[:, j])
        # backward longest distances to the sink
        bwd = {v: np.full(n, -np.inf) for v in range(self.nodes)}
        bwd[self.sink] = np.zeros(n)
        for v in reversed(self.topo):
            for j in by_head.get(v, []):
                if j in cut_set:
                    continue
                t = self.arcs[j][0]
                bwd[t] = np.maximum(bwd[t], bwd[v] + use[:, j])
        out = np.empty((n, len(self.cut)))
        for c, j in enumerate(self.cut):
            t, h = self.arcs[j]
            out[:, c] = fwd[t] + bwd[h]
        return out


def load_san_spec(payload: dict) -> SanSpec:
    """Build a SanSpec from the JSON schema {nodes, arcs:[{from,to,dist}], cut}."""
    arcs = [(int(a["from"]), int(a["to"])) for a in payload["arcs"]]
    dists = [ArcDistribution.from_descriptor(a["dist"]) for a in payload["arcs"]]
    cut = [int(j) for j in payload["cut"]]
    return SanSpec(int(payload["nodes"]), arcs, dists, cut)


def default_san_spec() -> SanSpec:
    """The bundled 13-arc network with its 5-arc uniformly directed cut."""
    text = resources.files("condens.data").joinpath("san13.json").read_text()
    return load_san_spec(json.loads(text))


class SanModel:
    """Conditional density of the longest path given the non-cut arcs."""

    def __init__(self, spec: SanSpec | None = None, interval=None):
        self.san = spec if spec is not None else default_san_spec()
        self.name = "san"
        self.variant = "cut"
        d = len(self.san.arcs)
        self.rest = [j for j in range(d) if j not in set(self.san.cut)]
        self.cde_dim = len(self.rest)
        self.sample_dim = d
        self.interval = interval if interval is not None else self._default_interval()

    def spec(self) -> ModelSpec:
        return ModelSpec(
            self.name, self.cde_dim, self.interval, ("cut",),
            frozenset({"cde", "kde-sample"}),
        )

    def _default_interval(self) -> tuple[float, float]:
        """Central 95% range of X, estimated once with a fixed internal seed."""
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(20170906)))
        u = rng.random((2 ** 14, self.sample_dim))
        x = self.sample_x(u)
        lo, hi = np.quantile(x, [0.025, 0.975])
        return (float(lo), float(hi))

    def _lengths_rest(self, u: np.ndarray) -> np.ndarray:
        n = u.shape[0]
        lengths = np.zeros((n, self.sample_dim))
        for c, j in enumerate(self.rest):
            lengths[:, j] = self.san.dists[j].ppf(u[:, c])
        return lengths

    def cut_lengths(self, u: np.ndarray) -> np.ndarray:
        """P_j values for the cut arcs, one row per simulated realization."""
        return self.san.cut_prefix_suffix(self._lengths_rest(u))

    def cde_matrix(self, u: np.ndarray, x: np.ndarray) -> np.ndarray:
        p = self.cut_lengths(u)                      # (n, |cut|)
        xs = np.asarray(x, dtype=float)
        cdfs = np.empty((u.shape[0], len(self.san.cut), xs.size))
        pdfs = np.empty_like(cdfs)
        for c, j in enumerate(self.san.cut):
            arg = xs[None, :] - p[:, c][:, None]
            cdfs[:, c, :] = self.san.dists[j].cdf(arg)
            pdfs[:, c, :] = self.san.dists[j].pdf(arg)
        total = np.zeros((u.shape[0], xs.size))
        for c in range(len(self.san.cut)):
            others = np.prod(np.delete(cdfs, c, axis=1), axis=1)
            total += pdfs[:, c, :] * others
        return total

    def cdf_matrix(self, u: np.ndarray, x: np.ndarray) -> np.ndarray:
        p = self.cut_lengths(u)
        xs = np.asarray(x, dtype=float)
        out = np.ones((u.shape[0], xs.size))
        for c, j in enumerate(self.san.cut):
            out *= self.san.dists[j].cdf(xs[None, :] - p[:, c][:, None])
        return out

    def sample_x(self, u: np.ndarray) -> np.ndarray:
        n = u.shape[0]
        lengths = np.empty((n, self.sample_dim))
        for j in range(self.sample_dim):
            lengths[:, j] = self.san.dists[j].ppf(u[:, j])
        return self.san.longest_path(lengths)
