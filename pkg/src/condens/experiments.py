"""Experiment harness: estimator x model x point-set sweeps.

Runs the replication protocol (independent randomizations of one point
set per n), measures integrated variance (or MISE for biased estimators),
fits the log-log convergence rate, and persists results as CSV plus a
JSON sidecar for metadata that does not fit the fixed CSV schema.
Replications are merged in replication-index order, so results depend
only on (config, seed).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .estimators import (
    combine_rows,
    fit_combo_weights,
    kde_bandwidth,
    kde_estimate,
    KdeSpec,
)
from .merit import korobov_parameter
from .models import combo_columns, default_merit_rho, make_model
from .pointsets import (
    baker_transform,
    mc_points,
    rank1_lattice,
    random_shift,
    sobol_lms_shift,
)
from .rng import UniformStream

__all__ = [
    "EvaluationGrid", "ExperimentConfig", "IvCurve",
    "build_grid", "estimate_iv", "estimate_mise", "fit_rate",
    "run_experiment", "write_results", "write_density", "read_config",
    "POINTSET_KINDS", "ESTIMATORS",
]

POINTSET_KINDS = ("mc", "lat-s", "lat-s-b", "sobol-lms")
ESTIMATORS = ("cde", "kde", "glrde", "cde-combo")

RESULTS_COLUMNS = [
    "model", "variant", "estimator", "pointset", "n", "n_r", "n_e",
    "a", "b", "iv", "iv_stderr", "nu_hat", "k_hat", "e19", "seed",
]


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


@dataclass(frozen=True)
class EvaluationGrid:
    """Stratified evaluation points: one uniform draw per subinterval."""

    a: float
    b: float
    e: np.ndarray

    @property
    def n_e(self) -> int:
        return self.e.size

    @property
    def width(self) -> float:
        return self.b - self.a


def build_grid(a: float, b: float, n_e: int, stream: UniformStream) -> EvaluationGrid:
    if not a < b:
        raise ValueError("grid interval requires a < b")
    if n_e < 1:
        raise ValueError("n_e must be >= 1")
    j = np.arange(n_e)
    e = a + (j + stream.uniforms(n_e)) * (b - a) / n_e
    return EvaluationGrid(a=a, b=b, e=e)


def estimate_iv(per_rep: np.ndarray, grid: EvaluationGrid) -> tuple[float, float]:
    """Integrated variance across replications, with a jackknife std. error.

    per_rep has shape (n_r, n_e): one density-estimate row per replication.
    """
    per_rep = np.asarray(per_rep, dtype=float)
    n_r = per_rep.shape[0]
    if n_r < 2:
        raise ValueError("at least two replications are required")
    pt_var = per_rep.var(axis=0, ddof=1)
    iv = grid.width / grid.n_e * pt_var.sum()
    if n_r == 2:
        return float(iv), float("nan")  # leave-one-out needs >= 3 reps
    # leave-one-out IVs from running sums
    s1 = per_rep.sum(axis=0)
    s2 = (per_rep ** 2).sum(axis=0)
    loo = np.empty(n_r)
    m = n_r - 1
    for r in range(n_r):
        s1r = s1 - per_rep[r]
        s2r = s2 - per_rep[r] ** 2
        var_r = (s2r - s1r ** 2 / m) / (m - 1)
        loo[r] = grid.width / grid.n_e * var_r.sum()
    se = math.sqrt(max((n_r - 1) / n_r * ((loo - loo.mean()) ** 2).sum(), 0.0))
    return float(iv), se


def estimate_mise(per_rep: np.ndarray, grid: EvaluationGrid,
                  reference: np.ndarray) -> tuple[float, float]:
    """Empirical MISE against a reference density on the grid (+ jackknife se)."""
    per_rep = np.asarray(per_rep, dtype=float)
    ref = np.asarray(reference, dtype=float)
    if ref.shape != (grid.n_e,):
        raise ValueError("reference density must be evaluated on the grid")
    sq = (per_rep - ref[None, :]) ** 2
    per_rep_mise = grid.width / grid.n_e * sq.sum(axis=1)
    mise = float(per_rep_mise.mean())
    n_r = per_rep.shape[0]
    if n_r < 2:
        return mise, float("nan")
    loo = (per_rep_mise.sum() - per_rep_mise) / (n_r - 1)
    se = math.sqrt((n_r - 1) / n_r * ((loo - loo.mean()) ** 2).sum())
    return mise, se


def fit_rate(pairs) -> tuple[float, float, float, bool]:
    """Fit v ~ K n^(-nu) by least squares in log2-log2 scale.

    Returns (nu_hat, k_hat, e19, extrapolated): e19 is the measured
    -log2 v at n = 2^19 when that n was run, and the model-extrapolated
    value (flagged) otherwise.
    """
    pairs = [(int(n), float(v)) for n, v in pairs]
    if len({n for n, _ in pairs}) < 2:
        raise ValueError("rate fit needs at least two distinct n values")
    ln = np.log2([n for n, _ in pairs])
    lv = np.log2([v for _, v in pairs])
    slope, intercept = np.polyfit(ln, lv, 1)
    nu = -float(slope)
    log2k = float(intercept)
    measured = {n: v for n, v in pairs}
    if 2 ** 19 in measured:
        return nu, 2.0 ** log2k, -math.log2(measured[2 ** 19]), False
    return nu, 2.0 ** log2k, -(log2k - 19.0 * nu), True


@dataclass
class ExperimentConfig:
    model: str
    estimator: str = "cde"
    variant: str | None = None
    pointset: str = "mc"
    n_list: tuple[int, ...] = (2 ** 10, 2 ** 11, 2 ** 12, 2 ** 13, 2 ** 14, 2 ** 15)
    n_r: int = 50
    n_e: int = 128
    seed: int = 12345
    interval: tuple[float, float] | None = None
    model_params: dict = field(default_factory=dict)
    korobov_a: dict | None = None      # optional {n: a} overrides
    merit_rho: float | None = None
    out: str | None = None

    def __post_init__(self):
        if self.estimator not in ESTIMATORS:
            raise ValueError(
                f"unknown estimator {self.estimator!r}; options: {', '.join(ESTIMATORS)}"
            )
        if self.pointset not in POINTSET_KINDS:
            raise ValueError(
                f"unknown point set {self.pointset!r}; options: {', '.join(POINTSET_KINDS)}"
            )
        if self.n_r < 2:
            raise ValueError("n_r must be >= 2")
        for n in self.n_list:
            if n < 2 or n & (n - 1):
                raise ValueError(f"sample sizes must be powers of 2, got {n}")


@dataclass
class IvCurve:
    """(n, IV-or-MISE, stderr) rows plus the fitted rate and metadata."""

    rows: list[tuple[int, float, float]]
    nu_hat: float
    k_hat: float
    e19: float
    extrapolated: bool
    metric: str            # "iv" or "mise"
    config: ExperimentConfig
    density_x: np.ndarray
    density_mean: np.ndarray
    density_se: np.ndarray
    extra: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# point-set factories and per-replication estimates
# ---------------------------------------------------------------------------

def _structural_korobov(cfg: ExperimentConfig, model, n: int) -> int:
    if cfg.korobov_a and n in cfg.korobov_a:
        return int(cfg.korobov_a[n])
    if cfg.korobov_a and str(n) in cfg.korobov_a:
        return int(cfg.korobov_a[str(n)])
    rho = cfg.merit_rho if cfg.merit_rho is not None else default_merit_rho(model.name)
    dim = _point_dim(cfg, model)
    s_search = 6 if dim is None else min(dim, 12)
    return korobov_parameter(n, max(s_search, 1), rho)


def _point_dim(cfg: ExperimentConfig, model) -> int | None:
    if cfg.estimator == "cde":
        return model.cde_dim
    if cfg.estimator == "glrde":
        return getattr(model, "glr_dim", None) if not getattr(model, "is_ratio", False) else None
    if cfg.estimator == "kde":
        return model.sample_dim
    full_dim, _ = combo_columns(cfg.model, cfg.model_params)
    return full_dim


def _make_pointset(cfg: ExperimentConfig, model, n: int, rep_stream: UniformStream):
    dim = _point_dim(cfg, model)
    kind = cfg.pointset
    if kind == "mc":
        return mc_points(n, dim, rep_stream)
    if kind in ("lat-s", "lat-s-b"):
        lat = rank1_lattice(n, a=_structural_korobov(cfg, model, n), s=dim)
        pts = random_shift(lat, rep_stream)
        return baker_transform(pts) if kind == "lat-s-b" else pts
    if dim is None:
        raise ValueError(
            "sobol-lms cannot drive unbounded-dimension models; "
            "use mc, lat-s or lat-s-b"
        )
    return sobol_lms_shift(n, dim, rep_stream)


def _kde_reference(model, grid: EvaluationGrid, cfg: ExperimentConfig) -> np.ndarray:
    """Reference density on the grid: exact when known, else a large CDE run."""
    if hasattr(model, "exact_density"):
        return np.asarray(model.exact_density(grid.e), dtype=float)
    ref_cfg = ExperimentConfig(
        model=cfg.model, estimator="cde", variant=cfg.variant,
        pointset="lat-s-b", n_list=(2 ** 18,), n_r=10, n_e=cfg.n_e,
        seed=cfg.seed + 777, interval=(grid.a, grid.b),
        model_params=cfg.model_params,
    )
    ref_model = make_model(cfg.model, cfg.variant, (grid.a, grid.b), cfg.model_params)
    rows = _replication_rows(ref_cfg, ref_model, 2 ** 18, grid)
    return rows.mean(axis=0)


def _cde_rows_ratio(model, pts, grid) -> tuple[np.ndarray, float]:
    batch = model.simulate(pts)
    dbar = model.cde_day_matrix(batch, grid.e).mean(axis=0)
    return dbar, float(batch.count.mean())


def _glr_rows_ratio(model, pts, grid) -> tuple[np.ndarray, float]:
    batch = model.simulate(pts)
    lbar = model.glr_day_matrix(batch, grid.e).mean(axis=0)
    return lbar, float(batch.count.mean())


_CHUNK = 2 ** 14


def _chunked_mean(matrix_fn, u: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Mean over samples of matrix_fn(u_block, x), blocked to bound memory."""
    n = u.shape[0]
    total = np.zeros(x.size)
    for lo in range(0, n, _CHUNK):
        block = u[lo:lo + _CHUNK]
        total += matrix_fn(block, x).sum(axis=0)
    return total / n


def _replication_rows(cfg: ExperimentConfig, model, n: int, grid: EvaluationGrid):
    """(n_r, n_e) per-replication estimates (or (n_r, q+1, n_e) for combos)."""
    is_ratio = getattr(model, "is_ratio", False)
    if cfg.estimator == "cde-combo":
        full_dim, slices = combo_columns(cfg.model, cfg.model_params)
        variants = sorted(slices)
        base = cfg.variant if cfg.variant in slices else variants[0]
        order = [base] + [v for v in variants if v != base]
        submodels = {
            v: make_model(cfg.model, v, (grid.a, grid.b), cfg.model_params) for v in order
        }
        out = np.empty((cfg.n_r, len(order), grid.n_e))
        for r in range(cfg.n_r):
            pts = _make_pointset(cfg, model, n, UniformStream(cfg.seed, (1, n, r)))
            u = pts.matrix(full_dim)
            for k, v in enumerate(order):
                cols = list(slices[v])
                out[r, k] = _chunked_mean(submodels[v].cde_matrix, u[:, cols], grid.e)
        return out

    rows = np.empty((cfg.n_r, grid.n_e))
    dens = np.empty(cfg.n_r) if is_ratio else None
    for r in range(cfg.n_r):
        pts = _make_pointset(cfg, model, n, UniformStream(cfg.seed, (1, n, r)))
        if cfg.estimator == "cde":
            if is_ratio:
                rows[r], dens[r] = _cde_rows_ratio(model, pts, grid)
            else:
                rows[r] = _chunked_mean(model.cde_matrix, pts.matrix(model.cde_dim), grid.e)
        elif cfg.estimator == "glrde":
            if is_ratio:
                rows[r], dens[r] = _glr_rows_ratio(model, pts, grid)
            elif hasattr(model, "glr_matrix"):
                rows[r] = _chunked_mean(model.glr_matrix, pts.matrix(model.glr_dim), grid.e)
            else:
                raise ValueError(f"model {model.name} has no likelihood-ratio estimator")
        elif cfg.estimator == "kde":
            if model.sample_dim is None:
                raise ValueError(f"model {model.name} exposes no plain samples for a KDE")
            samples = model.sample_x(pts.matrix(model.sample_dim))
            h = kde_bandwidth(samples)
            rows[r] = kde_estimate(samples, KdeSpec(h), grid.e)
        else:  # pragma: no cover
            raise AssertionError(cfg.estimator)
    if is_ratio:
        known = model.known_mean_count
        if known is not None:
            return rows / known
        return rows / dens[:, None]
    return rows


def run_experiment(cfg: ExperimentConfig) -> IvCurve:
    """Run the full protocol for one (model, estimator, point set) cell."""
    model = make_model(cfg.model, cfg.variant, cfg.interval, cfg.model_params)
    a, b = model.interval
    grid = build_grid(a, b, cfg.n_e, UniformStream(cfg.seed, (0,)))
    reference = None
    if cfg.estimator == "kde":
        reference = _kde_reference(model, grid, cfg)
    rows_out: list[tuple[int, float, float]] = []
    extra: dict = {}
    last_rows = None
    for n in cfg.n_list:
        rep_rows = _replication_rows(cfg, model, n, grid)
        if cfg.estimator == "cde-combo":
            weights = fit_combo_weights(rep_rows, grid)
            extra.setdefault("combo_beta", {})[str(n)] = list(weights.beta)
            rep_rows = combine_rows(rep_rows, weights)
        if cfg.estimator == "kde":
            value, se = estimate_mise(rep_rows, grid, reference)
        else:
            value, se = estimate_iv(rep_rows, grid)
        rows_out.append((n, value, se))
        last_rows = rep_rows
    if len({n for n, _, _ in rows_out}) >= 2:
        nu, k_hat, e19, extrapolated = fit_rate([(n, v) for n, v, _ in rows_out])
    else:
        n0, v0, _ = rows_out[0]
        nu, k_hat = float("nan"), float("nan")
        e19 = -math.log2(v0) if n0 == 2 ** 19 else float("nan")
        extrapolated = n0 != 2 ** 19
    dens_mean = last_rows.mean(axis=0)
    dens_se = last_rows.std(axis=0, ddof=1) / math.sqrt(last_rows.shape[0])
    curve = IvCurve(
        rows=rows_out, nu_hat=nu, k_hat=k_hat, e19=e19, extrapolated=extrapolated,
        metric="mise" if cfg.estimator == "kde" else "iv", config=cfg,
        density_x=grid.e, density_mean=dens_mean, density_se=dens_se, extra=extra,
    )
    if cfg.out:
        os.makedirs(cfg.out, exist_ok=True)
        write_results(curve, os.path.join(cfg.out, "results.csv"))
        write_density(curve, os.path.join(cfg.out, "density.csv"))
        with open(os.path.join(cfg.out, "meta.json"), "w") as f:
            json.dump(
                {
                    "e19_extrapolated": curve.extrapolated,
                    "metric": curve.metric,
                    **curve.extra,
                },
                f, indent=2, sort_keys=True,
            )
    return curve


def write_results(curve: IvCurve, path: str) -> None:
    cfg = curve.config
    model = make_model(cfg.model, cfg.variant, cfg.interval, cfg.model_params)
    a, b = model.interval
    lines = [",".join(RESULTS_COLUMNS)]
    for n, value, se in curve.rows:
        row = [
            cfg.model, cfg.variant or "default", cfg.estimator, cfg.pointset,
            n, cfg.n_r, cfg.n_e, a, b, value, se,
            curve.nu_hat, curve.k_hat, curve.e19, cfg.seed,
        ]
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def write_density(curve: IvCurve, path: str) -> None:
    lines = ["x,fhat,stderr"]
    for x, fh, se in zip(curve.density_x, curve.density_mean, curve.density_se):
        lines.append(f"{_fmt(float(x))},{_fmt(float(fh))},{_fmt(float(se))}")
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


_REQUIRED_CONFIG_KEYS = ("model",)


def read_config(path: str) -> ExperimentConfig:
    """Load an ExperimentConfig from JSON, with named-key errors."""
    with open(path) as f:
        payload = json.load(f)
    for key in _REQUIRED_CONFIG_KEYS:
        if key not in payload:
            raise KeyError(f"config is missing required key {key!r}")
    known = {
        "model", "estimator", "variant", "pointset", "n_list", "n_r", "n_e",
        "seed", "interval", "model_params", "korobov_a", "merit_rho", "out",
    }
    unknown = sorted(set(payload) - known)
    if unknown:
        raise KeyError(f"unknown config keys {unknown}; known keys: {sorted(known)}")
    if "n_list" in payload:
        payload["n_list"] = tuple(int(v) for v in payload["n_list"])
    if "interval" in payload and payload["interval"] is not None:
        payload["interval"] = tuple(payload["interval"])
    return ExperimentConfig(**payload)
