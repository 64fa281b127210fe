"""Simulation model zoo: registry and factory.

Each model object carries its estimation interval, the point dimensions
needed per estimator, and vectorized per-sample evaluators
(``cde_matrix`` / ``cdf_matrix`` / ``glr_matrix`` / ``sample_x``).  Models
whose estimator is a renewal-reward ratio (the queue) set ``is_ratio`` and
are driven through their ``simulate``/``*_day_matrix`` methods instead.
"""

from __future__ import annotations

from .asian import AsianBridgeModel, AsianParams, AsianSequentialModel
from .base import ModelSpec, conditional_density
from .buckling import BucklingModel
from .cantilever import CantileverModel
from .failure import FailureModel, FailureSpec
from .queueing import QueueModel, QueueParams
from .san import SanModel, SanSpec, load_san_spec
from .sums import SumNormalsModel, SumUniformsModel, sum_uniforms_exact_iv

__all__ = [
    "ModelSpec", "conditional_density", "make_model", "model_variants",
    "combo_columns", "default_merit_rho", "MODEL_NAMES",
    "SumNormalsModel", "SumUniformsModel", "sum_uniforms_exact_iv",
    "CantileverModel", "SanModel", "SanSpec", "load_san_spec",
    "QueueModel", "QueueParams", "AsianParams", "AsianSequentialModel",
    "AsianBridgeModel", "BucklingModel", "FailureModel", "FailureSpec",
]

MODEL_NAMES = (
    "sum-normals", "sum-uniforms", "cantilever", "san",
    "queue", "asian", "buckling", "failure",
)

# lattice-weight base used when searching Korobov parameters per model
_MERIT_RHO = {
    "sum-normals": 0.6,
    "sum-uniforms": 0.6,
    "cantilever": 0.05,
    "san": 0.3,
    "queue": 0.005,
    "asian": 0.6,
    "buckling": 0.8,
    "failure": 0.8,
}


def default_merit_rho(name: str) -> float:
    return _MERIT_RHO.get(name, 0.6)


def model_variants(name: str) -> tuple[str, ...]:
    probe = make_model(name)
    return probe.spec().variants


def make_model(name: str, variant: str | None = None, interval=None, params=None):
    """Construct a model by name; ``params`` is a model-specific dict."""
    params = dict(params or {})
    if name == "sum-normals":
        hide = int(variant.split("-")[1]) if variant else len(params.get("a_vec", (1.0, 1.0)))
        kw = dict(hide=hide)
        if "a_vec" in params:
            kw["a_vec"] = tuple(params["a_vec"])
        if interval:
            kw["interval"] = tuple(interval)
        return SumNormalsModel(**kw)
    if name == "sum-uniforms":
        hide = int(variant.split("-")[1]) if variant else 1
        return SumUniformsModel(eps=float(params.get("eps", 0.75)), hide=hide)
    if name == "cantilever":
        hide = int(variant.split("-")[1]) if variant else 3
        kw = dict(hide=hide)
        if interval:
            kw["interval"] = tuple(interval)
        return CantileverModel(**kw)
    if name == "san":
        spec = load_san_spec(params["graph"]) if "graph" in params else None
        return SanModel(spec=spec, interval=tuple(interval) if interval else None)
    if name == "queue":
        qp = QueueParams(
            rate=float(params.get("rate", 1.0)),
            mu=float(params.get("mu", -0.7)),
            sigma2=float(params.get("sigma2", 0.4)),
            horizon=float(params.get("horizon", 60.0)),
            regenerative=(variant == "regen"),
        )
        return QueueModel(qp, interval=tuple(interval) if interval else (0.0, 2.2))
    if name == "asian":
        ap_kw = {k: params[k] for k in ("s0", "steps", "mu", "sigma", "strike") if k in params}
        ap = AsianParams(**ap_kw)
        iv = tuple(interval) if interval else (101.0, 128.13)
        if variant in (None, "bridge"):
            return AsianBridgeModel(ap, interval=iv)
        if variant == "seq":
            return AsianSequentialModel(ap, interval=iv)
        raise ValueError(f"unknown asian variant {variant!r}; choose seq or bridge")
    if name == "buckling":
        hide = int(variant.split("-")[1]) if variant else 6
        kw = dict(hide=hide)
        if interval:
            kw["interval"] = tuple(interval)
        return BucklingModel(**kw)
    if name == "failure":
        kw = {}
        if interval:
            kw["interval"] = tuple(interval)
        return FailureModel(**kw)
    raise ValueError(f"unknown model {name!r}; available: {', '.join(MODEL_NAMES)}")


def combo_columns(name: str, params=None) -> tuple[int, dict[str, tuple[int, ...]]]:
    """Full-sample dimension and per-variant coordinate slices for combinations.

    A convex combination evaluates several conditionings on the same
    simulated inputs: the full sample consumes ``dim`` coordinates and each
    variant's conditional density reads the listed subset.
    """
    params = dict(params or {})
    if name == "cantilever":
        return 3, {"g-1": (1, 2), "g-2": (0, 2), "g-3": (0, 1)}
    if name == "buckling":
        return 6, {"g-5": (0, 1, 2, 3, 5), "g-6": (0, 1, 2, 3, 4)}
    if name == "sum-normals":
        d = len(params.get("a_vec", (1.0, 1.0)))
        return d, {
            f"g-{k}": tuple(j for j in range(d) if j != k - 1) for k in range(1, d + 1)
        }
    raise ValueError(f"no combination variants registered for model {name!r}")
