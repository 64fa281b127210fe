"""Conditional density estimation for stochastic simulation outputs.

Estimate the density of a simulated quantity by averaging computable
conditional densities (smoothed cdf derivatives), optionally driven by
randomized quasi-Monte Carlo points, and measure integrated variance /
MISE convergence across sample sizes.
"""

from .estimators import (
    ComboWeights,
    ConditionalDensity,
    GlrTerm,
    KdeSpec,
    RatioAccumulator,
    cde_average,
    fit_combo_weights,
    glrde_estimate,
    kde_bandwidth,
    kde_estimate,
    ratio_density,
)
from .experiments import (
    EvaluationGrid,
    ExperimentConfig,
    IvCurve,
    build_grid,
    estimate_iv,
    estimate_mise,
    fit_rate,
    read_config,
    run_experiment,
    write_results,
)
from .hypoexp import hypoexp_cdf, hypoexp_density
from .merit import MeritWeights, korobov_search, p_alpha_merit
from .pointsets import (
    RandomizedPointSet,
    baker_transform,
    mc_points,
    rank1_lattice,
    random_shift,
    sobol_lms_shift,
    sobol_raw,
)
from .quantile import CdfAverage, expected_shortfall, quantile_ci, quantile_from_cdf
from .rng import UniformStream, rng_stream

__version__ = "0.1.0"

__all__ = [
    "UniformStream", "rng_stream",
    "RandomizedPointSet", "mc_points", "rank1_lattice", "random_shift",
    "baker_transform", "sobol_raw", "sobol_lms_shift",
    "MeritWeights", "p_alpha_merit", "korobov_search",
    "ConditionalDensity", "KdeSpec", "GlrTerm", "ComboWeights", "RatioAccumulator",
    "cde_average", "kde_estimate", "kde_bandwidth", "glrde_estimate",
    "fit_combo_weights", "ratio_density",
    "hypoexp_cdf", "hypoexp_density",
    "EvaluationGrid", "ExperimentConfig", "IvCurve",
    "build_grid", "estimate_iv", "estimate_mise", "fit_rate",
    "run_experiment", "write_results", "read_config",
    "CdfAverage", "quantile_from_cdf", "quantile_ci", "expected_shortfall",
    "__version__",
]
