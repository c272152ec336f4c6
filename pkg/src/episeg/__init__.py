"""Epidemic change-point detection via alternating pruned dynamic programming.

The central model distinguishes a shared "normal" background state from
"epidemic" departures: segments strictly alternate between the two, the
background parameter is common to every normal segment, and each epidemic
segment is fitted freely.  The segmenters solve the penalized problem
exactly with per-state candidate pruning; stateless optimal partitioning
and PELT are included as baselines, along with the simulation protocols and
evaluation measures used to benchmark them.
"""

from .costs import (
    BETA,
    GAUSSIAN_FIXED_VARIANCE,
    GAUSSIAN_FULL,
    UNIT_CLAMP,
    VAR_FLOOR,
    BetaCost,
    GaussianFixedVarianceCost,
    GaussianFullCost,
    PenaltySpec,
    TimeSeries,
    bic_penalties,
    build_timeseries,
    cost_beta,
    cost_gaussian_fixedvar,
    cost_gaussian_full,
    cost_gaussian_normalstate,
    estimate_normal_mean_plugin,
    estimate_variance_localreg,
    estimate_variance_mad,
    make_cost_model,
)
from .metrics import (
    EvalReport,
    bic_score,
    fitted_param_path,
    multiple_testing_rates,
    param_mse,
    postprocess_alternating,
    sensitivity_precision,
    tpr_fpr,
)
from .oracle import OracleResult, brute_force_apelt, brute_force_op
from .segmenters import (
    EPIDEMIC,
    NORMAL,
    ProfileConfig,
    ProfileResult,
    Segmentation,
    apelt_fixed,
    apelt_plugin,
    apelt_profile,
    optimal_partitioning,
    pelt,
    recompute_cost,
)
from .simulation import (
    EPIDEMIC_MEAN,
    PVALUES,
    SHORT_SEGMENT,
    DgpSpec,
    LabeledSequence,
    format_labeled_csv,
    generate,
    generate_epidemic_mean,
    generate_pvalues,
    generate_short_segments,
    largest_remainder_lengths,
    per_index_states,
    replication_seed,
    write_labeled_csv,
)

__version__ = "0.1.0"

__all__ = [
    "BETA",
    "EPIDEMIC",
    "EPIDEMIC_MEAN",
    "GAUSSIAN_FIXED_VARIANCE",
    "GAUSSIAN_FULL",
    "NORMAL",
    "PVALUES",
    "SHORT_SEGMENT",
    "UNIT_CLAMP",
    "VAR_FLOOR",
    "BetaCost",
    "DgpSpec",
    "EvalReport",
    "GaussianFixedVarianceCost",
    "GaussianFullCost",
    "LabeledSequence",
    "OracleResult",
    "PenaltySpec",
    "ProfileConfig",
    "ProfileResult",
    "Segmentation",
    "TimeSeries",
    "apelt_fixed",
    "apelt_plugin",
    "apelt_profile",
    "bic_penalties",
    "bic_score",
    "brute_force_apelt",
    "brute_force_op",
    "build_timeseries",
    "cost_beta",
    "cost_gaussian_fixedvar",
    "cost_gaussian_full",
    "cost_gaussian_normalstate",
    "estimate_normal_mean_plugin",
    "estimate_variance_localreg",
    "estimate_variance_mad",
    "fitted_param_path",
    "format_labeled_csv",
    "generate",
    "generate_epidemic_mean",
    "generate_pvalues",
    "generate_short_segments",
    "largest_remainder_lengths",
    "make_cost_model",
    "multiple_testing_rates",
    "optimal_partitioning",
    "param_mse",
    "pelt",
    "per_index_states",
    "postprocess_alternating",
    "recompute_cost",
    "replication_seed",
    "sensitivity_precision",
    "tpr_fpr",
    "write_labeled_csv",
]
