"""entrokit: discrete Shannon entropy estimation and benchmarking.

A partition-based entropy estimator for undersampled discrete data (unseen /
rare / frequent support split with missing-mass and unseen-symbol corrections),
four classical baselines, synthetic sources with known entropy, and a seeded
Monte-Carlo benchmark harness.
"""

from .bench import (
    CellStats,
    ConfigError,
    ExperimentGrid,
    ExperimentResult,
    TrialFailure,
    aggregate,
    parse_config,
    run_grid,
    write_gnuplot,
    write_results,
)
from .core import (
    CountTable,
    EntropyEstimate,
    Profile,
    TermBreakdown,
    TruePmf,
    build_profile,
    entropy_kernel,
    log_binomial,
    nats_to_bits,
    poisson_tail,
)
from .datagen import SourceSpec, draw_sample, make_source, true_entropy
from .estimators import (
    ESTIMATOR_NAMES,
    EstimatorConfig,
    PartitionSummary,
    chao_shen,
    conditional_mm_s3,
    estimate_by_name,
    miller_madow,
    partition_counts,
    plug_in,
    proposed_entropy,
    shrinkage,
)
from .unseen import (
    DEFAULT_AMPLIFICATION_TABLE,
    MassEstimate,
    UnseenEstimate,
    estimate_total_mass,
    estimate_unseen_count,
    lookup_amplification,
    smoothing_parameter,
)

__version__ = "0.1.0"

__all__ = [
    "CellStats",
    "ConfigError",
    "CountTable",
    "DEFAULT_AMPLIFICATION_TABLE",
    "ESTIMATOR_NAMES",
    "EntropyEstimate",
    "EstimatorConfig",
    "ExperimentGrid",
    "ExperimentResult",
    "MassEstimate",
    "PartitionSummary",
    "Profile",
    "SourceSpec",
    "TermBreakdown",
    "TrialFailure",
    "TruePmf",
    "UnseenEstimate",
    "aggregate",
    "build_profile",
    "chao_shen",
    "conditional_mm_s3",
    "draw_sample",
    "entropy_kernel",
    "estimate_by_name",
    "estimate_total_mass",
    "estimate_unseen_count",
    "log_binomial",
    "lookup_amplification",
    "make_source",
    "miller_madow",
    "nats_to_bits",
    "parse_config",
    "partition_counts",
    "plug_in",
    "poisson_tail",
    "proposed_entropy",
    "run_grid",
    "shrinkage",
    "smoothing_parameter",
    "true_entropy",
    "write_gnuplot",
    "write_results",
]
