"""High-probability lower bounds (HPLBs) on the total variation distance.

Given two labeled samples reduced to one-dimensional projection scores,
the estimators here return a bound lambda_hat with
P(lambda_hat > TV(P, Q)) <= alpha: a certified minimal fraction of
observations witnessing a distributional difference.
"""

from .bounding import BoundSpec, EffectiveSizes, effective_sizes, is_violated, q_bound
from .counting import (
    BandConstant,
    CountingPath,
    LabeledScores,
    band_constant,
    band_value,
    beta_threshold,
    build_counting_path,
    simulate_null_sup_quantile,
    w_scale,
)
from .distributions import (
    BinomialParams,
    HypergeomParams,
    binom_cdf,
    binom_quantile,
    hypergeom_step_draw,
    normal_quantile,
)
from .errors import BandDomainError, DatasetError, InternalError, ParameterError
from .estimators import (
    AccuracyPair,
    HPLBResult,
    in_class_accuracies,
    lambda_adapt,
    lambda_bayes,
    lambda_c,
    lambda_oracle_t,
)
from .experiments import (
    ExampleSpec,
    PowerGridResult,
    SplitScanResult,
    example_model,
    gen_example,
    pairwise_matrix,
    run_level_study,
    run_power_grid,
    split_scan,
)
from .mixtures import (
    FunctionDensity,
    Gaussian,
    Mixture,
    MixtureModel,
    PiecewiseUniform,
    ProductDensity,
    WitnessDecomposition,
    WitnessSample,
    bayes_projection,
    bounding_operation,
    decompose,
    mmd_projection,
    regression_projection,
    sample_with_witness,
    sigma_true,
    tv_exact,
)
from .streams import RngStream

__version__ = "0.1.0"

__all__ = [
    "AccuracyPair",
    "BandConstant",
    "BandDomainError",
    "BinomialParams",
    "BoundSpec",
    "CountingPath",
    "DatasetError",
    "EffectiveSizes",
    "ExampleSpec",
    "FunctionDensity",
    "Gaussian",
    "HPLBResult",
    "HypergeomParams",
    "InternalError",
    "LabeledScores",
    "Mixture",
    "MixtureModel",
    "ParameterError",
    "PiecewiseUniform",
    "PowerGridResult",
    "ProductDensity",
    "RngStream",
    "SplitScanResult",
    "WitnessDecomposition",
    "WitnessSample",
    "band_constant",
    "band_value",
    "bayes_projection",
    "beta_threshold",
    "binom_cdf",
    "binom_quantile",
    "bounding_operation",
    "build_counting_path",
    "decompose",
    "effective_sizes",
    "example_model",
    "gen_example",
    "hypergeom_step_draw",
    "in_class_accuracies",
    "is_violated",
    "lambda_adapt",
    "lambda_bayes",
    "lambda_c",
    "lambda_oracle_t",
    "mmd_projection",
    "normal_quantile",
    "pairwise_matrix",
    "q_bound",
    "regression_projection",
    "run_level_study",
    "run_power_grid",
    "sample_with_witness",
    "sigma_true",
    "simulate_null_sup_quantile",
    "split_scan",
    "tv_exact",
    "w_scale",
]
