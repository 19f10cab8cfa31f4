"""Shapley values for cooperative games: exact solvers, a k-additive
surrogate estimator, sampling baselines, and an MSE benchmark harness."""

from .baselines import BaselineConfig, kernelshap, permutation_sampling, stratified_sampling
from .bench import BenchmarkPlan, BenchmarkRecord, run_benchmark
from .estimator import EstimateResult, EstimatorConfig, run_svakadd
from .exact import exact_interaction, exact_shapley, mse
from .games import (
    Game,
    GameEvalError,
    load_value_table,
    make_additive,
    make_glove,
    make_unanimity,
    normalize,
    open_oracle,
    random_kadditive_table,
    random_value_table,
    save_value_table,
    total_correlation_game,
)
from .transform import InteractionBasis, InteractionVector, bernoulli_eta, gamma_coeff
from .wls import SampleSet, SolverOptions, build_problem, min_budget, shapley_kernel_weight, solve

__version__ = "0.1.0"

__all__ = [
    "BaselineConfig",
    "BenchmarkPlan",
    "BenchmarkRecord",
    "EstimateResult",
    "EstimatorConfig",
    "Game",
    "GameEvalError",
    "InteractionBasis",
    "InteractionVector",
    "SampleSet",
    "SolverOptions",
    "bernoulli_eta",
    "build_problem",
    "exact_interaction",
    "exact_shapley",
    "gamma_coeff",
    "kernelshap",
    "load_value_table",
    "make_additive",
    "make_glove",
    "make_unanimity",
    "min_budget",
    "mse",
    "normalize",
    "open_oracle",
    "permutation_sampling",
    "random_kadditive_table",
    "random_value_table",
    "run_benchmark",
    "run_svakadd",
    "save_value_table",
    "shapley_kernel_weight",
    "solve",
    "stratified_sampling",
    "total_correlation_game",
]
