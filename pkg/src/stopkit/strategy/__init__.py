from .optimize import (
    LogLinearFit,
    OptimizationResult,
    approx_cutoffs,
    log_linear_fit,
    optimal_single_k,
    optimize_cutoffs,
)
from .spec import StrategyKind, StrategySpec, cutoffs_for

__all__ = [
    "LogLinearFit",
    "OptimizationResult",
    "StrategyKind",
    "StrategySpec",
    "approx_cutoffs",
    "cutoffs_for",
    "log_linear_fit",
    "optimal_single_k",
    "optimize_cutoffs",
]
