"""Decay rates and kernels of a v_tt + b v_t + c v = 0 with fractional symbols."""

from ._core import (
    CanonicalParams,
    ConfigError,
    Error,
    HypothesisNotMet,
    InvalidParameters,
    SymbolTriple,
    eigenvalues,
    fit_loglog,
    norm_curve,
    predict,
    preset_names,
    preset_symbols,
    run_cli,
    solution_hat,
    split_epsilon,
    verify,
)

__all__ = [
    "CanonicalParams",
    "ConfigError",
    "Error",
    "HypothesisNotMet",
    "InvalidParameters",
    "SymbolTriple",
    "eigenvalues",
    "fit_loglog",
    "norm_curve",
    "predict",
    "preset_names",
    "preset_symbols",
    "run_cli",
    "solution_hat",
    "split_epsilon",
    "verify",
]
