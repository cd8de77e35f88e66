"""Classifier chain networks for multi-label classification."""

from ._ccn import (
    Model,
    NumericalError,
    ValidationError,
    __version__,
    builtin_designs,
    conditional_dependency,
    fit,
    grid_search,
    label_density,
    label_dependency,
    run_cli,
    score,
    simulate,
    unconditional_dependency,
)

__all__ = [
    "Model",
    "NumericalError",
    "ValidationError",
    "__version__",
    "builtin_designs",
    "conditional_dependency",
    "fit",
    "grid_search",
    "label_density",
    "label_dependency",
    "run_cli",
    "score",
    "simulate",
    "unconditional_dependency",
]
