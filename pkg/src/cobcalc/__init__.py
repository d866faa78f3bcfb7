"""Exact computation with formal group laws and cohomological operations."""

from .series import (
    GradedSeries,
    Variable,
    VariableTable,
    SeriesError,
    NotDivisible,
)

__all__ = [
    "GradedSeries",
    "Variable",
    "VariableTable",
    "SeriesError",
    "NotDivisible",
]

__version__ = "0.1.0"
