"""Exact colored permutation statistics and identity verification."""

from .errors import (
    ConventionError, DimensionError, DivisibilityError, EmLabError, NotInvertibleAsSeries,
    ParameterError, ParseError, TruncationRequired, UniverseError,
)
from .qpoly import DegreeCap, Poly, PolyRing
from .wreath import ColoredPermutation, enumerate_group, parse_window, format_window
from .stats import StatisticId, TotalOrder, DescentConvention, statistic, distribution, parse_statistic

__version__ = "0.1.0"

__all__ = [
    "ConventionError", "DimensionError", "DivisibilityError", "EmLabError", "NotInvertibleAsSeries",
    "ParameterError", "ParseError", "TruncationRequired", "UniverseError",
    "DegreeCap", "Poly", "PolyRing",
    "ColoredPermutation", "enumerate_group", "parse_window", "format_window",
    "StatisticId", "TotalOrder", "DescentConvention", "statistic", "distribution", "parse_statistic",
]
