"""Exception types raised across the package."""


class EmLabError(Exception):
    """Base class for every error raised by em_lab."""


class UniverseError(EmLabError, ValueError):
    """Two polynomials live over different variable universes."""


class DivisibilityError(EmLabError, ArithmeticError):
    """Exact division left a nonzero remainder."""


class NotInvertibleAsSeries(EmLabError, ArithmeticError):
    """A denominator factor has constant term different from 1."""


class TruncationRequired(EmLabError, ValueError):
    """An unbounded product was requested without a bounding DegreeCap."""


class DimensionError(EmLabError, ValueError):
    """Mismatched sizes or color counts."""


class ConventionError(EmLabError, ValueError):
    """A statistic, order and descent convention do not fit together."""


class ParameterError(EmLabError, ValueError):
    """Parameters outside the declared validity range."""


class ParseError(EmLabError, ValueError):
    """Malformed textual input. ``position`` is the 0-based entry index."""

    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} (entry {position})")
        self.position = position
