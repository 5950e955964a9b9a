"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class ThermoGeomError(Exception):
    """Base class for all package errors."""


class DomainError(ThermoGeomError, ValueError):
    """A function was evaluated outside the domain of its constitutive relation.

    ``point`` carries the offending coordinates when they are known.
    """

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class InfeasibleExtentError(DomainError):
    """Extent of reaction drives one or more mole numbers negative."""

    def __init__(self, message, negative_species=(), point=None):
        super().__init__(message, point)
        self.negative_species = tuple(negative_species)


class MechanicalInstabilityError(DomainError):
    """Isothermal compressibility is undefined: ``(dp/dv)_T >= 0``."""


class DimensionError(ThermoGeomError, ValueError):
    """Array shapes disagree with a declared dimension."""


class DegeneracyError(ThermoGeomError, ArithmeticError):
    """The metric is degenerate where an inverse is needed."""

    def __init__(self, message, det=None):
        super().__init__(message)
        self.det = det


class DivergenceError(ThermoGeomError, ArithmeticError):
    """A closed-form curvature denominator vanishes (state on the spinodal)."""

    def __init__(self, message, denominator=None):
        super().__init__(message)
        self.denominator = denominator


class NoCriticalPointError(ThermoGeomError):
    """The model has no curve of degeneracy and therefore no critical point."""


class ConsistencyError(ThermoGeomError, ArithmeticError):
    """Two independent routes to the same quantity disagree."""


class ConfigError(ThermoGeomError, ValueError):
    """Invalid command-line or configuration-file input."""
