"""Exception hierarchy shared by every module."""


class DistGiniError(Exception):
    """Base class for all errors raised by the package."""


class ConfigError(DistGiniError, ValueError):
    """Malformed model specification or configuration text."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column or 1}: {message}"
        super().__init__(message)


class NumericalError(DistGiniError, ArithmeticError):
    """Base class for failures of a numerical procedure."""


class DegenerateDensity(NumericalError):
    pass


class ZeroMean(NumericalError):
    pass


class ZeroDenominator(NumericalError):
    pass


class IntegrationFailure(NumericalError):
    """Quadrature did not reach the requested tolerance.

    ``result`` holds the partial :class:`~distgini.quadrature.QuadratureResult`
    when one is available.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class NonFinite(IntegrationFailure):
    pass


class MaxSubdivisions(IntegrationFailure):
    pass


class ParameterError(DistGiniError, ValueError):
    pass


class AlphaOutOfRange(ParameterError):
    pass


class ThetaOutOfRange(ParameterError):
    pass


class UOutOfRange(ParameterError):
    pass


class OutsideSupport(ParameterError):
    pass


class InvalidModel(ConfigError):
    pass


class MissingK(ConfigError):
    pass


class InvalidFamilyId(ConfigError):
    pass


class MissingContext(DistGiniError, ValueError):
    pass


class NoRoot(NumericalError):
    pass


class InverseFailure(NumericalError):
    pass


class WindowOutsideInterval(ParameterError):
    pass


class Nonconvergence(NumericalError):
    pass
