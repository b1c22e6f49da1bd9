"""Custom exceptions for the h2gov application."""

from typing import Optional


class H2GovError(Exception):
    """Base exception for h2gov errors."""

    pass


class ParameterError(H2GovError):
    """Raised when a parameter document is missing a key or holds an invalid value."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class UnitConversionError(H2GovError):
    """Raised when a unit conversion receives an invalid input."""

    pass


class ElectrochemError(H2GovError):
    """Base exception for the static electrochemical maps."""

    pass


class InvalidCoefficientError(ElectrochemError):
    """Raised when the polarization log argument is not positive."""

    pass


class EfficiencyDomainError(ElectrochemError):
    """Raised when the Faraday efficiency is requested at non-positive current."""

    pass


class OperatingPointRangeError(ElectrochemError):
    """Raised when a requested power lies outside the solver bracket."""

    pass


class ConvergenceError(ElectrochemError):
    """Raised when the operating-point bisection runs out of iterations."""

    pass


class SimulationError(H2GovError):
    """Raised when the plant simulation fails; carries the simulation time."""

    def __init__(self, message: str, t: Optional[float] = None):
        self.t = t
        if t is not None:
            message = f"t={t:.3f}s: {message}"
        super().__init__(message)


class NumericBlowUpError(SimulationError):
    """Raised when the integrator produces a non-finite state."""

    pass


class EquilibriumError(H2GovError):
    """Raised when no steady state exists within the search bounds."""

    pass


class LinearModelError(H2GovError):
    """Raised when a state-space model is inconsistent, non-Schur or unobservable."""

    pass


class LpError(H2GovError):
    """Base exception for the dense simplex solver."""

    pass


class LpInfeasibleError(LpError):
    """Raised when the constraint polytope is empty."""

    pass


class LpUnboundedError(LpError):
    """Raised when the objective is unbounded over the polytope."""

    pass


class LpIterationError(LpError):
    """Raised when the simplex exceeds its pivot budget."""

    pass


class MasDeterminationError(H2GovError):
    """Raised when the admissible set is not finitely determined within the horizon cap."""

    pass


class AdmissibleSetFormatError(H2GovError):
    """Raised when a serialized admissible set cannot be read."""

    pass


class ScenarioError(H2GovError):
    """Raised when a scenario definition is invalid."""

    pass
