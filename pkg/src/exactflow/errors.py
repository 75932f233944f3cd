"""Exception hierarchy shared by every subpackage."""


class ExactFlowError(Exception):
    """Base class for all errors raised by exactflow."""


class ParameterError(ExactFlowError, ValueError):
    """A family, grid or solver parameter is outside its valid range."""


class InputError(ExactFlowError, ValueError):
    """Non-finite or malformed evaluation coordinates."""


class DomainError(ExactFlowError):
    """Evaluation requested at or past a pole, or where a field is undefined."""


class VacuumError(DomainError):
    """A derivative jet was requested on the vacuum set (rho == 0)."""


class SamplingError(ExactFlowError):
    """Rejection sampling could not collect the requested number of points."""


class UnsupportedSymbolicError(ExactFlowError):
    """The family cannot be represented with polynomial coefficients."""


class NoSolutionError(ExactFlowError):
    """A linear coefficient system is inconsistent.

    ``witness`` maps the offending monomial exponents to the residual
    coefficient that no choice of unknowns can cancel.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = dict(witness or {})


class SetupError(ExactFlowError):
    """Solver initial data violates the density floor."""


class StepError(ExactFlowError):
    """A time step violates the CFL restriction."""


class PositivityError(ExactFlowError):
    """Density fell below the floor (or became non-finite) during a run."""


class ConfigError(ExactFlowError):
    """Run configuration failed schema validation."""
