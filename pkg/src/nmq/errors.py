"""Exception hierarchy shared by all nmq modules.

The CLI maps these onto process exit codes: configuration problems exit
with 2, violated run-time invariants with 3, and numerical breakdown
(NaN/Inf, divergence) with 4.
"""


class NmqError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ConfigError(NmqError):
    """A scenario or spec object failed validation before the run started."""

    exit_code = 2


class InvariantViolation(NmqError):
    """A monitored physical invariant broke during a run."""

    exit_code = 3


class NumericFailure(NmqError):
    """The numerics produced non-finite values or left the validated range."""

    exit_code = 4


class DimMismatch(ConfigError):
    """Operator or state dimensions are inconsistent."""


class SectorViolation(ConfigError):
    """An operator maps an included excitation sector outside the space."""


class NotHermitian(ConfigError):
    """A matrix expected to be Hermitian is not."""


class TimeOutOfRange(ConfigError):
    """A time argument lies outside the protocol window [0, S]."""


class NonIntegerN(ConfigError):
    """The sine-pulse offset index I*b/omega is not an integer."""


class ConfigInvalid(ConfigError):
    """A run configuration file or preset failed validation."""


class GapCollapse(InvariantViolation):
    """The instantaneous E2-E1 gap fell below the safe floor."""


class TraceDrift(InvariantViolation):
    """The density-matrix trace drifted away from one."""


class HermiticityDrift(InvariantViolation):
    """The density matrix drifted away from Hermiticity."""


class NegativeExpectation(InvariantViolation):
    """An expectation value that must be non-negative came out negative."""


class PositivityViolation(InvariantViolation):
    """A density-matrix eigenvalue fell below the allowed floor."""


class NonFiniteValue(NumericFailure):
    """NaN or Inf appeared in the integration state."""


class OutOfValidatedRange(NumericFailure):
    """An argument left the range for which accuracy is guaranteed."""
