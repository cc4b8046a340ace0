"""Exception hierarchy shared across the package.

Grouped so the command line tool can map failures onto exit codes:
usage problems, data problems, and numerical problems are distinct.
"""


class CorankError(Exception):
    """Base class for all package-specific errors."""


class InvalidSpecError(CorankError, ValueError):
    """A grid specification or test configuration is inconsistent."""


class InvalidInputError(CorankError, ValueError):
    """Runtime data violates a precondition (shape, finiteness, range)."""


class InvalidScoreError(CorankError, ValueError):
    """A score function is unusable (non-integrable, singular covariance)."""


class DegenerateDesignError(CorankError, ValueError):
    """A covariate design has (numerically) singular second moments."""


class DegenerateInputError(CorankError, ValueError):
    """Data is degenerate for the requested estimator (singular scatter, zero residual)."""


class NumericalError(CorankError, RuntimeError):
    """An iterative numerical procedure failed to converge."""


class SimulationError(CorankError, RuntimeError):
    """A simulation replication failed; carries the failing seed."""


class DataError(CorankError, ValueError):
    """A data file cannot be parsed into a valid dataset."""
