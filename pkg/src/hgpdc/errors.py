"""Exception hierarchy shared across the simulator."""


class HgpdcError(Exception):
    """Base class for all simulator errors."""


class ConfigError(HgpdcError):
    """Invalid or unparsable experiment configuration."""


class DegenerateDispersionError(HgpdcError):
    """Group-velocity combination for which the phasematching angle is undefined."""


class GridError(HgpdcError):
    """Frequency grid construction failed (non-positive nodes, aliasing, ...)."""


class DimensionMismatchError(HgpdcError):
    """Operands built on incompatible frequency grids."""


class NumericalError(HgpdcError):
    """Non-finite values or a failed matrix factorization during a run."""


class ConstraintViolationError(NumericalError):
    """Commutator constraints exceeded tolerance at the end of an evolution."""

    def __init__(self, message: str, worst_residual: float):
        super().__init__(message)
        self.worst_residual = worst_residual


class EmptySpectrumError(HgpdcError):
    """All squeezing parameters are zero; purity and modal weights are undefined."""


class RegimeError(HgpdcError):
    """A low-gain comparison was requested outside the low-gain regime."""


class PartialSweepError(HgpdcError):
    """Some powers of a sweep failed; successful rows were kept."""

    def __init__(self, message: str, failed_powers: list):
        super().__init__(message)
        self.failed_powers = failed_powers
