"""
OAM-Holo Simulator - Error Types
================================

Every error raised on purpose by the simulator derives from OamHoloError and
from the builtin exception that best describes it, so callers can catch either.
The CLI maps the two families to distinct exit codes:
- configuration problems (ConfigurationError and friends) -> exit 2
- numerical validity problems (NumericalValidityError, DegenerateInputError) -> exit 3
"""


class OamHoloError(Exception):
    """Base class for simulator errors."""


class ConfigurationError(OamHoloError, ValueError):
    """A run or optics configuration cannot be simulated as requested."""


class GridMismatchError(OamHoloError, ValueError):
    """Arrays, grids or placements do not fit together."""


class DomainError(OamHoloError, ValueError):
    """An argument lies outside the domain of an operation."""


class DegenerateInputError(OamHoloError, ValueError):
    """Input carries no information to work with (zero power, all-zero channel)."""


class NumericalValidityError(OamHoloError, ArithmeticError):
    """Sampling is too coarse for the requested physics (aliasing, band limit)."""


class WindowTruncationWarning(UserWarning):
    """A sampled mode loses noticeable power outside the grid window."""


class SamplingError(ConfigurationError, NumericalValidityError):
    """The configured grid cannot represent the requested propagation or charge.

    Raised as a configuration problem by the library and reported by the CLI
    with the numerical-validity exit code.
    """
