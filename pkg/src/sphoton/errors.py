"""Exception hierarchy for the sphoton package."""


class SphotonError(Exception):
    """Base class for all package-specific errors."""


class InputError(SphotonError, ValueError):
    """Invalid argument: bad quantum labels, angles, dimensions, etc."""


class SingularityError(InputError):
    """Evaluation requested at a point where the field is singular (kr <= 0)."""


class DarkPointError(SphotonError):
    """All fluctuation eigenvalues fell below the absolute floor; the local
    mode structure is undefined at this point."""


class SuppressedModeError(SphotonError):
    """A polarization mode whose weight fell below threshold was requested
    without explicitly allowing suppressed modes."""


class UndefinedQError(SphotonError):
    """Mandel Q requested at vacuum-level intensity (0/0)."""


class DimensionLimitError(SphotonError):
    """Requested Fock-space or operator dimension exceeds the configured limit."""


class ConfigError(SphotonError):
    """Malformed sweep configuration (CLI or config file)."""
