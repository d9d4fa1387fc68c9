"""Exception types shared across the package."""


class PrimerepError(Exception):
    """Base class for all primerep-specific errors."""


class ResourceLimitError(PrimerepError):
    """A computation would exceed a configured resource cap (bit size,
    term count, sieve memory, or wall time)."""


class PrecisionError(PrimerepError):
    """More certified digits were requested than the available enclosure
    can support.  ``partial`` carries whatever was certified."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class TowerBreakError(PrimerepError):
    """A prime tower step left its admissible interval (never observed;
    would falsify the floor property of the construction)."""
