"""Exception types raised by pressurelab."""


class PressureLabError(Exception):
    """Base class for all library errors."""


class ConfigError(PressureLabError, ValueError):
    """Malformed system, potential, Z or config input."""


class MonotonicityViolation(PressureLabError):
    def __init__(self, n, eps):
        super().__init__(f"g({n}, {eps}) > g({n + 1}, {eps})")
        self.n = n
        self.eps = eps


class InstanceTooLarge(PressureLabError):
    """An exact or brute-force computation exceeded its size guard."""


class CensusTooLarge(InstanceTooLarge):
    pass


class UnalignedRadius(PressureLabError, ValueError):
    """A radius that is not an integer power of theta."""


class NotIrreducible(PressureLabError):
    """Transfer oracle refuses reducible transition matrices."""
