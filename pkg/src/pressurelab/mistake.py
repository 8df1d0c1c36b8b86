"""Mistake functions ``g(n, eps)`` and their integer budgets."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConfigError, MonotonicityViolation

FAMILIES = ("zero", "constant", "linear", "log")


@dataclass(frozen=True)
class MistakeFunction:
    """A built-in mistake function family, clamped above ``epsilon0``.

    ``family`` is one of ``zero``, ``constant`` (``g = c``), ``linear``
    (``g = n * eps``) or ``log`` (``g = alpha * ln(n + 1)``); ``param`` holds
    ``c`` or ``alpha``.
    """

    family: str = "linear"
    param: float = 0.0
    epsilon0: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown mistake family {self.family!r}")
        if self.epsilon0 <= 0:
            raise ConfigError("epsilon0 must be positive")
        if self.param < 0:
            raise ConfigError("family parameter must be nonnegative")

    @classmethod
    def zero(cls, epsilon0=1.0):
        return cls("zero", 0.0, epsilon0)

    @classmethod
    def constant(cls, c, epsilon0=1.0):
        return cls("constant", float(c), epsilon0)

    @classmethod
    def linear(cls, epsilon0=1.0):
        return cls("linear", 0.0, epsilon0)

    @classmethod
    def logarithmic(cls, alpha, epsilon0=1.0):
        return cls("log", float(alpha), epsilon0)

    @classmethod
    def parse(cls, spec: str, epsilon0: float = 1.0) -> MistakeFunction:
        """Read ``zero``, ``const:<c>``, ``linear`` or ``log:<alpha>``."""
        name, _, arg = spec.strip().partition(":")
        try:
            if name == "zero":
                return cls.zero(epsilon0)
            if name == "const":
                return cls.constant(float(arg), epsilon0)
            if name == "linear":
                return cls.linear(epsilon0)
            if name == "log":
                return cls.logarithmic(float(arg), epsilon0)
        except ValueError as exc:
            raise ConfigError(f"bad mistake function {spec!r}: {exc}") from exc
        raise ConfigError(f"bad mistake function {spec!r}")

    def spec(self) -> str:
        return {"zero": "zero", "constant": f"const:{self.param:g}",
                "linear": "linear", "log": f"log:{self.param:g}"}[self.family]

    def value(self, n: int, eps: float) -> float:
        """Real value ``g(n, min(eps, epsilon0))``."""
        eps = min(eps, self.epsilon0)
        if self.family == "zero":
            return 0.0
        if self.family == "constant":
            return self.param
        if self.family == "linear":
            return n * eps
        return self.param * math.log(n + 1)

    def budget(self, n: int, eps: float) -> int:
        eps = min(eps, self.epsilon0)
        if self.family == "linear":
            # eps is read as the decimal it prints as, so 10 * 0.3 has budget 3
            return math.floor(n * Fraction(repr(eps)))
        if self.family == "constant":
            return math.floor(Fraction(repr(self.param)))
        return max(0, math.floor(self.value(n, eps)))


def eval_budget(g: MistakeFunction | None, n: int, eps: float) -> int:
    """Number of orbit times allowed to violate the radius: ``floor(g(n, min(eps, eps0)))``."""
    if n < 1 or eps <= 0:
        raise ValueError("need n >= 1 and eps > 0")
    if g is None:
        return 0
    return g.budget(n, eps)


@dataclass
class ValidationReport:
    ok: bool
    eps_grid: list
    densities: list = field(default_factory=list)


def validate(g: MistakeFunction, n_max: int, eps_grid) -> ValidationReport:
    """Check ``g(n, eps) <= g(n+1, eps)`` on the grid and report ``g(n_max, eps) / n_max``.

    Raises MonotonicityViolation on the first failure.
    """
    eps_grid = list(eps_grid)
    if n_max < 2 or not eps_grid:
        raise ValueError("need n_max >= 2 and a nonempty eps grid")
    for eps in eps_grid:
        prev = g.value(1, eps)
        for n in range(1, n_max):
            cur = g.value(n + 1, eps)
            if prev > cur:
                raise MonotonicityViolation(n, eps)
            prev = cur
    densities = [g.value(n_max, eps) / n_max for eps in eps_grid]
    return ValidationReport(True, eps_grid, densities)
