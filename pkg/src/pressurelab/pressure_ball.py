"""Carathéodory pressure from covers by Bowen, mistake Bowen and average-metric balls.

Radii are powers ``theta**L``. A ball of orbit length ``n`` around a point is
then determined by the first ``n + L`` symbols of its center (strict Bowen
ball), and covers of Z reduce to covers of finitely many witness words.

The finite-``N`` critical value is the ``s`` at which ``m(N, s)`` crosses the
number of admissible ``L``-words of the ambient system. That reference level is
the ``m``-value of the uniform cover at the true pressure of a full shift; it
is 1 at ``delta = 1``.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from ._covering import CoverProblem, Membership
from .mistake import MistakeFunction, eval_budget
from .symbolic import Point, SftSystem, birkhoff_sum, radius_exponent
from .zset import WholeSpace

KINDS = ("bowen", "mistake", "avg")
STRATEGIES = ("uniform", "greedy", "exhaustive")
DEFAULT_SPAN = 4


@dataclass(frozen=True)
class CoverAtom:
    center: Point
    length: int
    kind: str
    radius: float


@dataclass(frozen=True)
class TracePoint:
    delta: float
    N: int
    critical_s: float
    m_at_critical: float
    wall_ms: float = 0.0


@dataclass
class PressureEstimate:
    value: float
    trace: list = field(default_factory=list)
    slope: float = math.nan

    @classmethod
    def from_trace(cls, trace):
        if not trace:
            raise ValueError("empty trace")
        slope = math.nan
        if len(trace) >= 2:
            a, b = trace[-2], trace[-1]
            slope = (b.critical_s - a.critical_s) / (b.delta - a.delta)
        return cls(trace[-1].critical_s, list(trace), slope)


def atom_weight(atom: CoverAtom, s: float, phi, sys: SftSystem | None = None) -> float:
    """``exp(-n s + S_n phi(center))``."""
    return math.exp(-atom.length * s + birkhoff_sum(sys, phi, atom.center, atom.length))


def ball_membership(sys, kind, L, g=None) -> Membership:
    if kind == "bowen":
        return Membership("prefix")
    if kind == "mistake":
        radius = sys.radius(L)
        return Membership("windows", width=L, budget=lambda n: eval_budget(g, n, radius))
    if kind == "avg":
        return Membership("avg", radius=sys.radius(L))
    raise ValueError(f"unknown ball kind {kind!r}")


def ball_problem(sys, Z, phi, N, delta, kind, g=None, span=DEFAULT_SPAN,
                 strategy="uniform") -> CoverProblem:
    L = radius_exponent(sys.theta, delta)
    if strategy == "uniform":
        span = 0
    return CoverProblem(sys, Z or WholeSpace(), phi, N, span, L, ball_membership(sys, kind, L, g))


def m_estimate(sys: SftSystem, Z, s: float, phi, N: int, delta: float, kind: str = "bowen",
               g: MistakeFunction | None = None, strategy: str = "uniform",
               span: int = DEFAULT_SPAN) -> float:
    """Cost of a cover of Z by balls of length ``N..N+span`` and radius ``delta``.

    ``uniform`` uses one length-``N`` ball per Z-admissible ``(N+L)``-word;
    ``greedy`` is the better of a weighted greedy set cover and the optimal
    cylinder partition; ``exhaustive`` is the exact infimum over the candidate
    atoms (guarded).
    """
    prob = ball_problem(sys, Z, phi, N, delta, kind, g, span, strategy)
    return math.exp(prob.log_m(s, strategy))


def critical_value(sys, Z, phi, N, delta, kind="bowen", g=None, strategy="uniform",
                   span=DEFAULT_SPAN, tol=1e-9) -> float:
    return critical_point(sys, Z, phi, N, delta, kind, g, strategy, span, tol)[0]


def critical_point(sys, Z, phi, N, delta, kind="bowen", g=None, strategy="uniform",
                   span=DEFAULT_SPAN, tol=1e-9):
    """``(s*, m(s*))`` found by bisection to bracket width ``tol``."""
    prob = ball_problem(sys, Z, phi, N, delta, kind, g, span, strategy)
    return prob.crossing(strategy, tol)


def _matched(deltas, Ns):
    deltas, Ns = list(deltas), list(Ns)
    if not deltas or not Ns:
        raise ValueError("schedules must be nonempty")
    if len(Ns) == 1:
        Ns = Ns * len(deltas)
    if len(deltas) == 1:
        deltas = deltas * len(Ns)
    if len(deltas) != len(Ns):
        raise ValueError("delta and N schedules must have matching lengths")
    return deltas, Ns


def pressure_estimate(sys, Z, phi, kind="bowen", g=None, delta_schedule=(0.5,),
                      N_schedule=(8,), strategy="uniform", span=DEFAULT_SPAN,
                      tol=1e-9) -> PressureEstimate:
    deltas, Ns = _matched(delta_schedule, N_schedule)
    if any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("delta schedule must be strictly decreasing")
    trace = []
    for delta, N in zip(deltas, Ns):
        t0 = time.perf_counter()
        s, m = critical_point(sys, Z, phi, N, delta, kind, g, strategy, span, tol)
        trace.append(TracePoint(delta, N, s, m, 1000 * (time.perf_counter() - t0)))
    return PressureEstimate.from_trace(trace)
