"""Pressure from strings over cylinder covers, with and without mistakes.

The cover of scale ``L`` is the partition into admissible ``L``-cylinders
(diameter and Lebesgue number ``theta**L``). A consistent string of length
``m`` traces out a cylinder of length ``L + m - 1``; a mistake string is the
Hamming ball of strings differing from it in at most ``g(m, theta**L)`` entries.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass

from ._covering import CoverProblem, Membership
from .mistake import MistakeFunction, eval_budget
from .pressure_ball import DEFAULT_SPAN, PressureEstimate, TracePoint, _matched
from .symbolic import Point, SftSystem, oscillation, word_array
from .zset import WholeSpace


@dataclass(frozen=True)
class CylinderCover:
    sys: SftSystem
    L: int

    def __post_init__(self):
        if self.L < 1:
            raise ValueError("cover scale L must be >= 1")

    @property
    def elements(self) -> list:
        return [tuple(int(a) for a in w) for w in word_array(self.sys.transitions, self.L)]

    @property
    def diam(self) -> float:
        return self.sys.theta ** self.L

    @property
    def lebesgue_number(self) -> float:
        return self.sys.theta ** self.L

    def __len__(self):
        return len(self.elements)


@dataclass(frozen=True)
class StringU:
    cover: CylinderCover
    entries: tuple

    def __post_init__(self):
        entries = tuple(tuple(int(a) for a in u) for u in self.entries)
        if not entries:
            raise ValueError("a string needs at least one entry")
        if any(len(u) != self.cover.L or not self.cover.sys.admissible(u) for u in entries):
            raise ValueError("string entries must be admissible L-words")
        object.__setattr__(self, "entries", entries)

    @property
    def m(self) -> int:
        return len(self.entries)


def string_trace_set(U: StringU):
    """Merged word whose cylinder is ``X(U)``, or None when ``X(U)`` is empty."""
    entries = U.entries
    for a, b in zip(entries, entries[1:]):
        if a[1:] != b[:-1]:
            return None
    merged = entries[0] + tuple(u[-1] for u in entries[1:])
    if not U.cover.sys.admissible(merged):
        return None
    return merged


def string_violations(U: StringU, x: Point) -> int:
    L = U.cover.L
    return sum(1 for j, u in enumerate(U.entries)
               if tuple(x.symbol(j + i) for i in range(L)) != u)


def mistake_string_contains(U: StringU, g: MistakeFunction | None, x: Point) -> bool:
    """``x`` lies in ``X(U*)`` for some ``U*`` within the mistake budget of ``U``."""
    return string_violations(U, x) <= eval_budget(g, U.m, U.cover.diam)


def substitutions(U: StringU, budget: int):
    """All strings over the cover differing from ``U`` in at most ``budget`` entries."""
    elems = U.cover.elements
    m = U.m
    for k in range(budget + 1):
        for slots in itertools.combinations(range(m), k):
            choices = [[e for e in elems if e != U.entries[j]] for j in slots]
            for repl in itertools.product(*choices):
                entries = list(U.entries)
                for j, e in zip(slots, repl):
                    entries[j] = e
                yield StringU(U.cover, tuple(entries))


def substitution_count(m: int, budget: int, cover_size: int) -> int:
    """``sum_{i<=budget} C(m, i) (cover_size - 1)**i``: strings within Hamming distance ``budget``."""
    if not 0 <= budget <= m or cover_size < 1:
        raise ValueError("need 0 <= budget <= m and cover_size >= 1")
    return sum(math.comb(m, i) * (cover_size - 1) ** i for i in range(budget + 1))


def stirling_bound(m: int, budget: int, cover_size: int) -> int:
    """The looser count ``sum_{i<=budget} C(m, i) cover_size**i``."""
    if not 0 <= budget <= m or cover_size < 1:
        raise ValueError("need 0 <= budget <= m and cover_size >= 1")
    return sum(math.comb(m, i) * cover_size ** i for i in range(budget + 1))


def stirling_gamma(m: int, budget: int, cover_size: int) -> float:
    """Smallest ``gamma`` with ``stirling_bound <= exp(m gamma)``; one log of an exact integer."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return math.log(stirling_bound(m, budget, cover_size)) / m


def sup_correction(sys, phi, L, m, budget):
    """Certified bound on ``sup S_m phi - S_m phi(representative)`` over a (mistake) string set.

    Without mistakes the trace cylinder has length ``L + m - 1``, so orbit time
    ``j`` shares ``L + m - 1 - j`` symbols with the representative. With
    ``budget > 0`` retained times share ``L`` symbols and at most ``budget``
    times are arbitrary.
    """
    if budget == 0:
        return math.fsum(phi.modulus_at_depth(sys, L + m - 1 - j) for j in range(m))
    return (m - budget) * phi.modulus_at_depth(sys, L) + budget * oscillation(sys, phi)


def cover_problem(sys, Z, phi, cover: CylinderCover, N, mistake=None, span=DEFAULT_SPAN,
                  strategy="uniform") -> CoverProblem:
    L = cover.L
    diam = cover.diam
    budget = (lambda m: eval_budget(mistake, m, diam)) if mistake is not None else (lambda m: 0)
    if mistake is None:
        membership = Membership("prefix")
    else:
        membership = Membership("windows", width=L, budget=budget)
    if strategy == "uniform":
        span = 0
    return CoverProblem(sys, Z or WholeSpace(), phi, N, span, L - 1, membership,
                        correction=lambda m: sup_correction(sys, phi, L, m, budget(m)))


def m_prime(sys, Z, phi, cover: CylinderCover, s: float, N: int,
            mistake: MistakeFunction | None = None, strategy: str = "uniform",
            span: int = DEFAULT_SPAN) -> float:
    """Cost of a cover of Z by (mistake) strings of length ``N..N+span``."""
    prob = cover_problem(sys, Z, phi, cover, N, mistake, span, strategy)
    return math.exp(prob.log_m(s, strategy))


def cover_critical_point(sys, Z, phi, cover, N, mistake=None, strategy="uniform",
                         span=DEFAULT_SPAN, tol=1e-9):
    prob = cover_problem(sys, Z, phi, cover, N, mistake, span, strategy)
    return prob.crossing(strategy, tol)


def cover_pressure(sys, Z, phi, L_schedule, N_schedule, mistake=None, strategy="uniform",
                   span=DEFAULT_SPAN, tol=1e-9) -> PressureEstimate:
    Ls, Ns = _matched(L_schedule, N_schedule)
    if any(b <= a for a, b in zip(Ls, Ls[1:])):
        raise ValueError("L schedule must be increasing")
    trace = []
    for L, N in zip(Ls, Ns):
        t0 = time.perf_counter()
        cover = CylinderCover(sys, L)
        s, m = cover_critical_point(sys, Z, phi, cover, N, mistake, strategy, span, tol)
        trace.append(TracePoint(cover.diam, N, s, m, 1000 * (time.perf_counter() - t0)))
    return PressureEstimate.from_trace(trace)
