"""Ground truth independent of the covering engines.

``transfer_pressure`` is the log Perron eigenvalue of the weighted transition
matrix, ``word_count_pressure`` a direct partition-function estimate, and
``naive_m_infimum`` an exact branch-and-bound set cover built from the
point-level ball predicates only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .balls import avg_contains, bowen_contains, mistake_contains
from .errors import CensusTooLarge, InstanceTooLarge, NotIrreducible
from .symbolic import (LocallyConstant, SftSystem, birkhoff_sum, enumerate_words,
                       radius_exponent)
from .zset import WholeSpace

WORDCOUNT_GUARD = 10 ** 7
NAIVE_CANDIDATES = 2 * 10 ** 4
NAIVE_NODES = 2 * 10 ** 6


@dataclass(frozen=True)
class TransferResult:
    eigenvalue: float
    lower: float
    upper: float
    iterations: int

    @property
    def pressure(self) -> float:
        return math.log(self.eigenvalue)


def is_irreducible(T) -> bool:
    T = np.asarray(T, dtype=bool)
    A = T.shape[0]
    reach = T | np.eye(A, dtype=bool)
    for _ in range(max(1, A.bit_length())):
        reach = (reach.astype(np.int64) @ reach.astype(np.int64)) > 0
    return bool(reach.all())


def weighted_matrix(sys: SftSystem, phi: LocallyConstant) -> np.ndarray:
    if not isinstance(phi, LocallyConstant) or phi.window not in (1, 2):
        raise ValueError("transfer oracle needs a locally constant potential with window 1 or 2")
    A = sys.alphabet_size
    if phi.window == 1:
        w = np.exp(phi.table)[:, None] * np.ones((1, A))
    else:
        w = np.exp(phi.table).reshape(A, A)
    return np.where(sys.transitions, w, 0.0)


def transfer_spectrum(sys: SftSystem, phi: LocallyConstant, rtol=1e-12,
                      max_iter=1_000_000) -> TransferResult:
    """Perron root by power iteration with a Collatz-Wielandt bracket.

    Iterates on ``M + c I`` (primitive even when ``M`` is periodic) and shifts back.
    """
    if not is_irreducible(sys.transitions):
        raise NotIrreducible("transition matrix is reducible")
    M = weighted_matrix(sys, phi)
    c = float(M.max())
    B = M + c * np.eye(M.shape[0])
    v = np.ones(M.shape[0])
    lo = hi = math.nan
    for it in range(1, max_iter + 1):
        w = B @ v
        ratios = w / v
        lo, hi = float(ratios.min()), float(ratios.max())
        if hi - lo <= rtol * hi:
            break
        v = w / w.max()
    lam_lo, lam_hi = lo - c, hi - c
    return TransferResult(0.5 * (lam_lo + lam_hi), lam_lo, lam_hi, it)


def transfer_pressure(sys: SftSystem, phi: LocallyConstant) -> float:
    return transfer_spectrum(sys, phi).pressure


def word_count_pressure(sys: SftSystem, Z, phi, n: int) -> float:
    """``(1/n) log sum_w exp(S_n phi(w's representative))`` over Z-admissible ``n``-words."""
    Z = Z or WholeSpace()
    if sys.alphabet_size ** n > WORDCOUNT_GUARD:
        raise CensusTooLarge(f"A^n = {sys.alphabet_size ** n} exceeds {WORDCOUNT_GUARD}")
    words = Z.words(sys, n)
    ext = Z.extend(sys, words, n + phi.extra_horizon + 1)
    s = phi.birkhoff_coords(ext, n)
    top = float(s.max())
    return (top + math.log(math.fsum(np.exp(s - top)))) / n


# ---------------------------------------------------------------------------
# exact set cover by branch and bound


def _z_words(sys, Z, n):
    return [w for w in enumerate_words(sys, n) if Z.contains_word(sys, w)]


def naive_m_infimum(sys: SftSystem, Z, s: float, phi, N: int, delta: float,
                    kind: str = "bowen", g=None, span: int = 4) -> float:
    """Exact minimum cover cost over balls of lengths ``N..N+span`` centered at realised words.

    Candidates and witnesses are built from scratch with the point-level
    predicates of :mod:`balls`.
    """
    Z = Z or WholeSpace()
    L = radius_exponent(sys.theta, delta)
    depth = N + span + L
    witnesses = [Z.point(sys, w) for w in _z_words(sys, Z, depth)]
    atoms = []
    for n in range(N, N + span + 1):
        for w in _z_words(sys, Z, n + L):
            atoms.append((n, Z.point(sys, w)))
    if len(atoms) > NAIVE_CANDIDATES:
        raise InstanceTooLarge(f"{len(atoms)} candidate atoms")

    def inside(n, c, y):
        if kind == "bowen":
            return bowen_contains(sys, c, y, n, delta)
        if kind == "mistake":
            return mistake_contains(sys, g, c, y, n, delta)
        if kind == "avg":
            return avg_contains(sys, c, y, n, delta)
        raise ValueError(kind)

    masks, weights = [], []
    for n, c in atoms:
        mask = 0
        for i, y in enumerate(witnesses):
            if inside(n, c, y):
                mask |= 1 << i
        masks.append(mask)
        weights.append(math.exp(-n * s + birkhoff_sum(sys, phi, c, n)))
    chosen = branch_and_bound_cover(len(witnesses), masks, weights)
    return math.fsum(weights[i] for i in chosen)


def branch_and_bound_cover(n_elements: int, masks, weights, node_limit=NAIVE_NODES):
    """Indices of a minimum-weight family of masks covering ``n_elements`` bits."""
    universe = (1 << n_elements) - 1
    # prune empties, duplicates and dominated sets
    order = sorted(range(len(masks)), key=lambda i: (weights[i], -masks[i].bit_count(), i))
    kept = []
    for i in order:
        m = masks[i]
        if m == 0:
            continue
        if any((m | masks[k]) == masks[k] for k in kept):
            continue
        kept.append(i)
    if not kept:
        if n_elements:
            raise ValueError("no cover exists")
        return []
    covering = [[] for _ in range(n_elements)]
    for i in kept:
        m = masks[i]
        for e in range(n_elements):
            if m >> e & 1:
                covering[e].append(i)
    if any(not c for c in covering):
        raise ValueError("some element is covered by no set")
    share = [min(weights[i] / masks[i].bit_count() for i in c) for c in covering]

    def lower_bound(rem):
        total = 0.0
        while rem:
            low = rem & -rem
            total += share[low.bit_length() - 1]
            rem ^= low
        return total

    # greedy start gives the incumbent
    best_cost, best_set = math.inf, None
    rem, cost, pick = universe, 0.0, []
    while rem:
        i = max(kept, key=lambda k: ((masks[k] & rem).bit_count() / weights[k], -k))
        pick.append(i)
        cost += weights[i]
        rem &= ~masks[i]
    best_cost, best_set = cost, list(pick)

    nodes = 0
    seen = {}   # cheapest cost at which each uncovered set was reached
    stack = [(universe, 0.0, [])]
    while stack:
        rem, cost, pick = stack.pop()
        nodes += 1
        if nodes > node_limit:
            raise InstanceTooLarge(f"branch and bound exceeded {node_limit} nodes")
        if seen.get(rem, math.inf) <= cost:
            continue
        seen[rem] = cost
        if rem == 0:
            if cost < best_cost:
                best_cost, best_set = cost, pick
            continue
        if cost + lower_bound(rem) >= best_cost * (1 - 1e-12):
            continue
        # branch on the uncovered element with the fewest covering sets
        e = min((k for k in range(n_elements) if rem >> k & 1), key=lambda k: len(covering[k]))
        for i in sorted(covering[e], key=lambda k: weights[k], reverse=True):
            stack.append((rem & ~masks[i], cost + weights[i], pick + [i]))
    return sorted(best_set)
