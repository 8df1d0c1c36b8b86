"""Bowen balls, mistake Bowen balls and average-metric balls.

Classical Bowen balls use the strict condition ``d < eps``; mistake balls use
``d <= eps`` on the retained orbit times, as in their set-builder definition.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import CensusTooLarge
from .mistake import MistakeFunction, eval_budget
from .symbolic import (Point, SftSystem, continuation, extend_words, first_mismatch,
                       word_array, word_point)

CENSUS_GUARD = 10 ** 7


def orbit_depths(x: Point, y: Point, n: int) -> list:
    """Agreement length of ``f^j x`` and ``f^j y`` for ``j < n`` (None = equal tails)."""
    out = []
    nxt = first_mismatch(x, y, 0)
    for j in range(n):
        if nxt is not None and nxt < j:
            nxt = first_mismatch(x, y, j)
        out.append(None if nxt is None else nxt - j)
    return out


def orbit_distances(sys: SftSystem, x: Point, y: Point, n: int) -> list:
    return [0.0 if k is None else sys.theta ** k for k in orbit_depths(x, y, n)]


def bowen_contains(sys, x: Point, y: Point, n: int, eps: float) -> bool:
    return max(orbit_distances(sys, x, y, n)) < eps


def mistake_contains(sys, g: MistakeFunction, x: Point, y: Point, n: int, eps: float) -> bool:
    bad = sum(1 for d in orbit_distances(sys, x, y, n) if d > eps)
    return bad <= eval_budget(g, n, eps)


def avg_distance(sys, x: Point, y: Point, n: int) -> float:
    return math.fsum(orbit_distances(sys, x, y, n)) / n


def avg_contains(sys, x: Point, y: Point, n: int, eps: float) -> bool:
    return avg_distance(sys, x, y, n) < eps


@dataclass(frozen=True)
class InclusionReport:
    in_bowen: bool
    in_avg: bool
    in_mistake_sqrt: bool
    chain_ok: bool


LEMMA_G = MistakeFunction.linear(epsilon0=1.0)


def inclusion_chain_check(sys, x: Point, y: Point, n: int, eps: float) -> InclusionReport:
    """Evaluate ``B_n(x,eps) c B_avg(x,eps) c B_n(g; x, sqrt(eps))`` for one ``y``, g linear."""
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    a = bowen_contains(sys, x, y, n, eps)
    b = avg_contains(sys, x, y, n, eps)
    c = mistake_contains(sys, LEMMA_G, x, y, n, math.sqrt(eps))
    return InclusionReport(a, b, c, (not a or b) and (not b or c))


# ---------------------------------------------------------------------------
# vectorised orbit geometry


def pair_horizon(n: int, pairs) -> int:
    """Coordinates after which equal-so-far means equal tails, for each pair of points."""
    return max(n + max(len(x.preperiod), len(y.preperiod)) + math.lcm(len(x.period), len(y.period))
               for x, y in pairs)


def depth_matrix(X: np.ndarray, Y: np.ndarray, n: int) -> np.ndarray:
    """``k_j`` for ``j < n`` between rows of X and Y (broadcast); -1 marks equal tails."""
    mism = X != Y
    H = mism.shape[-1]
    idx = np.where(mism, np.arange(H), H)
    nxt = np.minimum.accumulate(idx[..., ::-1], axis=-1)[..., ::-1][..., :n]
    depth = nxt - np.arange(n)
    return np.where(nxt == H, -1, depth)


def depths_to_distances(depth: np.ndarray, theta: float) -> np.ndarray:
    d = theta ** np.maximum(depth, 0).astype(float)
    return np.where(depth < 0, 0.0, d)


def lemma_memberships(sys, X: np.ndarray, Y: np.ndarray, n: np.ndarray, eps: np.ndarray):
    """Vectorised inclusion chain over pairs of coordinate rows with per-row ``n``, ``eps``."""
    n_max = int(n.max())
    d = depths_to_distances(depth_matrix(X, Y, n_max), sys.theta)
    valid = np.arange(n_max)[None, :] < n[:, None]
    d = np.where(valid, d, 0.0)
    in_bowen = np.where(valid, d < eps[:, None], True).all(axis=1)
    in_avg = d.sum(axis=1) / n < eps
    root = np.sqrt(eps)
    bad = (valid & (d > root[:, None])).sum(axis=1)
    budget = np.array([eval_budget(LEMMA_G, int(k), float(r)) for k, r in zip(n, root)])
    in_mistake = bad <= budget
    chain = (~in_bowen | in_avg) & (~in_avg | in_mistake)
    return in_bowen, in_avg, in_mistake, chain


def random_point(sys: SftSystem, rng: np.random.Generator, max_len: int = 10) -> Point:
    """Realise a random admissible word of random length as a point."""
    T = sys.transitions
    length = int(rng.integers(1, max_len + 1))
    w = [int(rng.integers(T.shape[0]))]
    for _ in range(length - 1):
        w.append(int(rng.choice(np.flatnonzero(T[w[-1]]))))
    return word_point(T, w)


def random_pair(sys, rng, max_len=10):
    """A random point and a second point that often shares a long prefix with it."""
    x = random_point(sys, rng, max_len)
    if rng.random() < 0.5:
        return x, random_point(sys, rng, max_len)
    T = sys.transitions
    r = int(rng.integers(1, 3 * max_len))
    w = [x.symbol(i) for i in range(r)]
    for _ in range(int(rng.integers(0, max_len))):
        w.append(int(rng.choice(np.flatnonzero(T[w[-1]]))))
    return x, word_point(T, w)


@dataclass
class LemmaCheckResult:
    samples: int
    violations: int
    n: np.ndarray
    eps: np.ndarray
    in_bowen: np.ndarray
    in_avg: np.ndarray
    in_mistake_sqrt: np.ndarray
    chain_ok: np.ndarray

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sample", "n", "eps", "in_bowen", "in_avg", "in_mistake_sqrt", "chain_ok"])
        for i in range(self.samples):
            w.writerow([i, int(self.n[i]), repr(float(self.eps[i])), int(self.in_bowen[i]),
                        int(self.in_avg[i]), int(self.in_mistake_sqrt[i]), int(self.chain_ok[i])])


def _walks(T, rng, start, length):
    """Random admissible continuations: ``length`` symbols after each entry of ``start``."""
    deg = T.sum(axis=1)
    succ = np.zeros(T.shape, dtype=np.int16)
    for a in range(T.shape[0]):
        nz = np.flatnonzero(T[a])
        succ[a, :len(nz)] = nz
    out = np.empty((len(start), length), dtype=np.int16)
    prev = np.asarray(start)
    for k in range(length):
        prev = succ[prev, (rng.random(len(prev)) * deg[prev]).astype(np.int64)]
        out[:, k] = prev
    return out


def _orbit_shape(T, words, lengths):
    """``(preperiod, period)`` lengths of ``word_point`` for padded word rows."""
    first = words[:, 0]
    last = words[np.arange(len(words)), lengths - 1]
    wrap = T[last, first]
    A = T.shape[0]
    trans = np.zeros(A, dtype=np.int64)
    cyc = np.zeros(A, dtype=np.int64)
    for a in range(A):
        pre, cy = continuation(T, a)
        trans[a], cyc[a] = len(pre), len(cy)
    pre = np.where(wrap, 0, lengths + trans[last])
    per = np.where(wrap, lengths, cyc[last])
    return pre, per


def _extend_ragged(T, words, lengths, H):
    out = np.empty((len(words), H), dtype=np.int16)
    for ell in np.unique(lengths):
        rows = np.flatnonzero(lengths == ell)
        out[rows] = extend_words(T, words[rows, :ell], H)
    return out


def sample_pairs(sys: SftSystem, rng, samples: int, n: np.ndarray, max_len: int = 10):
    """Coordinates of random eventually periodic pairs, exact up to orbit time ``n``.

    Same distribution as :func:`random_pair`: half the second points are
    independent, half share a random-length prefix with the first.
    """
    T = sys.transitions
    A = T.shape[0]
    lx = rng.integers(1, max_len + 1, size=samples)
    wx = np.empty((samples, max_len), dtype=np.int16)
    wx[:, 0] = rng.integers(A, size=samples)
    wx[:, 1:] = _walks(T, rng, wx[:, 0], max_len - 1)
    independent = rng.random(samples) < 0.5
    ly_ind = rng.integers(1, max_len + 1, size=samples)
    r = rng.integers(1, 3 * max_len, size=samples)
    extra = rng.integers(0, max_len, size=samples)
    X0 = _extend_ragged(T, wx, lx, 3 * max_len)
    wy = np.zeros((samples, 4 * max_len), dtype=np.int16)
    head = np.arange(3 * max_len)[None, :] < r[:, None]
    wy[:, :3 * max_len] = np.where(head, X0, 0)
    tail = _walks(T, rng, X0[np.arange(samples), r - 1], max_len)
    cols = r[:, None] + np.arange(max_len)[None, :]
    keep = np.arange(max_len)[None, :] < extra[:, None]
    rows = np.broadcast_to(np.arange(samples)[:, None], cols.shape)
    wy[rows[keep], cols[keep]] = tail[keep]
    ly = r + extra
    # independent second points
    wi = np.empty((samples, max_len), dtype=np.int16)
    wi[:, 0] = rng.integers(A, size=samples)
    wi[:, 1:] = _walks(T, rng, wi[:, 0], max_len - 1)
    wy[independent, :max_len] = wi[independent]
    wy[independent, max_len:] = 0
    ly = np.where(independent, ly_ind, ly)
    pre_x, per_x = _orbit_shape(T, wx, lx)
    pre_y, per_y = _orbit_shape(T, wy, ly)
    H = int((n + np.maximum(pre_x, pre_y) + np.lcm(per_x, per_y)).max())
    return _extend_ragged(T, wx, lx, H), _extend_ragged(T, wy, ly, H)


def lemma_check(sys: SftSystem, samples: int, seed: int = 0, n_max: int = 32,
                batch: int = 5000) -> LemmaCheckResult:
    """Randomised test of the inclusion chain over eventually periodic pairs."""
    rng = np.random.default_rng(seed)
    n = rng.integers(1, n_max + 1, size=samples)
    # eps in (0, 1]; a fourth power biases half the draws toward small radii where balls are tight
    eps = 1.0 - rng.random(samples)
    eps = np.where(rng.random(samples) < 0.5, eps, eps ** 4)
    parts = []
    for lo in range(0, samples, batch):
        nn = n[lo:lo + batch]
        X, Y = sample_pairs(sys, rng, len(nn), nn)
        parts.append(lemma_memberships(sys, X, Y, nn, eps[lo:lo + batch]))
    cols = [np.concatenate([p[i] for p in parts]) for i in range(4)] if parts else \
        [np.zeros(0, dtype=bool)] * 4
    return LemmaCheckResult(samples, int((~cols[3]).sum()), n, eps, *cols)


def ball_word_census(sys: SftSystem, kind: str, x: Point, n: int, eps: float,
                     g: MistakeFunction | None = None) -> int:
    """Count realised admissible ``n``-words (period-``n`` points when possible) in a ball around x."""
    A = sys.alphabet_size
    if A ** n > CENSUS_GUARD:
        raise CensusTooLarge(f"A^n = {A ** n} exceeds {CENSUS_GUARD}")
    words = word_array(sys.transitions, n)
    # candidates are word_point(w): period n, or w + a transient of < A symbols + a cycle of <= A
    H = n + max(len(x.preperiod), n + A) + math.lcm(len(x.period), n, *range(1, A + 1))
    Y = extend_words(sys.transitions, words, H)
    X = x.coords(H)[None, :]
    d = depths_to_distances(depth_matrix(X, Y, n), sys.theta)
    if kind == "bowen":
        inside = (d < eps).all(axis=1)
    elif kind == "avg":
        inside = d.sum(axis=1) / n < eps
    elif kind == "mistake":
        inside = (d > eps).sum(axis=1) <= eval_budget(g, n, eps)
    else:
        raise ValueError(f"unknown ball kind {kind!r}")
    return int(inside.sum())
