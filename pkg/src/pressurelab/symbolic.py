"""One-sided subshifts of finite type with the theta-metric.

Points are eventually periodic sequences, which keeps the metric, the shift and
both potential families exactly computable. Vectorised helpers work on
``(K, H)`` integer arrays holding the first ``H`` coordinates of ``K`` points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigError

# relative slack when deciding whether a radius equals theta**k
_POWER_RTOL = 1e-12


class SftSystem:
    """Alphabet ``{0..A-1}``, transition matrix ``T`` and metric parameter theta.

    The metric is ``d(x, y) = theta**k`` with ``k`` the length of the longest
    common prefix, and the dynamics is the left shift.
    """

    def __init__(self, transitions, theta=0.5):
        T = np.array(transitions, dtype=bool)
        if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] == 0:
            raise ConfigError("transition matrix must be square and nonempty")
        if not T.any(axis=1).all() or not T.any(axis=0).all():
            raise ConfigError("every row and column of T needs an allowed transition")
        theta = float(theta)
        if not 0.0 < theta < 1.0:
            raise ConfigError(f"theta must lie in (0, 1), got {theta}")
        T.setflags(write=False)
        self.transitions = T
        self.theta = theta

    @classmethod
    def full_shift(cls, alphabet_size=2, theta=0.5):
        return cls(np.ones((alphabet_size, alphabet_size), dtype=bool), theta)

    @classmethod
    def golden_mean(cls, theta=0.5):
        """Binary shift forbidding the word 11."""
        return cls([[1, 1], [1, 0]], theta)

    @property
    def alphabet_size(self) -> int:
        return self.transitions.shape[0]

    def admissible(self, word) -> bool:
        word = tuple(word)
        A = self.alphabet_size
        if any(not 0 <= a < A for a in word):
            return False
        return all(self.transitions[a, b] for a, b in zip(word, word[1:]))

    def check_point(self, x: Point) -> None:
        seq = x.preperiod + x.period + x.period[:1]
        if not self.admissible(seq):
            raise ConfigError(f"point {x} is not admissible")

    def radius(self, L: int) -> float:
        return self.theta ** L

    def __eq__(self, other):
        return (isinstance(other, SftSystem) and self.theta == other.theta
                and np.array_equal(self.transitions, other.transitions))

    def __hash__(self):
        return hash((self.transitions.tobytes(), self.transitions.shape, self.theta))

    def __repr__(self):
        rows = ["".join("1" if v else "0" for v in r) for r in self.transitions]
        return f"SftSystem(A={self.alphabet_size}, theta={self.theta}, T={rows})"


def _primitive_root(word: tuple) -> tuple:
    q = len(word)
    for d in range(1, q + 1):
        if q % d == 0 and word[:d] * (q // d) == word:
            return word[:d]
    return word


@dataclass(frozen=True)
class Point:
    """Eventually periodic sequence ``preperiod . period period ...`` in canonical form."""

    preperiod: tuple = ()
    period: tuple = (0,)

    def __post_init__(self):
        pre = tuple(int(a) for a in self.preperiod)
        per = tuple(int(a) for a in self.period)
        if not per:
            raise ValueError("period must be nonempty")
        per = _primitive_root(per)
        while pre and pre[-1] == per[-1]:
            per = per[-1:] + per[:-1]
            pre = pre[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def periodic(cls, word):
        return cls((), tuple(word))

    def symbol(self, i: int) -> int:
        p = len(self.preperiod)
        if i < p:
            return self.preperiod[i]
        return self.period[(i - p) % len(self.period)]

    def coords(self, H: int) -> np.ndarray:
        idx = np.arange(H)
        p, q = len(self.preperiod), len(self.period)
        per = np.asarray(self.period, dtype=np.int16)
        out = per[np.maximum(idx - p, 0) % q]
        if p:
            head = min(p, H)
            out[:head] = self.preperiod[:head]
        return out

    def __str__(self):
        pre = "".join(map(str, self.preperiod))
        per = "".join(map(str, self.period))
        return f"{pre}({per})^inf" if pre else f"({per})^inf"


def shift(sys: SftSystem, x: Point, j: int) -> Point:
    """``f^j x``: drop the first ``j`` symbols."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    p = len(x.preperiod)
    if j <= p:
        return Point(x.preperiod[j:], x.period)
    r = (j - p) % len(x.period)
    return Point((), x.period[r:] + x.period[:r])


def first_mismatch(x: Point, y: Point, start: int = 0):
    """Smallest index ``i >= start`` with ``x_i != y_i``, or None if the tails agree."""
    if x == y:
        return None
    horizon = (max(start, len(x.preperiod), len(y.preperiod))
               + math.lcm(len(x.period), len(y.period)))
    for i in range(start, horizon):
        if x.symbol(i) != y.symbol(i):
            return i
    return None


def distance(sys: SftSystem, x: Point, y: Point) -> float:
    k = first_mismatch(x, y)
    return 0.0 if k is None else sys.theta ** k


def agreement_depth(theta: float, delta: float) -> int:
    """Number of leading coordinates two points must share for ``d < delta``.

    This is the least ``k >= 0`` with ``theta**k < delta``. A radius within a
    relative ``1e-12`` of ``theta**m`` is treated as exactly ``theta**m``.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if delta > 1.0:
        return 0
    m = math.log(delta) / math.log(theta)
    m_round = round(m)
    if abs(theta ** m_round - delta) <= _POWER_RTOL * delta:
        return m_round + 1
    return math.floor(m) + 1


def radius_exponent(theta: float, delta: float) -> int:
    """Return ``L`` with ``delta == theta**L``; raise UnalignedRadius otherwise."""
    from .errors import UnalignedRadius

    if delta <= 0 or delta > 1.0 + _POWER_RTOL:
        raise UnalignedRadius(f"radius {delta} is not a power of theta={theta}")
    L = round(math.log(delta) / math.log(theta))
    if abs(theta ** L - delta) > _POWER_RTOL * delta:
        raise UnalignedRadius(f"radius {delta} is not a power of theta={theta}")
    return L


# ---------------------------------------------------------------------------
# words and their realisations as points


def word_array(matrix: np.ndarray, n: int) -> np.ndarray:
    """All admissible words of length ``n`` as rows, lexicographically sorted."""
    words, _ = word_levels(matrix, n)
    return words


def word_levels(matrix, n, first=None):
    """Admissible ``n``-words plus, for each, the index of its ``(n-1)``-prefix.

    ``first`` optionally restricts the allowed initial symbols.
    """
    matrix = np.asarray(matrix, dtype=bool)
    A = matrix.shape[0]
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return np.zeros((1, 0), dtype=np.int16), np.zeros(1, dtype=np.int64)
    starts = np.arange(A) if first is None else np.flatnonzero(first)
    words = starts.astype(np.int16)[:, None]
    parent = np.zeros(len(words), dtype=np.int64)
    for _ in range(1, n):
        rows, nxt = np.nonzero(matrix[words[:, -1]])
        parent = rows
        words = np.concatenate([words[rows], nxt.astype(np.int16)[:, None]], axis=1)
    return words, parent


def enumerate_words(sys: SftSystem, n: int) -> list:
    if n < 1:
        raise ValueError("n must be >= 1")
    return [tuple(int(a) for a in w) for w in word_array(sys.transitions, n)]


def count_words(matrix, n: int) -> int:
    """Number of admissible ``n``-words via matrix powers (exact integers)."""
    if n == 0:
        return 1
    M = np.asarray(matrix, dtype=object).astype(int)
    v = [1] * M.shape[0]
    for _ in range(n - 1):
        v = [sum(int(M[a, b]) * v[b] for b in range(len(v))) for a in range(len(v))]
    return sum(v)


def _min_successor(matrix: np.ndarray) -> np.ndarray:
    has = matrix.any(axis=1)
    return np.where(has, matrix.argmax(axis=1), -1)


def continuation(matrix, a: int):
    """Greedy smallest-successor path after symbol ``a``, as (transient, cycle)."""
    succ = _min_successor(np.asarray(matrix, dtype=bool))
    path, seen = [], {}
    b = int(succ[a])
    while b not in seen:
        if b < 0:
            raise ConfigError(f"symbol {a} has no infinite continuation")
        seen[b] = len(path)
        path.append(b)
        b = int(succ[b])
    i = seen[b]
    return tuple(path[:i]), tuple(path[i:])


def word_point(matrix, word) -> Point:
    """Canonical point realising ``word``.

    The periodic point ``word^inf`` when the wrap-around transition is allowed,
    otherwise ``word`` followed by the smallest-successor continuation.
    """
    word = tuple(int(a) for a in word)
    if not word:
        raise ValueError("word must be nonempty")
    matrix = np.asarray(matrix, dtype=bool)
    if matrix[word[-1], word[0]]:
        return Point((), word)
    pre, cyc = continuation(matrix, word[-1])
    return Point(word + pre, cyc)


def continuation_table(matrix, H: int) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=bool)
    succ = _min_successor(matrix)
    A = matrix.shape[0]
    table = np.full((A, max(H, 0)), -1, dtype=np.int16)
    cur = succ.copy()
    for k in range(H):
        table[:, k] = cur
        cur = np.where(cur >= 0, succ[np.maximum(cur, 0)], -1)
    return table


def extend_words(matrix, words: np.ndarray, H: int) -> np.ndarray:
    """First ``H`` coordinates of ``word_point`` for every row of ``words``."""
    words = np.asarray(words, dtype=np.int16)
    K, n = words.shape
    if n == 0:
        raise ValueError("words must be nonempty")
    if H <= n:
        return words[:, :H].copy()
    matrix = np.asarray(matrix, dtype=bool)
    out = np.empty((K, H), dtype=np.int16)
    out[:, :n] = words
    out[:, n:] = words[:, np.arange(n, H) % n]
    wrap = matrix[words[:, -1], words[:, 0]]
    if not wrap.all():
        table = continuation_table(matrix, H - n)
        out[~wrap, n:] = table[words[~wrap, -1]]
    return out


def points_coords(points, H: int) -> np.ndarray:
    """Stack the first ``H`` coordinates of many points (vectorised)."""
    K = len(points)
    p_len = np.array([len(x.preperiod) for x in points], dtype=np.int64)
    q_len = np.array([len(x.period) for x in points], dtype=np.int64)
    P = max(int(p_len.max(initial=0)), 1)
    Q = int(q_len.max(initial=1))
    pre = np.zeros((K, P), dtype=np.int16)
    per = np.zeros((K, Q), dtype=np.int16)
    for i, x in enumerate(points):
        pre[i, :len(x.preperiod)] = x.preperiod
        per[i, :len(x.period)] = x.period
    idx = np.arange(H)[None, :]
    rows = np.arange(K)[:, None]
    in_pre = idx < p_len[:, None]
    per_idx = np.maximum(idx - p_len[:, None], 0) % q_len[:, None]
    out = per[rows, per_idx]
    pre_idx = np.minimum(idx, P - 1)
    out = np.where(in_pre, pre[rows, np.broadcast_to(pre_idx, (K, H))], out)
    return out.astype(np.int16)


def word_codes(words: np.ndarray, alphabet_size: int) -> np.ndarray:
    """Lexicographic base-A integer code of each row."""
    words = np.asarray(words, dtype=np.int64)
    code = np.zeros(words.shape[0], dtype=np.int64)
    for k in range(words.shape[1]):
        code = code * alphabet_size + words[:, k]
    return code


def window_codes(coords: np.ndarray, width: int, count: int, alphabet_size: int) -> np.ndarray:
    """Codes of the windows ``coords[:, j:j+width]`` for ``j < count``."""
    coords = np.asarray(coords, dtype=np.int64)
    code = np.zeros((coords.shape[0], count), dtype=np.int64)
    for k in range(width):
        code = code * alphabet_size + coords[:, k:k + count]
    return code


# ---------------------------------------------------------------------------
# potentials


class LocallyConstant:
    """``phi(x) = table[x_0 ... x_{w-1}]`` with the table in lexicographic word order."""

    kind = "locally_constant"

    def __init__(self, alphabet_size: int, window: int, table):
        table = np.asarray(table, dtype=float).ravel()
        if window < 1:
            raise ConfigError("window must be positive")
        if table.size != alphabet_size ** window:
            raise ConfigError(f"table needs {alphabet_size ** window} entries, got {table.size}")
        table.setflags(write=False)
        self.alphabet_size = alphabet_size
        self.window = window
        self.table = table

    @classmethod
    def zero(cls, alphabet_size=2):
        return cls(alphabet_size, 1, np.zeros(alphabet_size))

    @property
    def extra_horizon(self) -> int:
        return self.window - 1

    def value(self, x: Point) -> float:
        code = 0
        for i in range(self.window):
            code = code * self.alphabet_size + x.symbol(i)
        return float(self.table[code])

    def birkhoff_coords(self, coords: np.ndarray, n: int) -> np.ndarray:
        codes = window_codes(coords, self.window, n, self.alphabet_size)
        return self.table[codes].sum(axis=1)

    def modulus_at_depth(self, sys: SftSystem, K: int) -> float:
        """Exact ``sup |phi(x) - phi(y)|`` over pairs sharing ``K`` leading symbols."""
        if K >= self.window:
            return 0.0
        words = word_array(sys.transitions, self.window)
        vals = self.table[word_codes(words, self.alphabet_size)]
        groups = word_codes(words[:, :K], self.alphabet_size)
        spread = 0.0
        for g in np.unique(groups):
            v = vals[groups == g]
            spread = max(spread, float(v.max() - v.min()))
        return spread

    def sup_norm(self, sys: SftSystem) -> float:
        words = word_array(sys.transitions, self.window)
        return float(np.abs(self.table[word_codes(words, self.alphabet_size)]).max())

    def shifted(self, c: float) -> LocallyConstant:
        return LocallyConstant(self.alphabet_size, self.window, self.table + c)

    def __repr__(self):
        return f"LocallyConstant(w={self.window}, table={self.table.tolist()})"


class GeometricSeries:
    """``phi(x) = sum_k rho**k * symbol_values[x_k]``, a non-locally-constant potential."""

    kind = "geometric"

    def __init__(self, rho: float, symbol_values, offset: float = 0.0):
        rho = float(rho)
        if not 0.0 < rho < 1.0:
            raise ConfigError("rho must lie in (0, 1)")
        values = np.asarray(symbol_values, dtype=float).ravel()
        values.setflags(write=False)
        self.rho = rho
        self.symbol_values = values
        self.alphabet_size = values.size
        # constant added to phi; keeps phi + c inside the family
        self.offset = float(offset)

    @cached_property
    def extra_horizon(self) -> int:
        # truncated tail is below 1e-18 of the largest term
        return int(math.ceil(math.log(1e-18 * (1 - self.rho)) / math.log(self.rho)))

    def value(self, x: Point) -> float:
        rho, v = self.rho, self.symbol_values
        head = sum(rho ** k * v[a] for k, a in enumerate(x.preperiod))
        q = len(x.period)
        cycle = sum(rho ** k * v[a] for k, a in enumerate(x.period))
        tail = rho ** len(x.preperiod) * cycle / (1.0 - rho ** q)
        return float(head + tail + self.offset)

    def birkhoff_coords(self, coords: np.ndarray, n: int) -> np.ndarray:
        K = self.extra_horizon + 1
        vals = self.symbol_values[np.asarray(coords[:, :n + K - 1], dtype=np.int64)]
        weights = self.rho ** np.arange(K)
        windows = np.lib.stride_tricks.sliding_window_view(vals, K, axis=1)[:, :n]
        return (windows @ weights).sum(axis=1) + n * self.offset

    def modulus_at_depth(self, sys: SftSystem, K: int) -> float:
        """Certified upper bound ``rho**K * (max - min) / (1 - rho)``."""
        v = self.symbol_values
        return float(self.rho ** K * (v.max() - v.min()) / (1.0 - self.rho))

    def sup_norm(self, sys: SftSystem) -> float:
        v = self.symbol_values
        return float(max(abs(v.max()), abs(v.min())) / (1.0 - self.rho) + abs(self.offset))

    def shifted(self, c: float) -> GeometricSeries:
        return GeometricSeries(self.rho, self.symbol_values, self.offset + c)

    def __repr__(self):
        return f"GeometricSeries(rho={self.rho}, values={self.symbol_values.tolist()})"


def oscillation(sys: SftSystem, phi) -> float:
    """``sup phi - inf phi`` (exact or certified upper bound, per family)."""
    return phi.modulus_at_depth(sys, 0)


def birkhoff_sum(sys: SftSystem, phi, x: Point, n: int) -> float:
    """``S_n phi(x) = sum_{j<n} phi(f^j x)``, each term in closed form."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.fsum(phi.value(shift(sys, x, j)) for j in range(n))


def modulus_of_continuity(sys: SftSystem, phi, delta: float) -> float:
    """``sup{|phi(x) - phi(y)| : d(x, y) < delta}``; an upper bound for GeometricSeries."""
    return phi.modulus_at_depth(sys, agreement_depth(sys.theta, delta))
