"""Word-level covering problems shared by the ball and the open-cover engines.

At an aligned radius every covering set used by either engine is a union of
cylinders, so a cover of Z is a cover of the finitely many Z-admissible
witness words of the deepest relevant length. Atoms are indexed by their
center word; an atom of orbit length ``n`` has a center of depth
``n + offset``.
"""
from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InstanceTooLarge
from .symbolic import count_words

WORD_GUARD = 2 ** 23           # witness words at the deepest level
CSR_GUARD = 5 * 10 ** 7         # total atom-witness incidences
DENSE_GUARD = 5 * 10 ** 7       # pairwise membership tests
PATTERN_GUARD = 2 * 10 ** 5
PATTERN_WORK_GUARD = 2 * 10 ** 8
EXHAUSTIVE_ATOMS = 2 * 10 ** 4
EXHAUSTIVE_CELLS = 5 * 10 ** 6
BIRKHOFF_CHUNK = 2 ** 22        # coordinates per Birkhoff batch
AVG_HORIZON = 64                # theta**64 is below double resolution of any radius used


def logsumexp(values) -> float:
    """Correctly rounded ``log(sum(exp(values)))``; independent of summation order."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return -math.inf
    top = float(values.max())
    if math.isinf(top):
        return top
    return top + math.log(math.fsum(np.exp(values - top)))


def grouped_logsumexp(values: np.ndarray, parent: np.ndarray, n_groups: int) -> np.ndarray:
    """Per-parent log-sum-exp; ``parent`` must be sorted."""
    starts = np.flatnonzero(np.r_[True, parent[1:] != parent[:-1]])
    groups = parent[starts]
    top = np.maximum.reduceat(values, starts)
    rep = np.repeat(top, np.diff(np.r_[starts, len(values)]))
    sums = np.add.reduceat(np.exp(values - rep), starts)
    out = np.full(n_groups, math.inf)
    out[groups] = top + np.log(sums)
    return out


@dataclass(frozen=True)
class Membership:
    """How an atom decides whether a witness lies in its covering set.

    ``prefix``: witness shares the first ``n + offset`` symbols with the center.
    ``windows``: at most ``budget(n)`` of the windows ``[j, j+width)``, ``j < n``,
    disagree with the center. ``avg``: mean of ``theta**k_j`` over ``j < n`` is
    below ``radius``.
    """

    rule: str
    width: int = 0
    budget: object = None
    radius: float = 0.0


@lru_cache(maxsize=256)
def window_patterns(p: int, width: int, n: int, b: int) -> tuple:
    """Position sets ``D`` in ``[0, p)`` hitting at most ``b`` of the windows ``[j, j+width)``, ``j < n``."""
    out = []
    chosen = []

    def rec(i, cov_hi, count):
        if len(out) > PATTERN_GUARD:
            raise InstanceTooLarge(f"more than {PATTERN_GUARD} mistake patterns")
        if i == p:
            out.append(tuple(chosen))
            return
        rec(i + 1, cov_hi, count)
        lo = max(cov_hi + 1, i - width + 1, 0)
        hi = min(i, n - 1)
        new = max(0, hi - lo + 1)
        if count + new <= b:
            chosen.append(i)
            rec(i + 1, max(cov_hi, hi), count + new)
            chosen.pop()

    rec(0, -1, 0)
    return tuple(out)


def _grouped_min(values, parent, n_groups):
    starts = np.flatnonzero(np.r_[True, parent[1:] != parent[:-1]])
    out = np.full(n_groups, math.inf)
    out[parent[starts]] = np.minimum.reduceat(values, starts)
    return out


def _ranges_to_csr(atom, lo, hi, n_atoms):
    """CSR ``(indptr, indices)`` from per-atom index ranges ``[lo, hi)``."""
    keep = hi > lo
    atom, lo, hi = atom[keep], lo[keep], hi[keep]
    order = np.argsort(atom, kind="stable")
    atom, lo, hi = atom[order], lo[order], hi[order]
    lengths = hi - lo
    indptr = np.zeros(n_atoms + 1, dtype=np.int64)
    np.add.at(indptr, atom + 1, lengths)
    indptr = np.cumsum(indptr)
    total = int(lengths.sum())
    if total > CSR_GUARD:
        raise InstanceTooLarge(f"coverage lists with {total} entries exceed {CSR_GUARD}")
    starts = np.cumsum(lengths) - lengths
    indices = np.arange(total, dtype=np.int64) - np.repeat(starts - lo, lengths)
    return indptr, indices


class CoverProblem:
    """Candidate atoms, witnesses and the cover-cost functional ``m(s)``."""

    def __init__(self, sys, Z, phi, N, span, offset, membership: Membership, correction=None):
        if N < 1:
            raise ValueError("N must be >= 1")
        if span < 0:
            raise ValueError("span must be >= 0")
        self.sys, self.Z, self.phi = sys, Z, phi
        self.N, self.span, self.offset = N, span, offset
        self.membership = membership
        self.level = math.log(count_words(sys.transitions, offset))
        d_min, d_max = N + offset, N + span + offset
        if count_words(sys.transitions, d_max) > WORD_GUARD:
            raise InstanceTooLarge(f"more than {WORD_GUARD} admissible {d_max}-words")
        self.levels = Z.levels(sys, d_max)
        self.depths = list(range(d_min, d_max + 1))
        lengths, base = [], []
        for d in self.depths:
            words = self.levels[d][0]
            n = d - offset
            H = max(d, n + phi.extra_horizon)
            step = max(1, BIRKHOFF_CHUNK // H)
            s_n = np.concatenate([phi.birkhoff_coords(Z.extend(sys, words[i:i + step], H), n)
                                  for i in range(0, len(words), step)] or [np.zeros(0)])
            if correction is not None:
                s_n = s_n + correction(n)
            lengths.append(np.full(len(words), n))
            base.append(s_n)
        self.level_base = base
        self.level_start = np.cumsum([0] + [len(b) for b in base])
        self.lengths = np.concatenate(lengths)
        self.base = np.concatenate(base)
        self._csr = None
        self._uniform_lse = None
        self._csr_t = None

    # -- structure ---------------------------------------------------------

    @property
    def n_atoms(self) -> int:
        return len(self.lengths)

    @property
    def witnesses(self) -> np.ndarray:
        return self.levels[self.depths[-1]][0]

    def budget(self, n):
        return self.membership.budget(n) if self.membership.budget else 0

    @property
    def cover_offset(self):
        """Depth offset of a cylinder every atom is guaranteed to contain (None: whole space)."""
        m = self.membership
        if m.rule == "windows":
            return None if m.width == 0 else m.width - 1
        return self.offset

    @property
    def partition_is_exact(self) -> bool:
        """True when every covering set is exactly a cylinder, so the tree programme is optimal."""
        m = self.membership
        if m.rule == "prefix":
            return True
        if m.rule == "windows":
            return m.width == 0 or all(self.budget(d - self.offset) == 0 for d in self.depths)
        return False

    def log_weights(self, s: float) -> np.ndarray:
        return self.base - self.lengths * s

    def coverage(self):
        """Sparse ``(indptr, indices)``: witnesses covered by each atom."""
        if self._csr is None:
            parts = [self._level_ranges(i, d) for i, d in enumerate(self.depths)]
            if any(p[0] == "dense" for p in parts):
                rows, cols = [], []
                for p in parts:
                    rows.append(p[1])
                    cols.append(p[2])
                atom = np.concatenate(rows)
                wit = np.concatenate(cols)
                order = np.lexsort((wit, atom))
                atom, wit = atom[order], wit[order]
                indptr = np.zeros(self.n_atoms + 1, dtype=np.int64)
                np.add.at(indptr, atom + 1, 1)
                self._csr = (np.cumsum(indptr), wit.astype(np.int64))
            else:
                atom = np.concatenate([p[1] for p in parts])
                lo = np.concatenate([p[2] for p in parts])
                hi = np.concatenate([p[3] for p in parts])
                self._csr = _ranges_to_csr(atom, lo, hi, self.n_atoms)
        return self._csr

    def _prefix_ranges(self, depth, codes):
        wc = _codes(self.witnesses[:, :depth], self.sys.alphabet_size)
        return np.searchsorted(wc, codes, "left"), np.searchsorted(wc, codes, "right")

    def _level_ranges(self, i, d):
        sys, m = self.sys, self.membership
        A = sys.alphabet_size
        centers = self.levels[d][0]
        K = len(centers)
        first = int(self.level_start[i])
        atom_ids = np.arange(first, first + K)
        n = d - self.offset
        W = len(self.witnesses)
        if m.rule == "prefix":
            lo, hi = self._prefix_ranges(d, _codes(centers, A))
            return "ranges", atom_ids, lo, hi
        if m.rule == "windows":
            if m.width == 0:
                return "ranges", atom_ids, np.zeros(K, np.int64), np.full(K, W, np.int64)
            p = n + m.width - 1
            pats = window_patterns(p, m.width, n, self.budget(n))
            est = K * sum((A - 1) ** len(D) for D in pats)
            if est > PATTERN_WORK_GUARD:
                raise InstanceTooLarge(f"{est} candidate members for mistake balls of length {n}")
            cp = np.asarray(centers[:, :p], dtype=np.int64)
            base_code = _codes(cp, A)
            powers = A ** np.arange(p - 1, -1, -1, dtype=np.int64)
            atoms, los, his = [], [], []
            for D in pats:
                D = list(D)
                for r in itertools.product(range(1, A), repeat=len(D)):
                    if D:
                        new = (cp[:, D] + np.asarray(r)) % A
                        code = base_code + ((new - cp[:, D]) * powers[D]).sum(axis=1)
                    else:
                        code = base_code
                    lo, hi = self._prefix_ranges(p, code)
                    hit = hi > lo
                    atoms.append(atom_ids[hit])
                    los.append(lo[hit])
                    his.append(hi[hit])
            return "ranges", np.concatenate(atoms), np.concatenate(los), np.concatenate(his)
        if m.rule == "avg":
            from .balls import depth_matrix, depths_to_distances
            if K * W > DENSE_GUARD:
                raise InstanceTooLarge(f"{K} x {W} average-metric membership tests")
            H = self.depths[-1] + AVG_HORIZON
            we = self.Z.extend(sys, self.witnesses, H)
            ce = self.Z.extend(sys, centers, H)
            chunk = max(1, int(2 ** 22 // max(1, W * H)))
            rows, cols = [], []
            for lo in range(0, K, chunk):
                dist = depths_to_distances(
                    depth_matrix(ce[lo:lo + chunk, None, :], we[None, :, :], n), sys.theta)
                r, c = np.nonzero(dist.sum(axis=2) / n < m.radius)
                rows.append(r + first + lo)
                cols.append(c)
            return "dense", np.concatenate(rows), np.concatenate(cols)
        raise ValueError(m.rule)

    # -- strategies --------------------------------------------------------

    def log_m(self, s: float, strategy: str) -> float:
        if strategy == "uniform":
            # all atoms share length N, so the sum factors
            if self._uniform_lse is None:
                self._uniform_lse = logsumexp(self.level_base[0])
            return self._uniform_lse - self.N * s
        if strategy == "greedy":
            if self.partition_is_exact:
                return self.log_m_partition(s)
            return min(self.log_m_partition(s), self.log_m_greedy(s))
        if strategy == "exhaustive":
            if self.partition_is_exact:
                return self.log_m_partition(s)
            return self.log_m_milp(s)
        raise ValueError(f"unknown strategy {strategy!r}")

    def log_m_partition(self, s: float) -> float:
        """Optimal cover in which each atom is credited only with its guaranteed cylinder.

        A tree programme over cylinder depths; the exact infimum when
        ``partition_is_exact``.
        """
        logw = self.log_weights(s)
        c_off = self.cover_offset
        if c_off is None:
            return float(logw.min())
        shift = self.offset - c_off
        own = {}
        for i, d in enumerate(self.depths):
            vals = logw[self.level_start[i]:self.level_start[i + 1]]
            for dd in range(d, d - shift, -1):
                vals = _grouped_min(vals, self.levels[dd][1], len(self.levels[dd - 1][0]))
            own[d - shift] = vals
        best = None
        for e in sorted(own, reverse=True):
            if best is None:
                best = own[e]
            else:
                kids = grouped_logsumexp(best, self.levels[e + 1][1], len(self.levels[e][0]))
                best = np.minimum(own[e], kids)
        return logsumexp(best)

    def _transpose(self):
        """Atoms covering each witness, as CSR over witnesses."""
        if self._csr_t is None:
            indptr, indices = self.coverage()
            atom = np.repeat(np.arange(self.n_atoms), np.diff(indptr))
            order = np.argsort(indices, kind="stable")
            t_ptr = np.zeros(len(self.witnesses) + 1, dtype=np.int64)
            np.add.at(t_ptr, indices + 1, 1)
            self._csr_t = (np.cumsum(t_ptr), atom[order])
        return self._csr_t

    def greedy_cover(self, s: float) -> list:
        """Lazy greedy weighted set cover: largest new coverage per unit weight first."""
        indptr, indices = self.coverage()
        t_ptr, t_atoms = self._transpose()
        logw = self.log_weights(s)
        unc = np.ones(len(self.witnesses), dtype=bool)
        gain = np.diff(indptr)
        heap = [(-(math.log(g) - lw), i, g) for i, (g, lw) in
                enumerate(zip(gain.tolist(), logw.tolist())) if g]
        heapq.heapify(heap)
        remaining = len(unc)
        chosen = []
        while remaining and heap:
            _, i, g = heapq.heappop(heap)
            cur = int(gain[i])
            if cur != g:
                # stale entry; scores only ever drop, so requeue at the new value
                if cur:
                    heapq.heappush(heap, (-(math.log(cur) - logw[i]), i, cur))
                continue
            members = indices[indptr[i]:indptr[i + 1]]
            new = members[unc[members]]
            unc[new] = False
            remaining -= len(new)
            chosen.append(i)
            np.subtract.at(gain, t_atoms[_expand(t_ptr, new)], 1)
        return chosen

    def log_m_greedy(self, s: float) -> float:
        return logsumexp(self.log_weights(s)[self.greedy_cover(s)])

    def exact_cover(self, s: float) -> list:
        """Minimum-weight cover by mixed-integer programming (HiGHS)."""
        from scipy.optimize import LinearConstraint, milp
        from scipy.sparse import csr_matrix

        W = len(self.witnesses)
        if self.n_atoms > EXHAUSTIVE_ATOMS or self.n_atoms * W > EXHAUSTIVE_CELLS:
            raise InstanceTooLarge(f"exhaustive search over {self.n_atoms} atoms x {W} witnesses")
        indptr, indices = self.coverage()
        logw = self.log_weights(s)
        # one representative per coverage set, cheapest weight
        keys = {}
        for i in range(self.n_atoms):
            key = indices[indptr[i]:indptr[i + 1]].tobytes()
            if key not in keys or logw[i] < logw[keys[key]]:
                keys[key] = i
        idx = np.array(sorted(keys.values()))
        sub_ptr = np.r_[0, np.cumsum(np.diff(indptr)[idx])]
        sub_idx = np.concatenate([indices[indptr[i]:indptr[i + 1]] for i in idx])
        mat = csr_matrix((np.ones(len(sub_idx)), sub_idx, sub_ptr), shape=(len(idx), W))
        c = np.exp(logw[idx] - logw[idx].max())
        res = milp(c, integrality=np.ones(len(idx)), bounds=(0, 1),
                   constraints=LinearConstraint(mat.T.tocsr(), lb=1),
                   options={"mip_rel_gap": 0.0})
        if not res.success:
            raise RuntimeError(f"set cover MILP failed: {res.message}")
        return [int(i) for i in idx[res.x > 0.5]]

    def log_m_milp(self, s: float) -> float:
        return logsumexp(self.log_weights(s)[self.exact_cover(s)])

    # -- critical value ----------------------------------------------------

    def crossing(self, strategy: str, tol: float = 1e-9):
        """``s`` where ``log m(s)`` meets the reference level; returns ``(s, m(s))``."""
        def f(s):
            return self.log_m(s, strategy) - self.level

        s0 = (self.log_m(0.0, "uniform") - self.level) / self.N
        lo, hi, step = s0 - 1.0, s0 + 1.0, 1.0
        while f(lo) <= 0:
            step *= 2
            lo -= step
        step = 1.0
        while f(hi) > 0:
            step *= 2
            hi += step
        while hi - lo >= tol:
            mid = 0.5 * (lo + hi)
            if f(mid) > 0:
                lo = mid
            else:
                hi = mid
        s = 0.5 * (lo + hi)
        return s, math.exp(self.log_m(s, strategy))


def _expand(ptr, rows):
    """Concatenated index ranges ``ptr[r]:ptr[r+1]`` for ``r`` in ``rows``."""
    lo, hi = ptr[rows], ptr[rows + 1]
    lengths = hi - lo
    starts = np.cumsum(lengths) - lengths
    return np.arange(int(lengths.sum()), dtype=np.int64) - np.repeat(starts - lo, lengths)


def _codes(words, A):
    words = np.asarray(words, dtype=np.int64)
    code = np.zeros(words.shape[0], dtype=np.int64)
    for k in range(words.shape[1]):
        code = code * A + words[:, k]
    return code
