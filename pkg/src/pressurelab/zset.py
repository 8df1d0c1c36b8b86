"""Subsets ``Z`` of the shift space on which pressure is computed."""
from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .symbolic import (SftSystem, extend_words, points_coords, word_levels,
                       word_point)


class ZSet:
    """Common interface: Z-admissible words and points of Z realising them.

    A word is Z-admissible when its cylinder meets Z.
    """

    def matrix(self, sys: SftSystem) -> np.ndarray:
        return sys.transitions

    def _first(self, sys):
        return None

    def _keep(self, words: np.ndarray) -> np.ndarray | None:
        return None

    def levels(self, sys: SftSystem, depth: int):
        """``[(words_d, parent_d) for d in 0..depth]``; parent indexes level ``d-1``."""
        M = self.matrix(sys)
        words = np.zeros((1, 0), dtype=np.int16)
        out = [(words, np.zeros(1, dtype=np.int64))]
        first = self._first(sys)
        for d in range(1, depth + 1):
            if d == 1:
                starts = np.arange(M.shape[0]) if first is None else np.flatnonzero(first)
                starts = starts[M[starts].any(axis=1)]
                parent = np.zeros(len(starts), dtype=np.int64)
                words = starts.astype(np.int16)[:, None]
            else:
                rows, nxt = np.nonzero(M[words[:, -1]])
                parent = rows
                words = np.concatenate([words[rows], nxt.astype(np.int16)[:, None]], axis=1)
            keep = self._keep(words)
            if keep is not None:
                words, parent = words[keep], parent[keep]
            out.append((words, parent))
        return out

    def words(self, sys: SftSystem, n: int) -> np.ndarray:
        return self.levels(sys, n)[n][0]

    def point(self, sys: SftSystem, word):
        return word_point(self.matrix(sys), word)

    def extend(self, sys: SftSystem, words: np.ndarray, H: int) -> np.ndarray:
        return extend_words(self.matrix(sys), words, H)

    def contains_word(self, sys: SftSystem, word) -> bool:
        word = tuple(word)
        M = self.matrix(sys)
        if not sys.admissible(word):
            return False
        return all(M[a, b] for a, b in zip(word, word[1:])) and bool(M[word[-1]].any())


class WholeSpace(ZSet):
    def __repr__(self):
        return "WholeSpace()"


class SubSft(ZSet):
    """Sub-shift given by a transition matrix entrywise below the ambient one."""

    def __init__(self, transitions):
        T = np.array(transitions, dtype=bool)
        T.setflags(write=False)
        self.transitions = T

    def matrix(self, sys: SftSystem) -> np.ndarray:
        T = self.transitions
        if T.shape != sys.transitions.shape or (T & ~sys.transitions).any():
            raise ConfigError("SubSft transitions must be entrywise <= the ambient matrix")
        # drop symbols without an infinite forward continuation
        alive = np.ones(T.shape[0], dtype=bool)
        while True:
            ok = alive & (T & alive[None, :]).any(axis=1)
            if (ok == alive).all():
                break
            alive = ok
        if not alive.any():
            raise ConfigError("SubSft is empty")
        return T & alive[:, None] & alive[None, :]

    def __repr__(self):
        rows = ["".join("1" if v else "0" for v in r) for r in self.transitions]
        return f"SubSft({rows})"


class CylinderUnion(ZSet):
    """Union of the cylinders of finitely many admissible words."""

    def __init__(self, words):
        words = sorted({tuple(int(a) for a in w) for w in words})
        if not words or any(len(w) == 0 for w in words):
            raise ConfigError("CylinderUnion needs nonempty words")
        self.cylinders = words
        self._maxlen = max(len(w) for w in words)

    def _check(self, sys):
        for w in self.cylinders:
            if not sys.admissible(w):
                raise ConfigError(f"cylinder word {w} is not admissible")

    def _first(self, sys):
        self._check(sys)
        first = np.zeros(sys.alphabet_size, dtype=bool)
        first[[w[0] for w in self.cylinders]] = True
        return first

    def _keep(self, words):
        n = words.shape[1]
        keep = np.zeros(len(words), dtype=bool)
        for u in self.cylinders:
            k = min(n, len(u))
            keep |= (words[:, :k] == np.asarray(u[:k], dtype=np.int16)).all(axis=1)
        return keep

    def _completion(self, word):
        for u in self.cylinders:
            k = min(len(word), len(u))
            if tuple(word[:k]) == u[:k]:
                return tuple(word) if len(word) >= len(u) else u
        raise ConfigError(f"word {word} does not meet Z")

    def point(self, sys, word):
        return word_point(sys.transitions, self._completion(tuple(int(a) for a in word)))

    def extend(self, sys, words, H):
        if words.shape[1] >= self._maxlen:
            return extend_words(sys.transitions, words, H)
        return points_coords([self.point(sys, w) for w in words], H)

    def contains_word(self, sys, word):
        word = tuple(word)
        if not sys.admissible(word):
            return False
        return any(tuple(word[:min(len(word), len(u))]) == u[:min(len(word), len(u))]
                   for u in self.cylinders)

    def __repr__(self):
        return "CylinderUnion([" + ", ".join("".join(map(str, w)) for w in self.cylinders) + "])"


def parse_z(spec: str, sys: SftSystem, loader=None) -> ZSet:
    """``whole``, ``subsft:FILE`` or ``cylinders:w1,w2,...``.

    Cylinder words are digit strings, or dot-separated symbols when A > 10.
    """
    spec = spec.strip()
    if spec == "whole":
        return WholeSpace()
    kind, _, arg = spec.partition(":")
    if kind == "subsft":
        if loader is None:
            from .io import load_system
            loader = load_system
        sub = loader(arg)
        return SubSft(sub.transitions)
    if kind == "cylinders":
        words = []
        for tok in arg.split(","):
            tok = tok.strip()
            if not tok:
                continue
            syms = tok.split(".") if "." in tok else list(tok)
            try:
                words.append(tuple(int(s) for s in syms))
            except ValueError as exc:
                raise ConfigError(f"bad cylinder word {tok!r}") from exc
        z = CylinderUnion(words)
        z._check(sys)
        return z
    raise ConfigError(f"bad Z spec {spec!r}")
