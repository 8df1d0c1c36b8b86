import itertools
import math

import numpy as np
import pytest

from conftest import GOLDEN_P
from pressurelab import (CylinderCover, LocallyConstant, MistakeFunction, Point, SftSystem,
                         StringU, cover_pressure, m_prime, stirling_bound, stirling_gamma,
                         string_trace_set, substitution_count, substitutions)
from pressurelab.mistake import eval_budget
from pressurelab.pressure_cover import (cover_critical_point, mistake_string_contains,
                                        string_violations, sup_correction)
from pressurelab.symbolic import birkhoff_sum, enumerate_words, word_point

FULL = SftSystem.full_shift(2, 0.5)
GOLD = SftSystem.golden_mean(0.5)
ZERO = LocallyConstant.zero(2)
LIN = MistakeFunction.linear()
LN2 = math.log(2)


def test_cover_geometry():
    c = CylinderCover(GOLD, 3)
    assert len(c) == 5 and c.diam == c.lebesgue_number == 0.125
    with pytest.raises(ValueError):
        CylinderCover(FULL, 0)


def test_trace_set_examples():
    c2 = CylinderCover(FULL, 2)
    assert string_trace_set(StringU(c2, [(0, 1), (1, 1)])) == (0, 1, 1)
    assert string_trace_set(StringU(c2, [(0, 1), (0, 0)])) is None
    c1 = CylinderCover(FULL, 1)
    for w in itertools.product((0, 1), repeat=4):
        assert string_trace_set(StringU(c1, [(a,) for a in w])) == w
    with pytest.raises(ValueError):
        StringU(CylinderCover(GOLD, 2), [(1, 1)])


def test_mistake_string_examples():
    c1 = CylinderCover(FULL, 1)
    U = StringU(c1, [(0,), (0,), (0,)])
    x = Point.periodic((0, 0, 1))
    assert mistake_string_contains(U, MistakeFunction.constant(1), x)
    assert not mistake_string_contains(U, MistakeFunction.zero(), x)
    assert mistake_string_contains(U, MistakeFunction.constant(3), Point.periodic((1,)))


def test_counting_examples():
    assert substitution_count(7, 0, 5) == 1
    assert substitution_count(10, 1, 2) == 11
    assert substitution_count(4, 4, 2) == 16
    assert stirling_gamma(9, 0, 3) == 0.0
    assert stirling_gamma(10, 1, 2) == pytest.approx(math.log(21) / 10, abs=1e-15)
    assert stirling_gamma(100, 1, 2) == pytest.approx(math.log(201) / 100, abs=1e-15)
    with pytest.raises(ValueError):
        substitution_count(3, 4, 2)


def test_count_below_bound():
    for m, b, C in itertools.product(range(1, 30), range(0, 6), range(1, 6)):
        if b <= m:
            assert substitution_count(m, b, C) <= stirling_bound(m, b, C)


def test_substitution_enumeration_matches_count():
    for C in (1, 2, 3, 4):
        cover = CylinderCover(SftSystem.full_shift(C), 1)
        for m in range(1, 13):
            U = StringU(cover, [(j % C,) for j in range(m)])
            for b in range(0, min(3, m) + 1):
                subs = list(substitutions(U, b))
                assert len(subs) == len(set(subs)) == substitution_count(m, b, C)
    cover = CylinderCover(FULL, 2)   # four elements
    U = StringU(cover, [(0, 1), (1, 1), (1, 0), (0, 0), (0, 1)])
    assert len(list(substitutions(U, 2))) == substitution_count(5, 2, 4)


def test_trace_set_correctness():
    for sys, L in ((FULL, 2), (GOLD, 2), (GOLD, 3)):
        cover = CylinderCover(sys, L)
        for entries in itertools.product(cover.elements, repeat=3):
            U = StringU(cover, entries)
            merged = string_trace_set(U)
            if merged is None:
                continue
            x = word_point(sys.transitions, merged)
            assert string_violations(U, x) == 0


def test_substitution_soundness():
    cover = CylinderCover(GOLD, 2)
    pts = [word_point(GOLD.transitions, w) for w in enumerate_words(GOLD, 6)]
    for entries in [((0, 0), (0, 1), (1, 0), (0, 0)), ((1, 0), (0, 0), (0, 0), (0, 1))]:
        U = StringU(cover, entries)
        for b in (0, 1, 2):
            g = MistakeFunction.constant(b)
            subs = [V for V in substitutions(U, b)]
            for x in pts:
                direct = mistake_string_contains(U, g, x)
                via = any(string_violations(V, x) == 0 for V in subs)
                assert direct == via


def test_m_prime_examples():
    for n in (1, 5, 9):
        assert m_prime(FULL, None, ZERO, CylinderCover(FULL, 1), LN2, n) == pytest.approx(1.0)
    assert m_prime(GOLD, None, ZERO, CylinderCover(GOLD, 2), 0.0, 4) == pytest.approx(13.0)
    zero = MistakeFunction.zero()
    phi = LocallyConstant(2, 2, [0.3, -0.2, 1.1, 0.0])
    for strategy in ("uniform", "greedy", "exhaustive"):
        for L in (1, 2):
            c = CylinderCover(GOLD, L)
            assert m_prime(GOLD, None, phi, c, 0.3, 3, zero, strategy, 1) == \
                m_prime(GOLD, None, phi, c, 0.3, 3, None, strategy, 1)


def test_cover_pressure_examples():
    est = cover_pressure(FULL, None, ZERO, [1, 2, 3, 4], [6, 8, 10, 12])
    assert all(p.critical_s == pytest.approx(LN2, abs=1e-9) for p in est.trace)
    est = cover_pressure(FULL, None, ZERO, [2, 3, 4], [6, 8, 10], LIN, "greedy", span=1)
    vals = [p.critical_s for p in est.trace]
    assert vals == sorted(vals) and vals[-1] == pytest.approx(LN2, abs=1e-9)
    est = cover_pressure(GOLD, None, ZERO, [2], [16])
    assert est.value == pytest.approx(GOLDEN_P, abs=0.05)
    with pytest.raises(ValueError):
        cover_pressure(FULL, None, ZERO, [2, 1], [4, 4])


def test_sup_correction_is_certified():
    phi = LocallyConstant(2, 3, [0.0, 1.0, 4.0, 2.0, -1.0, 0.5, 3.0, 3.5])
    for L, m in ((1, 3), (2, 3), (1, 4)):
        cover = CylinderCover(FULL, L)
        pts = [word_point(FULL.transitions, w) for w in enumerate_words(FULL, L + m + 3)]
        for merged in enumerate_words(FULL, L + m - 1):
            rep = word_point(FULL.transitions, merged)
            inside = [x for x in pts if tuple(x.symbol(i) for i in range(len(merged))) == merged]
            sup = max(birkhoff_sum(FULL, phi, x, m) for x in inside)
            assert sup <= birkhoff_sum(FULL, phi, rep, m) + sup_correction(FULL, phi, L, m, 0) + 1e-12
        # with mistakes the set is a Hamming ball of strings around the representative
        b = 1
        entries = [tuple(merged[j:j + L]) for j in range(m)]
        U = StringU(cover, entries)
        inside = [x for x in pts if string_violations(U, x) <= b]
        sup = max(birkhoff_sum(FULL, phi, x, m) for x in inside)
        assert sup <= birkhoff_sum(FULL, phi, rep, m) + sup_correction(FULL, phi, L, m, b) + 1e-12


@pytest.mark.parametrize("sys", [FULL, GOLD])
def test_sandwich_zero_potential(sys):
    for strategy in ("uniform", "greedy"):
        for L, N in ((1, 6), (2, 6), (3, 8)):
            cover = CylinderCover(sys, L)
            with_g = cover_critical_point(sys, None, ZERO, cover, N, LIN, strategy, 1)[0]
            without = cover_critical_point(sys, None, ZERO, cover, N, None, strategy, 1)[0]
            gamma = max(math.log(stirling_bound(n, eval_budget(LIN, n, cover.diam), len(cover))) / N
                        for n in range(N, N + 2))
            assert with_g <= without + 1e-9
            assert without <= with_g + gamma + 1e-9
