import itertools
import math

import numpy as np
import pytest

from conftest import BETA1_P, GOLDEN_P
from pressurelab import (InstanceTooLarge, LocallyConstant, MistakeFunction, NotIrreducible,
                         SftSystem, SubSft, WholeSpace, naive_m_infimum, transfer_pressure,
                         transfer_spectrum, word_count_pressure)
from pressurelab.oracles import branch_and_bound_cover, is_irreducible

FULL = SftSystem.full_shift(2, 0.5)
GOLD = SftSystem.golden_mean(0.5)
ZERO = LocallyConstant.zero(2)
LN2 = math.log(2)


def test_transfer_examples():
    assert transfer_pressure(FULL, ZERO) == pytest.approx(LN2, abs=1e-12)
    assert transfer_pressure(GOLD, ZERO) == pytest.approx(GOLDEN_P, abs=1e-12)
    for beta in (0.0, 1.0, -2.0, 3.5):
        phi = LocallyConstant(2, 1, [0.0, beta])
        assert transfer_pressure(FULL, phi) == pytest.approx(math.log(1 + math.exp(beta)), abs=1e-12)


def test_transfer_against_numpy(rng):
    done = 0
    while done < 20:
        A = int(rng.integers(2, 6))
        T = rng.random((A, A)) < 0.6
        if not T.any(axis=1).all() or not T.any(axis=0).all() or not is_irreducible(T):
            continue
        sys = SftSystem(T)
        w = int(rng.integers(1, 3))
        phi = LocallyConstant(A, w, rng.normal(size=A ** w))
        res = transfer_spectrum(sys, phi)
        table = phi.table.reshape((A, A) if w == 2 else (A, 1))
        M = np.where(T, np.exp(table if w == 2 else np.repeat(table, A, axis=1)), 0.0)
        ref = max(abs(np.linalg.eigvals(M)))
        assert res.eigenvalue == pytest.approx(ref, rel=1e-10)
        assert res.lower <= res.eigenvalue <= res.upper
        assert res.upper - res.lower <= 1e-10 * res.upper
        done += 1


def test_transfer_periodic_matrix():
    cyc = SftSystem([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    assert transfer_pressure(cyc, LocallyConstant.zero(3)) == pytest.approx(0.0, abs=1e-12)


def test_transfer_refuses_reducible():
    with pytest.raises(NotIrreducible):
        transfer_pressure(SftSystem([[1, 1], [0, 1]]), ZERO)
    with pytest.raises(ValueError):
        transfer_pressure(FULL, LocallyConstant(2, 3, np.zeros(8)))


def test_word_count_examples():
    for n in (1, 7, 12):
        assert word_count_pressure(FULL, None, ZERO, n) == pytest.approx(LN2, abs=1e-12)
    assert word_count_pressure(GOLD, None, ZERO, 16) == pytest.approx(GOLDEN_P, abs=0.03)
    beta = LocallyConstant(2, 1, [0.0, 1.0])
    assert word_count_pressure(FULL, None, beta, 12) == pytest.approx(BETA1_P, abs=0.01)
    with pytest.raises(InstanceTooLarge):
        word_count_pressure(FULL, None, ZERO, 30)


def test_word_count_consistency():
    cases = [(GOLD, ZERO), (FULL, LocallyConstant(2, 2, [0.0, 0.5, -0.3, 1.0])),
             (SftSystem([[1, 1, 0], [0, 1, 1], [1, 0, 1]]), LocallyConstant.zero(3))]
    for sys, phi in cases:
        ref = transfer_pressure(sys, phi)
        errs = [abs(word_count_pressure(sys, WholeSpace(), phi, n) - ref) for n in (8, 11, 14)]
        assert errs == sorted(errs, reverse=True)
    sub = SubSft([[1, 1], [1, 0]])
    assert word_count_pressure(FULL, sub, ZERO, 12) == \
        pytest.approx(word_count_pressure(GOLD, None, ZERO, 12), abs=1e-12)


def test_naive_examples():
    assert naive_m_infimum(FULL, None, LN2, ZERO, 3, 1.0, span=0) == pytest.approx(1.0)
    g1 = MistakeFunction.constant(1)
    assert naive_m_infimum(FULL, None, LN2, ZERO, 3, 1.0, "mistake", g1, span=0) <= 1.0
    assert naive_m_infimum(FULL, None, 40.0, ZERO, 3, 0.5, span=1) < 1e-40


def test_branch_and_bound_matches_brute_force(rng):
    for _ in range(40):
        n = int(rng.integers(1, 9))
        k = int(rng.integers(1, 9))
        masks = [int(m) for m in rng.integers(0, 1 << n, size=k)] + [1 << i for i in range(n)]
        weights = list(rng.random(len(masks)) * 3 + 0.1)
        best = math.inf
        for r in range(1, len(masks) + 1):
            for combo in itertools.combinations(range(len(masks)), r):
                acc = 0
                for i in combo:
                    acc |= masks[i]
                if acc == (1 << n) - 1:
                    best = min(best, math.fsum(weights[i] for i in combo))
            if r >= 5:
                break
        chosen = branch_and_bound_cover(n, masks, weights)
        got = math.fsum(weights[i] for i in chosen)
        acc = 0
        for i in chosen:
            acc |= masks[i]
        assert acc == (1 << n) - 1
        assert got <= best + 1e-12
