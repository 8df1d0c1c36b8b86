import numpy as np
import pytest

from pressurelab import ConfigError, CylinderUnion, SubSft, WholeSpace, parse_z
from pressurelab.symbolic import SftSystem, count_words


def test_whole_levels_sorted_with_parents(golden):
    levels = WholeSpace().levels(golden, 6)
    for d in range(1, 7):
        words, parent = levels[d]
        assert len(words) == count_words(golden.transitions, d)
        codes = [tuple(w) for w in words]
        assert codes == sorted(codes)
        prev = levels[d - 1][0]
        assert all(tuple(prev[p]) == tuple(w[:-1]) for w, p in zip(words, parent))
        assert np.all(np.diff(parent) >= 0)


def test_subsft_prunes_dead_symbols():
    sys = SftSystem.full_shift(3)
    sub = SubSft([[1, 1, 0], [1, 0, 0], [0, 0, 1]])
    words = sub.words(sys, 4)
    assert len(words) == count_words(np.array([[1, 1, 0], [1, 0, 0], [0, 0, 1]]), 4)
    dead = SubSft([[1, 0, 1], [0, 1, 0], [0, 0, 0]])
    M = dead.matrix(sys)
    assert not M[:, 2].any()
    with pytest.raises(ConfigError):
        SubSft([[1, 1], [1, 1]]).matrix(SftSystem.golden_mean())


def test_cylinder_union_words(full):
    Z = CylinderUnion([(0, 1), (1, 1, 0)])
    assert [tuple(w) for w in Z.words(full, 1)] == [(0,), (1,)]
    assert [tuple(w) for w in Z.words(full, 3)] == [(0, 1, 0), (0, 1, 1), (1, 1, 0)]
    assert Z.contains_word(full, (1,)) and not Z.contains_word(full, (1, 0))
    x = Z.point(full, (1,))
    assert (x.symbol(0), x.symbol(1), x.symbol(2)) == (1, 1, 0)
    coords = Z.extend(full, Z.words(full, 2), 6)
    assert all(any(tuple(c[:len(u)]) == u for u in Z.cylinders) for c in coords)


def test_parse_z(full, golden):
    assert isinstance(parse_z("whole", full), WholeSpace)
    assert parse_z("cylinders:01,110", full).cylinders == [(0, 1), (1, 1, 0)]
    with pytest.raises(ConfigError):
        parse_z("cylinders:11", golden)
    with pytest.raises(ConfigError):
        parse_z("ball:1", full)
    sub = parse_z("subsft:x", full, loader=lambda _: SftSystem.golden_mean())
    assert isinstance(sub, SubSft)
