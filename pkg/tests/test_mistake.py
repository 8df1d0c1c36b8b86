import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pressurelab import ConfigError, MistakeFunction, MonotonicityViolation, eval_budget, validate

FAMILIES = [MistakeFunction.zero(), MistakeFunction.constant(2.5), MistakeFunction.linear(),
            MistakeFunction.logarithmic(1.0), MistakeFunction.linear(epsilon0=0.25)]


def test_budget_examples():
    assert eval_budget(MistakeFunction.linear(), 10, 0.3) == 3
    assert eval_budget(MistakeFunction.zero(), 1000, 0.9) == 0
    assert eval_budget(MistakeFunction.linear(epsilon0=0.5), 10, 2.0) == 5
    assert eval_budget(None, 10, 0.5) == 0


def test_validate_examples():
    rep = validate(MistakeFunction.linear(), 100, [0.1, 0.01])
    assert rep.ok and rep.densities == pytest.approx([0.1, 0.01])
    rep = validate(MistakeFunction.logarithmic(1.0), 100, [0.1])
    assert rep.densities[0] == pytest.approx(math.log(101) / 100)
    assert validate(MistakeFunction.zero(), 10, [0.5, 0.1]).densities == [0.0, 0.0]


def test_validate_rejects_non_monotone():
    class Decreasing(MistakeFunction):
        def value(self, n, eps):
            return 10.0 - n

    with pytest.raises(MonotonicityViolation) as exc:
        validate(Decreasing(), 5, [0.5])
    assert exc.value.n == 1


def test_parse_round_trip():
    for spec in ("zero", "const:3", "linear", "log:0.5"):
        assert MistakeFunction.parse(spec).spec() == spec
    with pytest.raises(ConfigError):
        MistakeFunction.parse("quadratic")
    with pytest.raises(ConfigError):
        MistakeFunction.parse("const:x")


@given(st.sampled_from(FAMILIES), st.floats(1e-4, 1.0), st.integers(1, 10_000))
def test_budget_monotone_in_n(g, eps, n):
    assert eval_budget(g, n, eps) <= eval_budget(g, n + 1, eps)


@given(st.sampled_from(FAMILIES), st.floats(0.0, 5.0), st.integers(1, 500))
def test_budget_clamps(g, extra, n):
    assert eval_budget(g, n, g.epsilon0 + extra) == eval_budget(g, n, g.epsilon0)


@given(st.floats(1e-6, 1.0), st.integers(1, 10_000))
def test_linear_density_bound(eps, n):
    assert eval_budget(MistakeFunction.linear(), n, eps) <= n * Fraction(repr(eps))


def test_exact_floor_at_representable_products():
    assert eval_budget(MistakeFunction.linear(), 10, 0.1) == 1
    assert eval_budget(MistakeFunction.linear(), 16, 0.0625) == 1
    assert eval_budget(MistakeFunction.linear(), 15, 0.0625) == 0
