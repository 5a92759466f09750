import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from falg.errors import InvalidWeightsError
from falg.seminorms import unit_disc_family
from falg.series import NUMERIC, PowerSeries
from falg.weights import (
    NATURAL,
    SEMISIMPLE,
    UNDETERMINED,
    WeightSequence,
    classify,
    doubly_indexed_family,
    exact_root,
    gamma_estimate,
    monotone_ratio,
    q_k_weighted,
    ratio_terms,
    validate_weights,
    weighted_family,
)


def test_parse_rules():
    assert WeightSequence.parse("factorial") == WeightSequence.factorial()
    assert WeightSequence.parse("k_pow_i_factorial:3").value(2) == 18
    assert WeightSequence.parse("factorial_squared").value(3) == 36
    assert WeightSequence.parse("power_factorial:1/2:2").value(2) == 1
    assert WeightSequence.parse("explicit:1,2,6").length == 3
    with pytest.raises(ValueError):
        WeightSequence.parse("bogus")
    with pytest.raises(InvalidWeightsError):
        WeightSequence.power_factorial(0, 1)


@pytest.mark.parametrize("k0", range(1, 11))
def test_gamma_is_reciprocal_of_base(k0):
    rep = gamma_estimate(WeightSequence.k_pow_i_factorial(k0), 32)
    assert rep.gamma == Fraction(1, k0)
    assert rep.gamma_exact
    assert all(r == Fraction(1, k0) for r in rep.exact_ratios)
    assert rep.classification == SEMISIMPLE
    assert rep.monotone


def test_factorial_squared_is_natural():
    rep = gamma_estimate(WeightSequence.factorial_squared(), 24)
    assert rep.gamma == 0 and rep.gamma_exact
    assert rep.classification == NATURAL
    # (1/k!)^(1/k) decreases towards 0
    assert rep.ratios == sorted(rep.ratios, reverse=True)
    assert rep.ratios[0] == 1.0


def test_explicit_lists_are_undetermined():
    M = WeightSequence.explicit(math.factorial(i) for i in range(1, 9))
    rep = gamma_estimate(M)
    assert rep.K == 8
    assert rep.gamma == 1
    assert rep.bracket == (0, 1)
    assert rep.classification == UNDETERMINED
    assert classify(M) == UNDETERMINED
    with pytest.raises(IndexError):
        gamma_estimate(M, 9)


def test_convexity_violation_detected():
    # M_2 / 2! = 1/2 < (M_1 / 1!)^2 = 1
    check = validate_weights(WeightSequence.explicit([1, 1, 6]))
    assert not check
    assert check.witness == (1, 2)
    with pytest.raises(InvalidWeightsError):
        gamma_estimate(WeightSequence.explicit([1, 1, 6]))
    assert not validate_weights(WeightSequence.explicit([1, -2]))


def test_monotone_ratio_detects_increase():
    # ratios k!/M_k = 1, 1/4, 1/6: 1/4 < (1/6)^(2/3)?  (1/4)^3 = 1/64 < 1/36
    assert monotone_ratio(WeightSequence.explicit([1, 8, 36])) == 2
    assert monotone_ratio(WeightSequence.factorial(), 20) is None


def test_ratio_terms_exact():
    assert ratio_terms(WeightSequence.k_pow_i_factorial(2), 3) == [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)]


@given(st.integers(1, 50), st.integers(1, 50), st.integers(1, 7))
def test_exact_root(a, b, k):
    q = Fraction(a, b)
    assert exact_root(q ** k, k) == q
    r = exact_root(q, k)
    assert r is None or r ** k == q


@given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 3))
def test_scaling_divides_gamma(c, k0, e):
    M = WeightSequence.power_factorial(k0, e)
    assert gamma_estimate(M.scaled(c), 12).gamma == gamma_estimate(M, 12).gamma / c


def test_doubly_indexed_family():
    fam = doubly_indexed_family(range(1, 11), 16)
    assert fam.gammas == [Fraction(1, k) for k in range(1, 11)]
    assert fam.classifications == [SEMISIMPLE] * 10
    assert fam.aggregate_limit == 0


def test_weighted_seminorm():
    z2 = PowerSeries.from_coeffs([0, 0, 1], mode=NUMERIC)
    M = WeightSequence.factorial()
    # sup |z^2| = 1, p'(1) = 2, p''(1) = 2: 1 + 2/1 + 2/2
    assert q_k_weighted(z2, 1, M, unit_disc_family()) == pytest.approx(4.0)
    assert weighted_family(M)(z2, 1) == pytest.approx(1 + 2 + 1)
    with pytest.raises(IndexError):
        q_k_weighted(z2, 1, WeightSequence.explicit([1]))
