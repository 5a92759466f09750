from fractions import Fraction

import pytest

from falg.errors import TruncationBudgetError
from falg.higher import ArElement, ar_pow, tail_generator
from falg.module_algebra import ModuleAction, ModuleElement
from falg.seminorms import disc_family, tau_c_family
from falg.series import NUMERIC, Monomial, PowerSeries
from falg.spectral import (
    INCONCLUSIVE,
    NILPOTENT,
    QUASINILPOTENT,
    check_power_budget,
    level_seminorm,
    nilpotency_index,
    power_budget,
    quasinil_nonnil_certificate,
    spectral_radius_estimate,
)

X0 = Monomial.var(0)


@pytest.mark.parametrize("r", range(1, 7))
def test_tail_generator_index_is_r_plus_one(r):
    assert nilpotency_index(tail_generator(1, r), r + 2) == r + 1


def test_index_of_higher_generators():
    # e_j^s lands at index j s, so e_2 in rank 5 squares to e_4 and cubes to 0
    assert nilpotency_index(tail_generator(2, 5), 6) == 3
    assert nilpotency_index(ArElement(PowerSeries.zero(0), [0] * 3), 2) == 1


def test_nilpotency_index_absent():
    x = PowerSeries({X0: 1}, 10)
    assert nilpotency_index(x, 5) is None
    with pytest.raises(TruncationBudgetError):
        nilpotency_index(PowerSeries({X0: 1}, 4), 5)


def test_module_square_zero_index():
    u = ModuleElement(PowerSeries.zero(4), PowerSeries({X0: 1}, 4))
    assert nilpotency_index(u, 3, ModuleAction("self")) == 2
    assert power_budget(u, 3) == 1


def test_infinite_tail_budget():
    u = tail_generator(2, 8, infinite=True)
    check_power_budget(u, 4)
    with pytest.raises(TruncationBudgetError):
        check_power_budget(u, 5)


def test_tau_c_certifies_formal_quasinilpotence():
    # X0 is not nilpotent, but p_k(X0^n) = 0 once n > k
    x = PowerSeries({X0: Fraction(1, 2)}, 10)
    rep = spectral_radius_estimate(x, 3, 5)
    assert rep.certified_zero[3]
    assert rep.estimates[3] == 0
    assert rep.verdict == QUASINILPOTENT
    values = [v for _, v, _ in rep.levels[3]]
    assert values == [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), 0, 0]


def test_unit_has_radius_one():
    rep = spectral_radius_estimate(PowerSeries.one(4), 2, 6)
    assert rep.verdict == INCONCLUSIVE
    assert rep.estimates[2] == pytest.approx(1.0)


def test_disc_family_needs_budget():
    x = PowerSeries.from_coeffs([0, 1], 3, NUMERIC)
    with pytest.raises(TruncationBudgetError):
        spectral_radius_estimate(x, 1, 4, disc_family())
    x = PowerSeries.from_coeffs([0, 1], 8, NUMERIC)
    rep = spectral_radius_estimate(x, 2, 8, disc_family())
    assert rep.estimates[2] == pytest.approx(1.5)


def test_nilpotent_verdict():
    rep = spectral_radius_estimate(tail_generator(1, 3), 2, 6)
    assert rep.verdict == NILPOTENT
    assert rep.nilpotent_index == 4


def test_level_seminorm_reads_first_k_tail_entries():
    u = ArElement(PowerSeries.zero(0), [1, 2, 3])
    assert level_seminorm(u, 2, tau_c_family()) == 3
    assert level_seminorm(u, 5, tau_c_family()) == 6


@pytest.mark.parametrize("R", [4, 16, 32])
def test_quasinil_certificate(R):
    rep = quasinil_nonnil_certificate(R)
    assert rep.nonzero_through == R
    assert all(rep.certified_zero[k] for k in range(1, R + 1))
    assert rep.verdict == QUASINILPOTENT
    e1 = tail_generator(1, R, infinite=True)
    assert not ar_pow(e1, R).is_zero()


def test_quasinil_certificate_edge_cases():
    with pytest.raises(ValueError):
        quasinil_nonnil_certificate(3)
    zero = ArElement(PowerSeries.zero(0), [0] * 8, infinite=True)
    rep = quasinil_nonnil_certificate(8, zero)
    assert rep.verdict == NILPOTENT and rep.nilpotent_index == 1
    with pytest.raises(ValueError):
        quasinil_nonnil_certificate(8, ArElement(PowerSeries.one(0), [0] * 8, infinite=True))
