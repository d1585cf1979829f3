import math

import numpy as np
import pytest

from multspec.errors import DomainError, NotAZeroError, SpecError
from multspec.numerics import circle_mean
from multspec.peaks import (
    PeakFamily,
    bloch_divide_bound_check,
    chu_vandermonde_check,
    exact_asymptote_check,
    normalized_peak,
    parseval_check,
    peak_function,
    peak_norm,
    peak_norm_exact_H2beta,
    peak_norm_exponent,
    peak_power_integral,
    predicted_norm_exponent,
    uniform_decay_check,
)
from multspec.series import PowerSeries, evaluate, shifted_radial_derivative
from multspec.spaces import bergman_sobolev, bloch, growth, hardy, hardy_sobolev, norm, shift_parameters

SOBOLEV_GRID = tuple(2**j for j in range(6, 13))


def test_peak_function_examples():
    assert np.allclose(peak_function(1.0, 0).coeffs, [1.0])
    assert np.allclose(peak_function(1.0, 1).coeffs, [0.5, 0.5])
    g = peak_function(1j, 7)
    assert evaluate(g, 1j) == pytest.approx(1.0)
    assert abs(evaluate(g, -1j)) < 1e-15
    with pytest.raises(DomainError):
        peak_function(1.2, 3)
    with pytest.raises(DomainError):
        PeakFamily(0.5, bloch(0.5))


def test_peak_norm_exact_H2beta_examples():
    assert peak_norm_exact_H2beta(0, 1.3) == pytest.approx(1.0)
    assert peak_norm_exact_H2beta(1, 0.0) == pytest.approx(1.0 / math.sqrt(2.0))


@pytest.mark.parametrize("beta", [0, 1, 2])
def test_H2beta_oracle_matches_circle_quadrature(beta):
    for k in (1, 8, 64):
        g = shifted_radial_derivative(peak_function(1.0, k), beta)
        quadrature = math.sqrt(circle_mean(lambda t: np.abs(evaluate(g, np.exp(1j * t))) ** 2, 4 * k + 8))
        assert quadrature == pytest.approx(peak_norm_exact_H2beta(k, beta), rel=1e-9)


def test_peak_norms_match_generic_norms():
    for space in (bergman_sobolev(2, 0.5, 1.0), hardy(2), hardy(3), bergman_sobolev(3, 0, 0)):
        for k in (0, 3, 10):
            assert peak_norm(space, k) == pytest.approx(norm(space, peak_function(1.0, k)), rel=1e-8)


def test_peak_power_integral_small_cases():
    # |(1+z)/2|^2 integrates to (1 + 1/(gamma+2))/4 against dA_gamma
    for gamma in (-1.0, 0.0, 1.5):
        assert peak_power_integral(2.0, gamma) == pytest.approx((1.0 + 1.0 / (gamma + 2.0)) / 4.0)
    assert peak_power_integral(0.0, 0.0) == pytest.approx(1.0)


def test_normalized_peak_has_unit_norm():
    family = PeakFamily(-1.0, hardy_sobolev(1.0), (4, 16))
    for k in family.k_grid:
        assert norm(family.space, normalized_peak(family, k)) == pytest.approx(1.0)


def test_parseval_examples():
    check = parseval_check(1, 0.0)
    assert check.quadrature == pytest.approx(2 * math.pi)
    assert check.coefficient_sum == pytest.approx(2 * math.pi)
    assert parseval_check(20, 0.9).rel_diff <= 1e-10
    with pytest.raises(DomainError):
        parseval_check(3, 1.0)


def test_chu_vandermonde_examples():
    check = chu_vandermonde_check(1, 0.0)
    assert check.lhs == pytest.approx(1.5)
    assert check.rhs == pytest.approx(1.5)
    for gamma in (-0.5, 0.0, 1.7):
        zero = chu_vandermonde_check(0, gamma)
        assert zero.lhs == pytest.approx(1.0 / (gamma + 1.0))
        assert zero.rhs == pytest.approx(1.0 / (gamma + 1.0))
    assert chu_vandermonde_check(40, 1.7).rel_diff <= 1e-11
    with pytest.raises(DomainError):
        chu_vandermonde_check(3, -1.0)


def test_predicted_exponents():
    assert predicted_norm_exponent(hardy_sobolev(1.0)) == pytest.approx(0.75)
    assert predicted_norm_exponent(bloch(0.5)) == pytest.approx(0.5)
    assert predicted_norm_exponent(bloch(1.0)) == pytest.approx(0.0)
    with pytest.raises(SpecError):
        predicted_norm_exponent(growth(0.5))


@pytest.mark.parametrize("beta", [0.75, 1.0, 2.0])
def test_hardy_sobolev_exponent_fit(beta):
    space = hardy_sobolev(beta)
    fit = peak_norm_exponent(space, PeakFamily(1.0, space, SOBOLEV_GRID))
    assert abs(2 * fit.fitted_slope - (2 * beta - 0.5)) <= 0.05
    assert [k for k, _ in fit.norms] == list(SOBOLEV_GRID)


def test_bergman_sobolev_exponent_fit():
    space = bergman_sobolev(2, 0, 2)
    fit = peak_norm_exponent(space, PeakFamily(1.0, space, SOBOLEV_GRID))
    assert abs(2 * fit.fitted_slope - 2.5) <= 0.1


def test_exponent_is_shared_by_shifted_spaces():
    space = bergman_sobolev(2, 2, 2)
    shifted = shift_parameters(space, 1)
    fits = [peak_norm_exponent(s, PeakFamily(1.0, s, SOBOLEV_GRID)) for s in (space, shifted)]
    assert abs(fits[0].fitted_slope - fits[1].fitted_slope) <= 0.1


@pytest.mark.parametrize("alpha", [0.5, 1.0])
def test_bloch_exponent_fit(alpha):
    space = bloch(alpha)
    fit = peak_norm_exponent(space, PeakFamily(1.0, space, SOBOLEV_GRID))
    assert fit.difference <= 0.05


def test_exact_asymptote_p2():
    for j in (0, 1):
        ratio = exact_asymptote_check(2, 0.0, j, (2048, 4096)).ratios[-1]
        assert 0.9 <= ratio <= 1.1


def test_exact_asymptote_p1_tends_to_one():
    ratios = exact_asymptote_check(1, 0.0, 0, (64, 512, 2048)).ratios
    assert ratios[-1] == pytest.approx(1.0, abs=0.05)


def test_exact_asymptote_rejects_fractional_p():
    with pytest.raises(DomainError):
        exact_asymptote_check(1.5, 0.0, 0, (64,))


def test_uniform_decay_bloch():
    family = PeakFamily(1.0, bloch(0.5), tuple(2**j for j in range(3, 11)))
    sups = uniform_decay_check(family, 0.5, 0)
    assert sups[-1][1] < 0.1 * sups[0][1]


def test_uniform_decay_derivative_hardy_sobolev():
    family = PeakFamily(-1.0, hardy_sobolev(1.0), tuple(2**j for j in range(3, 11)))
    sups = uniform_decay_check(family, 0.5, 1)
    assert sups[-1][1] < 0.1 * sups[0][1]


def test_uniform_decay_at_k_zero_is_flat():
    family = PeakFamily(1.0, hardy_sobolev(0.0), (0, 1))
    sups = dict(uniform_decay_check(family, 1.0, 0))
    assert sups[0] == pytest.approx(1.0)


def test_bloch_divide_bound_examples():
    linear = bloch_divide_bound_check(PowerSeries([-0.5, 1.0]), 0.5, 0, 1.0)
    assert linear.measured <= 1.0 <= linear.proof_bound

    quadratic = bloch_divide_bound_check(PowerSeries([-0.25, 0.0, 1.0]), 0.5, 1, 1.0)
    assert quadratic.measured <= quadratic.proof_bound

    peak = bloch_divide_bound_check(PowerSeries([0.5, 0.5]) ** 8 - PowerSeries([0.5**8]), 0.0, 2, 1.0)
    assert peak.measured <= peak.proof_bound


def test_bloch_divide_bound_rejects_non_zero():
    with pytest.raises(NotAZeroError):
        bloch_divide_bound_check(PowerSeries([1.0, 1.0]), 0.5, 1, 1.0)
