import logging

import numpy as np
import pytest

from multspec.errors import DomainError, LowerBoundError, NotAZeroError
from multspec.series import (
    MultiPoly,
    PowerSeries,
    complex_derivative,
    divide_by_root,
    evaluate,
    multiply,
    quotient_radial_derivative,
    radial_derivative,
    series_divide,
    shifted_radial_derivative,
)


def peak(k):
    return PowerSeries([0.5, 0.5]) ** k


def test_radial_derivative_examples():
    assert radial_derivative(PowerSeries([1.0]), 0.7).allclose(PowerSeries([0.0]))
    assert radial_derivative(PowerSeries.monomial(3), 0.5).allclose(PowerSeries.monomial(3, np.sqrt(3.0)))
    assert radial_derivative(PowerSeries.monomial(1), 1.0).allclose(PowerSeries.monomial(1))


def test_shifted_radial_derivative_examples():
    assert shifted_radial_derivative(PowerSeries([1.0]), 2.5).allclose(PowerSeries([1.0]))
    assert shifted_radial_derivative(PowerSeries.monomial(1), 2.0).allclose(PowerSeries.monomial(1, 4.0))

    f = PowerSeries([1.0, 1.0, 1.0])
    assert shifted_radial_derivative(shifted_radial_derivative(f, 1.3), -1.3).allclose(f)


def test_radial_derivative_keeps_truncation_flag():
    f = PowerSeries([1.0, 2.0, 3.0], exact=False)
    assert not radial_derivative(f, 1.0).exact
    assert radial_derivative(f, 1.0).truncation_degree == 2


def test_complex_derivative_examples():
    assert complex_derivative(PowerSeries.monomial(2)).allclose(PowerSeries([0.0, 2.0]))
    assert complex_derivative(PowerSeries([5.0])).allclose(PowerSeries([0.0]))
    assert complex_derivative(peak(3)).allclose(peak(2) * (3.0 / 2.0))


def test_divide_by_root_examples():
    assert divide_by_root(PowerSeries([-0.25, 0.0, 1.0]), 0.5).allclose(PowerSeries([0.5, 1.0]))
    assert divide_by_root(PowerSeries.monomial(1), 0.0).allclose(PowerSeries([1.0]))
    assert divide_by_root(peak(3), -1.0).allclose(peak(2) * 0.5)


def test_divide_by_root_rejects_non_zero():
    with pytest.raises(NotAZeroError) as excinfo:
        divide_by_root(PowerSeries([1.0, 1.0]), 0.5)
    assert excinfo.value.residual == pytest.approx(1.5)
    with pytest.raises(DomainError):
        divide_by_root(PowerSeries([-2.0, 1.0]), 2.0)


def test_multiply_and_evaluate_examples():
    assert multiply(PowerSeries([1.0, 1.0]), PowerSeries([1.0, -1.0])).allclose(PowerSeries([1.0, 0.0, -1.0]))
    assert evaluate(PowerSeries.monomial(2), 1j) == pytest.approx(-1.0)
    assert (peak(2) * peak(3)).allclose(peak(5))
    with pytest.raises(DomainError):
        evaluate(PowerSeries.monomial(1), 1.5)


def test_truncated_operands_cap_products():
    exact = PowerSeries([1.0, 1.0, 1.0, 1.0])
    truncated = PowerSeries([1.0, 1.0, 1.0], exact=False)
    product = multiply(exact, truncated)
    assert not product.exact
    assert product.truncation_degree == 2
    assert (exact * exact).exact


def test_series_divide_geometric():
    quotient = series_divide(PowerSeries([1.0]), PowerSeries([1.0, -0.5]), 3)
    assert np.allclose(quotient.coeffs, [1.0, 0.5, 0.25, 0.125])
    assert not quotient.exact
    with pytest.raises(DomainError):
        series_divide(PowerSeries([1.0]), PowerSeries([0.0, 1.0]), 3)


def test_quotient_radial_derivative_constant_divisor():
    values = quotient_radial_derivative(PowerSeries.monomial(1), PowerSeries([2.0]), 1, [0.3])
    assert values[0] == pytest.approx(0.15)


def test_quotient_radial_derivative_against_division_oracle():
    f, u = PowerSeries.monomial(1), PowerSeries([1.0, -0.5])
    points = np.array([0.0, 0.5, 0.4j, -0.6 + 0.2j])
    oracle = radial_derivative(series_divide(f, u, 60), 1)(points)
    values = quotient_radial_derivative(f, u, 1, points)
    assert np.allclose(values, oracle, rtol=1e-9, atol=1e-12)
    assert values[0] == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("N", [0, -1, 1.5])
def test_quotient_radial_derivative_rejects_bad_order(N):
    with pytest.raises(DomainError):
        quotient_radial_derivative(PowerSeries.monomial(1), PowerSeries([2.0]), N, [0.3])


def test_quotient_radial_derivative_needs_lower_bound():
    with pytest.raises(LowerBoundError) as excinfo:
        quotient_radial_derivative(PowerSeries([1.0]), PowerSeries([0.0, 1.0]), 1, [0.5, 0.0])
    assert excinfo.value.point == 0


def test_multipoly_arithmetic_and_evaluation():
    z1 = MultiPoly.coordinate(1, 2)
    z2 = MultiPoly.coordinate(2, 2)
    p = z1 * z2 + z1.scale(3.0) + MultiPoly.constant(2.0, 2)
    points = np.array([[0.5, 1j], [0.25, -0.5]])
    assert np.allclose(p.evaluate(points), [0.5 * 0.25 + 1.5 + 2.0, 1j * -0.5 + 3j + 2.0])
    assert p.total_degree == 2
    assert sorted(p.homogeneous_parts()) == [0, 1, 2]
    assert p.partial(1).terms == {(0, 1): 1.0, (0, 0): 3.0}
    assert p.partial(2).terms == {(1, 0): 1.0}


def test_multipoly_radial_derivative_scales_by_degree():
    z1 = MultiPoly.coordinate(1, 3)
    p = z1**2 + MultiPoly.constant(1.0, 3)
    point = np.array([0.5, 0.1, -0.2])
    assert set(radial_derivative(p, 1.0).terms) == {(2, 0, 0)}
    assert complex(radial_derivative(p, 1.0).evaluate(point)) == pytest.approx(2.0 * 0.25)
    assert complex(shifted_radial_derivative(p, 1.0).evaluate(point)) == pytest.approx(3.0 * 0.25 + 1.0)


def test_multipoly_rejects_bad_dimension():
    with pytest.raises(DomainError):
        MultiPoly.coordinate(1, 4)
    with pytest.raises(DomainError):
        MultiPoly.coordinate(3, 2)


def test_products_above_max_degree_are_truncated(monkeypatch, caplog):
    from multspec import series

    monkeypatch.setattr(series.settings, "max_degree", 4)
    cubic = PowerSeries([1.0, 1.0, 1.0, 1.0])
    with caplog.at_level(logging.WARNING, logger="multspec.series"):
        product = multiply(cubic, cubic)
    assert not product.exact
    assert product.truncation_degree == 4
    assert np.allclose(product.coeffs, [1, 2, 3, 4, 3])
    assert any("MULTSPEC_MAX_DEGREE" in record.getMessage() for record in caplog.records)
