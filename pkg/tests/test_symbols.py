import numpy as np
import pytest

from multspec.errors import BoundaryZeroError, DomainError, ParseError, SymbolConstructionError
from multspec.symbols import (
    Poly,
    Product,
    ball_fill,
    boundary_max_modulus,
    boundary_min_modulus,
    cluster_roots,
    evaluate,
    parse_constant,
    parse_symbol,
    polynomial_roots,
    sup_norm,
    to_series,
    zeros_in_disk,
)


def test_parse_examples():
    assert parse_symbol("z").variables == {1}
    product = parse_symbol("(z-0.5)*(z-2)").ast
    assert isinstance(product, Product)
    assert isinstance(product.left, Poly) and isinstance(product.right, Poly)
    assert parse_symbol("z1*z2").dimension == 2
    assert parse_symbol("z", 3).dimension == 3


@pytest.mark.parametrize(
    "text",
    ["1/(z-0.5)", "1/(z^2+0.25)", "B(1.5)", "z1/(z2-2)", "1/(z-z)"],
)
def test_construction_errors(text):
    with pytest.raises(SymbolConstructionError):
        parse_symbol(text)


def test_denominator_witness_is_the_bad_root():
    with pytest.raises(SymbolConstructionError) as excinfo:
        parse_symbol("1/(z-0.5)")
    assert excinfo.value.witness == pytest.approx(0.5)


def test_dimension_must_cover_coordinates():
    with pytest.raises(SymbolConstructionError):
        parse_symbol("z2", 1)
    with pytest.raises(SymbolConstructionError):
        parse_symbol("B(0.5)*z2")


@pytest.mark.parametrize(
    "text, position",
    [("z + * 2", 4), ("z^-1", 2), ("(z", 2), ("z $ 1", 2), ("B(z)", 2), ("z z", 2)],
)
def test_parse_errors_carry_position(text, position):
    with pytest.raises(ParseError) as excinfo:
        parse_symbol(text)
    assert excinfo.value.position == position


def test_parse_constant():
    assert parse_constant("0.5-2i") == 0.5 - 2j
    assert parse_constant("-1") == -1
    assert parse_constant("i") == 1j
    with pytest.raises(ParseError):
        parse_constant("z")


def test_evaluate_examples():
    assert evaluate(parse_symbol("z"), 1j) == pytest.approx(1j)
    assert evaluate(parse_symbol("((1+z)/2)^3"), 1.0) == pytest.approx(1.0)
    assert abs(evaluate(parse_symbol("B(0.5)"), 0.5)) < 1e-15
    assert evaluate(parse_symbol("z1*z2", 2), [0.5, 0.5j]) == pytest.approx(0.25j)
    with pytest.raises(DomainError):
        evaluate(parse_symbol("z"), 1.5)
    with pytest.raises(DomainError):
        evaluate(parse_symbol("z1+z2"), [0.8, 0.8])


def test_values_and_derivative_of_blaschke_product():
    u = parse_symbol("B(0.5)*z")
    z = np.array([0.3, -0.2j])
    values, derivs = u.values_and_derivative(z)
    h = 1e-6
    numeric = (u.values(z + h) - u.values(z - h)) / (2 * h)
    assert np.allclose(values, (0.5 - z) / (1 - 0.5 * z) * z)
    assert np.allclose(derivs, numeric, atol=1e-8)


def test_zeros_examples():
    assert zeros_in_disk(parse_symbol("z")).zeros == ((0j, 1),)
    zeros = zeros_in_disk(parse_symbol("z^2")).zeros
    assert len(zeros) == 1 and zeros[0][1] == 2 and abs(zeros[0][0]) < 1e-6
    zeros = zeros_in_disk(parse_symbol("(z-0.5)*(z-2)")).zeros
    assert len(zeros) == 1 and zeros[0][0] == pytest.approx(0.5) and zeros[0][1] == 1


def test_zeros_of_shifted_symbol():
    zeros = zeros_in_disk(parse_symbol("z^2"), 0.25)
    assert sorted(round(z.real, 9) for z, _ in zeros.zeros) == [-0.5, 0.5]
    assert zeros.total_count == 2


def test_zeros_signal_boundary_zero():
    with pytest.raises(BoundaryZeroError) as excinfo:
        zeros_in_disk(parse_symbol("(1+z)/2"))
    assert excinfo.value.angle == pytest.approx(np.pi, abs=1e-6)


def test_boundary_min_modulus_examples():
    assert boundary_min_modulus(parse_symbol("z")).min == pytest.approx(1.0)
    assert boundary_min_modulus(parse_symbol("z"), 2.0).min == pytest.approx(1.0)
    bound = boundary_min_modulus(parse_symbol("(z-0.5)*(z-2)"))
    assert bound.min == pytest.approx(0.5, rel=1e-9)
    assert min(bound.argmin_angle, 2 * np.pi - bound.argmin_angle) < 1e-6
    assert 0.0 < bound.certified_lower <= bound.min


def test_sup_norm_examples():
    assert sup_norm(parse_symbol("z")) == pytest.approx(1.0)
    assert sup_norm(parse_symbol("z^2+3")) == pytest.approx(4.0)
    for k in (1, 4, 9):
        assert sup_norm(parse_symbol(f"((1+z)/2)^{k}")) == pytest.approx(1.0)


def test_boundary_max_in_two_variables():
    peak = boundary_max_modulus(parse_symbol("z1"))
    assert peak.value == pytest.approx(1.0)
    assert abs(peak.witness_point[0]) == pytest.approx(1.0)


def test_to_series_examples():
    assert np.allclose(to_series(parse_symbol("z-2")).coeffs, [-2.0, 1.0])
    assert to_series(parse_symbol("z-2")).exact
    geometric = to_series(parse_symbol("1/(1-z/2)"), 3)
    assert np.allclose(geometric.coeffs, [1.0, 0.5, 0.25, 0.125])
    assert not geometric.exact

    blaschke = to_series(parse_symbol("B(0.5)"), 20).coeffs
    expected = [0.5] + [-0.75 * 0.5 ** (k - 1) for k in range(1, 21)]
    assert np.allclose(blaschke, expected, rtol=1e-12, atol=0)


def test_render_round_trips_values():
    z = np.array([0.0, 0.4 + 0.3j, -0.9, 1j])
    for text in ("z-2", "(1+z)/2", "B(0.5)*B(-0.25+0.5i)", "(z-0.5i)^3/(z-3)", "2.5"):
        u = parse_symbol(text)
        again = parse_symbol(u.render())
        assert np.allclose(again.values(z), u.values(z), rtol=1e-14, atol=1e-15)


def test_render_round_trips_in_two_variables():
    u = parse_symbol("z1*z2 - 3*z2^2 + 0.5i")
    again = parse_symbol(u.render(), 2)
    points = np.array([[0.1, 0.5j, -0.3], [0.7, 0.2, 0.6j]])
    assert np.allclose(again.ball_values(points), u.ball_values(points))


def test_symbol_predicates():
    assert parse_symbol("3-2i").is_constant()
    assert parse_symbol("(z+1)^2/2").is_polynomial()
    assert not parse_symbol("B(0.5)").is_polynomial()
    assert not parse_symbol("1/(z-2)").is_polynomial()


def test_polynomial_roots_and_clusters():
    roots = polynomial_roots([-0.5, -0.5, 1.0])
    assert sorted(np.round(roots.real, 12)) == [-0.5, 1.0]
    assert np.allclose(roots.imag, 0.0, atol=1e-12)
    clusters = cluster_roots(np.array([0.5, 0.5 + 1e-9, -0.25]))
    assert clusters == [(pytest.approx(-0.25), 1), (pytest.approx(0.5), 2)]


def test_ball_fill_points_lie_in_the_ball():
    points = ball_fill(2, 10)
    assert points.shape == (2, 1024)
    radii = np.sqrt(np.sum(np.abs(points) ** 2, axis=0))
    assert radii.max() <= 1.0 + 1e-12
    assert np.sum(np.abs(radii - 1.0) < 1e-12) >= 512
    assert np.array_equal(points, ball_fill(2, 10))


def test_zero_count_matches_winding(rng):
    from multspec.numerics import winding_number
    from multspec.symbols import boundary_curve
    from multspec.verify import random_polynomial_symbol

    checked = 0
    while checked < 50:
        u = random_polynomial_symbol(rng, max_degree=6)
        lam = complex(*rng.uniform(-1.0, 1.0, size=2))
        if boundary_min_modulus(u, lam).min <= 0.01:
            continue
        _, curve = boundary_curve(u)
        assert zeros_in_disk(u, lam).total_count == winding_number(curve - lam, 0.0)
        checked += 1


def test_truncated_series_error_is_small_inside():
    u = parse_symbol("(z-0.5i)^2/((z-2)*(z+1.5i))")
    f = to_series(u, 64)
    z = 0.9 * np.exp(1j * np.linspace(0, 2 * np.pi, 17))
    # poles at radius >= 1.5 give coefficients decaying like 1.5^-k
    assert np.max(np.abs(f(z) - u.values(z))) <= 50 * (0.9 / 1.5) ** 65 / (1 - 0.9 / 1.5)
