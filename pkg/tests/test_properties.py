import cmath

import numpy as np
from hypothesis import HealthCheck, given, settings, strategies as st

from multspec.multipliers import fredholm_analysis
from multspec.series import PowerSeries, complex_derivative, radial_derivative, shifted_radial_derivative
from multspec.spaces import bergman_sobolev, bloch, hardy_sobolev, norm
from multspec.symbols import parse_symbol
from multspec.verify import random_polynomial_symbol, random_rational_symbol

coefficients = st.lists(
    st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
    min_size=1,
    max_size=12,
)
exponents = st.floats(min_value=0.0, max_value=3.0)
seeds = st.integers(min_value=0, max_value=2**32 - 1)

# the conftest settings snapshot is function scoped
quick = settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
slow = settings(max_examples=8, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])

POINTS = np.array([0.0, 0.3 + 0.4j, -0.7j, 0.95, -0.5 - 0.5j])


def _close(f: PowerSeries, g: PowerSeries) -> bool:
    K = max(f.truncation_degree, g.truncation_degree)
    return bool(np.allclose(f.padded(K), g.padded(K), rtol=1e-9, atol=1e-9))


@quick
@given(coefficients, exponents, exponents)
def test_radial_derivatives_compose(coeffs, a, b):
    f = PowerSeries(coeffs)
    assert _close(radial_derivative(radial_derivative(f, a), b), radial_derivative(f, a + b))
    assert _close(
        shifted_radial_derivative(shifted_radial_derivative(f, a), b),
        shifted_radial_derivative(f, a + b),
    )


@quick
@given(coefficients, coefficients)
def test_product_rule(f_coeffs, g_coeffs):
    f, g = PowerSeries(f_coeffs), PowerSeries(g_coeffs)
    left = complex_derivative(f * g)
    right = complex_derivative(f) * g + f * complex_derivative(g)
    assert _close(left, right)


@quick
@given(coefficients, st.floats(min_value=0.0, max_value=2 * np.pi))
def test_hilbert_norms_are_rotation_invariant(coeffs, theta):
    f = PowerSeries(coeffs)
    k = np.arange(len(coeffs))
    rotated = PowerSeries(np.asarray(coeffs, dtype=complex) * np.exp(1j * k * theta))
    for space in (hardy_sobolev(1.5), bergman_sobolev(2, 1, 0.5)):
        assert np.isclose(norm(space, rotated), norm(space, f), rtol=1e-9, atol=1e-12)


@quick
@given(seeds)
def test_render_round_trips(seed):
    u = random_rational_symbol(np.random.default_rng(seed))
    again = parse_symbol(u.render())
    assert np.allclose(again.values(POINTS), u.values(POINTS), rtol=1e-12, atol=1e-14)


@slow
@given(seeds, seeds)
def test_fredholm_index_is_additive(seed_a, seed_b):
    a = random_polynomial_symbol(np.random.default_rng(seed_a))
    b = random_polynomial_symbol(np.random.default_rng(seed_b))
    space = bloch(0.5)
    product = fredholm_analysis(a * b, 0.0, space)
    parts = [fredholm_analysis(v, 0.0, space) for v in (a, b)]
    assert product.fredholm and all(p.fredholm for p in parts)
    assert product.index == parts[0].index + parts[1].index


@slow
@given(st.floats(min_value=0.0, max_value=2 * np.pi), st.floats(min_value=0.5, max_value=3.0))
def test_fredholm_verdict_commutes_with_rotation(theta, scale):
    u = parse_symbol("(z-0.5)*(z-2)")
    c = scale * cmath.exp(1j * theta)
    base = fredholm_analysis(u, 0.3, bloch(0.5))
    scaled = fredholm_analysis(u.scaled(c), 0.3 * c, bloch(0.5))
    assert (scaled.fredholm, scaled.index) == (base.fredholm, base.index)
