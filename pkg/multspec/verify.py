"""Invariant suites behind `multspec verify`."""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from .config import settings
from .errors import DomainError, OnCurveError
from .multipliers import fredholm_analysis, is_invertible
from .numerics import (
    circle_mean,
    fit_loglog_slope,
    gamma_ratio_check,
    log_gamma,
    radial_moments,
    winding_number,
)
from .peaks import (
    PeakFamily,
    chu_vandermonde_check,
    exact_asymptote_check,
    normalized_peak,
    parseval_check,
    peak_function,
    peak_norm,
    peak_norm_exact_H2beta,
    peak_norm_exponent,
    uniform_decay_check,
)
from .series import (
    PowerSeries,
    divide_by_root,
    evaluate,
    quotient_radial_derivative,
    radial_derivative,
    series_divide,
    shifted_radial_derivative,
)
from .spaces import (
    bergman_sobolev,
    bloch,
    equivalent_norm_R,
    growth,
    hardy,
    hardy_sobolev,
    norm,
    shift_parameters,
)
from .spectra import (
    connectedness_check,
    essential_spectrum,
    membership,
    spectral_radius_report,
    spectrum,
)
from .symbols import Symbol, boundary_curve, boundary_min_modulus, parse_symbol, zeros_in_disk

logger = logging.getLogger(__name__)

Row = Tuple


@dataclass(frozen=True)
class SuiteResult:
    name: str
    header: Tuple[str, ...]
    rows: Tuple[Row, ...]
    passed: bool


def _literal(c: complex) -> str:
    c = complex(c)
    sign = "+" if c.imag >= 0 else "-"
    return f"({c.real!r}{sign}{abs(c.imag)!r}i)"


def _point_in_annulus(rng: np.random.Generator, low: float, high: float) -> complex:
    return complex(rng.uniform(low, high) * np.exp(2j * np.pi * rng.uniform()))


def random_polynomial_symbol(rng: np.random.Generator, max_degree: int = 3) -> Symbol:
    """c·Π(z - a_i) with roots away from the unit circle."""
    degree = int(rng.integers(1, max_degree + 1))
    roots = [
        _point_in_annulus(rng, 0.0, 0.9) if rng.uniform() < 0.5 else _point_in_annulus(rng, 1.1, 2.0)
        for _ in range(degree)
    ]
    scale = _point_in_annulus(rng, 0.5, 2.0)
    factors = "*".join(f"(z-{_literal(a)})" for a in roots)
    return parse_symbol(f"{_literal(scale)}*{factors}")


def random_rational_symbol(rng: np.random.Generator) -> Symbol:
    """Polynomial over a denominator whose roots lie in 1.3 <= |z| <= 3."""
    numerator = random_polynomial_symbol(rng).render()
    poles = [_point_in_annulus(rng, 1.3, 3.0) for _ in range(int(rng.integers(1, 3)))]
    denominator = "*".join(f"(z-{_literal(b)})" for b in poles)
    return parse_symbol(f"({numerator})/({denominator})")


# --- suites ------------------------------------------------------------------


def suite_stirling() -> SuiteResult:
    rows: List[Row] = []
    passed = True
    for L, M in ((0.5, 0.5), (2.0, 1.0), (3.0, 0.0)):
        errors = {K: gamma_ratio_check(K, L, M) for K in (100, 1000, 1600)}
        at_1000 = errors[1000]
        shrink1 = errors[100].ratio1_error <= 1e-14 or errors[1600].ratio1_error <= errors[100].ratio1_error / 2
        shrink2 = errors[100].ratio2_error <= 1e-14 or errors[1600].ratio2_error <= errors[100].ratio2_error / 2
        ok = at_1000.ratio1_error <= 1e-2 and at_1000.ratio2_error <= 1e-2 and shrink1 and shrink2
        passed &= ok
        rows.append((L, M, at_1000.ratio1_error, at_1000.ratio2_error, ok))
    return SuiteResult("stirling", ("L", "M", "ratio1_error", "ratio2_error", "ok"), tuple(rows), passed)


def suite_parseval() -> SuiteResult:
    rows: List[Row] = []
    for r in (0.0, 0.5, 0.9):
        worst = max(parseval_check(K, r).rel_diff for K in range(31))
        rows.append((r, worst, worst <= 1e-10))
    return SuiteResult("parseval", ("r", "max_rel_diff", "ok"), tuple(rows), all(row[-1] for row in rows))


def suite_chu() -> SuiteResult:
    rows: List[Row] = []
    for gamma in (-0.5, 0.0, 1.7):
        for K in (0, 1, 5, 10, 20, 30, 40):
            diff = chu_vandermonde_check(K, gamma).rel_diff
            rows.append((K, gamma, diff, diff < 1e-11))
    return SuiteResult("chu", ("K", "gamma", "rel_diff", "ok"), tuple(rows), all(row[-1] for row in rows))


def suite_exponents() -> SuiteResult:
    rows: List[Row] = []
    sobolev_grid = tuple(2**j for j in range(6, 13))
    cases = [(hardy_sobolev(beta), 0.05) for beta in (0.75, 1.0, 2.0)]
    cases.append((bergman_sobolev(2.0, 0.0, 2.0), 0.1))
    for space, tol in cases:
        fit = peak_norm_exponent(space, PeakFamily(1.0, space, sobolev_grid))
        # squared-norm exponents
        fitted, predicted = 2.0 * fit.fitted_slope, 2.0 * fit.predicted_slope
        ok = abs(fitted - predicted) <= tol
        rows.append((space.label, fitted, predicted, ok))
    for alpha in (0.25, 0.5, 1.0):
        space = bloch(alpha)
        fit = peak_norm_exponent(space, PeakFamily(1.0, space, sobolev_grid))
        ok = fit.difference <= settings.slope_fit_tol
        rows.append((space.label, fit.fitted_slope, fit.predicted_slope, ok))
    for j in (0, 1):
        ratio = exact_asymptote_check(2, 0.0, j, (4096,)).ratios[0]
        rows.append((f"asymptote j={j}", ratio, 1.0, 0.9 <= ratio <= 1.1))
    return SuiteResult(
        "exponents", ("case", "fitted", "predicted", "ok"), tuple(rows), all(row[-1] for row in rows)
    )


def suite_decay() -> SuiteResult:
    rows: List[Row] = []
    grid = tuple(2**j for j in range(3, 11))
    for space, m in ((bloch(0.5), 0), (hardy_sobolev(1.0), 1)):
        for xi in (1.0, complex(math.cos(2.0), math.sin(2.0))):
            sups = uniform_decay_check(PeakFamily(xi, space, grid), 0.5, m)
            first, last = sups[0][1], sups[-1][1]
            rows.append((space.label, xi, m, first, last, last < 0.1 * first))
    return SuiteResult(
        "decay", ("space", "xi", "m", "first", "last", "ok"), tuple(rows), all(row[-1] for row in rows)
    )


def suite_quotient() -> SuiteResult:
    rng = np.random.default_rng(settings.seed)
    rows: List[Row] = []
    for case in range(10):
        f = PowerSeries(rng.normal(size=6) + 1j * rng.normal(size=6))
        u = PowerSeries([1.0, _point_in_annulus(rng, 0.0, 0.7)])
        N = int(rng.integers(1, 5))
        points = np.array([_point_in_annulus(rng, 0.0, 1.0) for _ in range(100)])
        formula = quotient_radial_derivative(f, u, N, points)
        oracle = evaluate(radial_derivative(series_divide(f, u, 400), N), points)
        floor = 1e-3 * float(np.max(np.abs(oracle)))
        error = float(np.max(np.abs(formula - oracle) / np.maximum(np.abs(oracle), floor)))
        rows.append((case, N, error, error <= 1e-9))
    try:
        quotient_radial_derivative(PowerSeries([1.0]), PowerSeries([1.0, 0.5]), 0, [0.0])
        rejected = False
    except DomainError:
        rejected = True
    rows.append(("N=0", 0, 0.0, rejected))
    return SuiteResult("quotient", ("case", "N", "max_rel_error", "ok"), tuple(rows), all(row[-1] for row in rows))


def suite_numerics() -> SuiteResult:
    rows: List[Row] = []
    lg = log_gamma(11.0)
    rows.append(("log_gamma(11) = ln 10!", lg, abs(lg - math.log(3628800.0)) < 1e-12))
    circle = np.exp(2j * np.pi * np.arange(256) / 256)
    rows.append(("winding(unit circle, 0)", winding_number(circle, 0.0), winding_number(circle, 0.0) == 1))
    rows.append(("winding(unit circle, 2)", winding_number(circle, 2.0), winding_number(circle, 2.0) == 0))
    try:
        winding_number(circle, complex(circle[3]))
        on_curve = False
    except OnCurveError:
        on_curve = True
    rows.append(("winding on the curve signals", 1.0, on_curve))
    mean = circle_mean(lambda t: np.cos(t) ** 2, 64)
    rows.append(("mean of cos^2", mean, abs(mean - 0.5) < 1e-14))
    slope = fit_loglog_slope([(k, 3.0 * k**1.5) for k in (2.0, 4.0, 8.0, 16.0)]).slope
    rows.append(("slope of 3k^1.5", slope, abs(slope - 1.5) < 1e-12))
    moments = radial_moments(0.0, 4)
    rows.append(("dA moments 1/(k+1)", float(moments[3]), abs(moments[3] - 0.25) < 1e-14))
    return SuiteResult("numerics", ("check", "value", "ok"), tuple(rows), all(row[-1] for row in rows))


def suite_series() -> SuiteResult:
    rows: List[Row] = []
    product = PowerSeries([1.0, 1.0]) * PowerSeries([1.0, -1.0])
    rows.append(("(1+z)(1-z) = 1-z^2", product.allclose(PowerSeries([1.0, 0.0, -1.0]))))
    f = PowerSeries([0.0, 0.5, 1.0, -2.0, 0.25])
    composed = radial_derivative(radial_derivative(f, 0.5), 1.25)
    rows.append(("R^a R^b = R^(a+b)", composed.allclose(radial_derivative(f, 1.75))))
    g = PowerSeries([2.0, -1.0, 0.5])
    lhs = radial_derivative(f * g, 1.0)
    rhs = radial_derivative(f, 1.0) * g + f * radial_derivative(g, 1.0)
    rows.append(("R(fg) = R(f)g + fR(g)", lhs.allclose(rhs)))
    cubic = PowerSeries([1.0, 3.0, 3.0, 1.0]) * (1.0 / 8.0)
    quotient = divide_by_root(cubic, -1.0)
    rows.append(("((1+z)/2)^3 / (z+1)", quotient.allclose(PowerSeries([0.125, 0.25, 0.125]))))
    return SuiteResult("series", ("check", "ok"), tuple(rows), all(row[-1] for row in rows))


def suite_spaces() -> SuiteResult:
    rows: List[Row] = []
    ks = tuple(2**j for j in range(3, 11))
    space = bergman_sobolev(2, 1, 2)
    shifted = shift_parameters(space, 1)
    peaks = [peak_function(1.0, k) for k in ks]
    to_R = [norm(space, f) / equivalent_norm_R(space, f) for f in peaks]
    to_shift = [norm(space, f) / norm(shifted, f) for f in peaks]
    for label, ratios in (("norm / R-norm", to_R), (f"norm / {shifted.label}", to_shift)):
        spread = max(ratios) / min(ratios)
        rows.append((label, spread, spread <= 10.0))

    base = bergman_sobolev(2, 2, 2)
    fits = [peak_norm_exponent(s, PeakFamily(1.0, s, tuple(2**j for j in range(6, 13)))) for s in (base, shift_parameters(base, 1))]
    gap = abs(fits[0].fitted_slope - fits[1].fitted_slope)
    rows.append(("shifted spaces share the exponent", gap, gap <= 0.1))

    f = PowerSeries([0.5, -1.0, 0.25, 2.0])
    values = [norm(growth(alpha), f) for alpha in (0.25, 0.5, 1.0, 2.0, 4.0)]
    monotone = all(b <= a + 1e-12 for a, b in zip(values, values[1:]))
    rows.append(("growth norm decreases in alpha", values[0] - values[-1], monotone))
    return SuiteResult("spaces", ("check", "value", "ok"), tuple(rows), all(row[-1] for row in rows))


def suite_symbols() -> SuiteResult:
    rows: List[Row] = []
    rng = np.random.default_rng(settings.seed)
    points = np.array([0.0, 0.4 + 0.3j, -0.9, 1j, 0.6 - 0.6j])
    worst = 0.0
    for _ in range(20):
        u = random_rational_symbol(rng)
        again = parse_symbol(u.render())
        reference = u.values(points)
        error = np.abs(again.values(points) - reference) / np.maximum(np.abs(reference), 1.0)
        worst = max(worst, float(np.max(error)))
    rows.append(("render round trip", worst, worst <= 1e-12))

    mismatches = checked = 0
    while checked < 50:
        u = random_polynomial_symbol(rng, max_degree=6)
        lam = complex(*rng.uniform(-1.0, 1.0, size=2))
        if boundary_min_modulus(u, lam).min <= 0.01:
            continue
        _, curve = boundary_curve(u)
        mismatches += zeros_in_disk(u, lam).total_count != winding_number(curve - lam, 0.0)
        checked += 1
    rows.append(("zero count equals winding", mismatches, mismatches == 0))
    return SuiteResult("symbols", ("check", "value", "ok"), tuple(rows), all(row[-1] for row in rows))


def suite_peaks() -> SuiteResult:
    rows: List[Row] = []
    xi = complex(math.cos(2.0), math.sin(2.0))
    for space in (hardy_sobolev(1.0), bergman_sobolev(2, 0.5, 1.0), hardy(2)):
        diff = max(abs(norm(space, peak_function(xi, k)) / peak_norm(space, k) - 1.0) for k in (3, 10, 40))
        rows.append((f"rotation covariance {space.label}", diff, diff <= 1e-8))

    for space in (hardy_sobolev(1.0), bergman_sobolev(2, 0.0, 1.0)):
        family = PeakFamily(-1.0, space, (4, 16, 64))
        diff = max(abs(norm(space, normalized_peak(family, k)) - 1.0) for k in family.k_grid)
        rows.append((f"unit norm after normalization {space.label}", diff, diff <= 1e-8))

    for beta in (0, 1, 2):
        worst = 0.0
        for k in (1, 8, 64):
            g = shifted_radial_derivative(peak_function(1.0, k), beta)
            quadrature = math.sqrt(circle_mean(lambda t: np.abs(evaluate(g, np.exp(1j * t))) ** 2, 4 * k + 8))
            worst = max(worst, abs(quadrature / peak_norm_exact_H2beta(k, beta) - 1.0))
        rows.append((f"H2 beta={beta} against quadrature", worst, worst <= 1e-9))
    return SuiteResult("peaks", ("check", "value", "ok"), tuple(rows), all(row[-1] for row in rows))


def _containment_violations(u: Symbol) -> int:
    ess = essential_spectrum(u, bloch(0.5))
    spec = spectrum(u)
    bad = 0
    for x in np.linspace(-1.5, 1.5, 41):
        for y in np.linspace(-1.5, 1.5, 41):
            lam = complex(x, y)
            if membership(ess, lam) != "outside":
                bad += membership(spec, lam) == "outside"
    return bad


def _grid_disagreements(u: Symbol, centre: complex, band: float) -> int:
    est = spectrum(u)
    bad = 0
    for x in np.linspace(-1.5, 1.5, 41):
        for y in np.linspace(-1.5, 1.5, 41):
            lam = centre + complex(x, y)
            distance = abs(abs(lam - centre) - 1.0)
            got = membership(est, lam)
            if distance <= band:
                continue
            expected = "inside" if abs(lam - centre) < 1.0 else "outside"
            bad += got != expected
    return bad


def suite_spectra() -> SuiteResult:
    rows: List[Row] = []
    for text, centre in (("z", 0j), ("z-2", -2 + 0j)):
        bad = _grid_disagreements(parse_symbol(text), centre, 0.01)
        rows.append((f"disk membership {text}", bad, bad == 0))

    z = parse_symbol("z")
    ess = essential_spectrum(z, bloch(0.5))
    spread = float(np.max(np.abs(np.abs(ess.boundary_curves[0]) - 1.0)))
    rows.append(("essential of z on unit circle", spread, spread <= 1e-6))
    split = membership(ess, 0.0) == "outside" and membership(spectrum(z), 0.0) == "inside"
    rows.append(("0 outside essential, inside spectrum", 0.0, split))

    for text in ("z", "z^2+3", "(1+z)/2"):
        report = spectral_radius_report(parse_symbol(text), bloch(0.5))
        rows.append((f"radius coincidence {text}", report.spread, report.spread <= 1e-6))

    for text, kind in (("z", "essential"), ("z^2", "spectrum"), ("B(0.5)*B(-0.5)", "essential")):
        u = parse_symbol(text)
        est = essential_spectrum(u, bloch(0.5)) if kind == "essential" else spectrum(u)
        rows.append((f"connected {kind} of {text}", 0.0, connectedness_check(est)))

    for text in ("B(0.5)*z+0.25", "z^2", "(z-0.5)*(z-2)"):
        bad = _containment_violations(parse_symbol(text))
        rows.append((f"essential inside spectrum {text}", bad, bad == 0))
    return SuiteResult("spectra", ("check", "value", "ok"), tuple(rows), all(row[-1] for row in rows))


def suite_fredholm() -> SuiteResult:
    rows: List[Row] = []
    space = bloch(0.5)
    cases = [("(z-0.5)*(z-2)", -1), ("z", -1), ("z^2", -2), ("z^3", -3)]
    for text, expected in cases:
        report = fredholm_analysis(parse_symbol(text), 0.0, space)
        rows.append((f"index of {text}", report.index, report.fredholm and report.index == expected))

    ray = complex(math.cos(math.pi / 5), math.sin(math.pi / 5))
    z = parse_symbol("z")
    flips_ok = True
    for t in np.linspace(0.9, 1.1, 41):
        report = fredholm_analysis(z, t * ray, space)
        if abs(t - 1.0) > 0.01:
            flips_ok &= report.fredholm and report.index == (-1 if t < 1.0 else 0)
        elif abs(t - 1.0) < 1e-12:
            flips_ok &= not report.fredholm
    rows.append(("verdict flips at the curve", 0, flips_ok))

    u = parse_symbol("(z-0.5)*(z-2)")
    base = fredholm_analysis(u, 0.3, space)
    for c in (2.0, 1j, -3.0):
        scaled = fredholm_analysis(u.scaled(c), 0.3 * c, space)
        same = scaled.fredholm == base.fredholm and scaled.index == base.index
        rows.append((f"scale invariance c={c}", scaled.index, same))

    rng = np.random.default_rng(settings.seed)
    disagreements = 0
    for _ in range(30):
        v = random_rational_symbol(rng)
        invertible = is_invertible(v).invertible
        outside = membership(spectrum(v), 0.0) == "outside"
        disagreements += invertible != outside
    rows.append(("invertible iff 0 outside spectrum", disagreements, disagreements == 0))
    return SuiteResult("fredholm", ("check", "value", "ok"), tuple(rows), all(row[-1] for row in rows))


SUITES: Dict[str, Callable[[], SuiteResult]] = {
    "stirling": suite_stirling,
    "parseval": suite_parseval,
    "chu": suite_chu,
    "exponents": suite_exponents,
    "decay": suite_decay,
    "quotient": suite_quotient,
    "numerics": suite_numerics,
    "series": suite_series,
    "spaces": suite_spaces,
    "symbols": suite_symbols,
    "peaks": suite_peaks,
    "spectra": suite_spectra,
    "fredholm": suite_fredholm,
}


def run_suites(names: Sequence[str]) -> List[SuiteResult]:
    """Run named suites; "all" expands to every suite in a fixed order."""
    selected: List[str] = []
    for name in names:
        if name == "all":
            selected.extend(SUITES)
        elif name in SUITES:
            selected.append(name)
        else:
            raise DomainError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    results = []
    for name in dict.fromkeys(selected):
        result = SUITES[name]()
        logger.info("suite %s: %s", name, "pass" if result.passed else "FAIL")
        results.append(result)
    return results
