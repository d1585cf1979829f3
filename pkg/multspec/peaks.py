"""Peak functions f_{ξ,k} = ((1 + conj(ξ) z)/2)^k and their norm asymptotics."""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np
from scipy.special import gammaln

from .config import settings
from .errors import DomainError, SpecError
from .numerics import circle_mean, fit_loglog_slope, log_binomial, ordered_map, radial_moments, unimodular
from .series import PowerSeries, complex_derivative, divide_by_root, evaluate, radial_derivative
from .spaces import SpaceSpec, norm, weighted_sup

logger = logging.getLogger(__name__)

DEFAULT_K_GRID: Tuple[int, ...] = tuple(2**j for j in range(3, 13))

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class PeakFamily:
    xi: complex
    space: SpaceSpec
    k_grid: Tuple[int, ...] = DEFAULT_K_GRID

    def __post_init__(self) -> None:
        unimodular(self.xi)
        grid = tuple(int(k) for k in self.k_grid)
        if not grid or grid[0] < 0 or any(b <= a for a, b in zip(grid, grid[1:])):
            raise DomainError(f"k_grid must be strictly increasing and non-negative: {grid}")
        object.__setattr__(self, "k_grid", grid)


def peak_function(xi: complex, k: int) -> PowerSeries:
    """Exact coefficients binom(k, n) conj(ξ)^n / 2^k."""
    xi = unimodular(xi)
    if k < 0 or int(k) != k:
        raise DomainError(f"k must be a non-negative integer, got {k}")
    n = np.arange(int(k) + 1)
    magnitude = np.exp(log_binomial(k, n) - k * _LN2)
    phase = np.exp(-1j * n * np.angle(xi))
    return PowerSeries(magnitude * phase)


def peak_norm_exact_H2beta(k: int, beta: float) -> float:
    """‖f_{ξ,k}‖ in H²_β from its coefficients."""
    n = np.arange(int(k) + 1, dtype=float)
    log_terms = 2.0 * beta * np.log1p(n) + 2.0 * log_binomial(k, n) - 2.0 * k * _LN2
    return math.sqrt(math.fsum(np.exp(log_terms)))


def peak_power_integral(s: float, gamma: float) -> float:
    """∫ |(1+z)/2|^s dA_γ for real s >= 0.

    On each circle |1 + re^{it}|^s = |(1 + re^{it})^{s/2}|², so Parseval and
    the radial moments give 2^{-s} Σ_n binom(s/2, n)² Γ(n+1)Γ(γ+2)/Γ(n+γ+2).
    """
    if s < 0:
        raise DomainError("the exponent must be non-negative")
    if gamma < -1:
        raise DomainError(f"γ must be >= -1, got {gamma}")
    a = s / 2.0
    last = int(a) if a == int(a) else int(math.ceil(a)) + 4000
    n = np.arange(last + 1, dtype=float)
    log_moment = gammaln(n + 1.0) + gammaln(gamma + 2.0) - gammaln(n + gamma + 2.0)
    log_terms = 2.0 * log_binomial(a, n) + log_moment - s * _LN2
    return math.fsum(np.exp(log_terms[np.isfinite(log_terms)]))


def _peak_derivative_quantity(k: int, weight: float, derivative: bool):
    def quantity(z: np.ndarray) -> np.ndarray:
        w = (1.0 - np.abs(z) ** 2) ** weight
        base = (1.0 + z) / 2.0
        if derivative:
            return w * (k / 2.0) * np.abs(base) ** (k - 1)
        return w * np.abs(base) ** k

    return quantity


def peak_norm(space: SpaceSpec, k: int) -> float:
    """‖f_{ξ,k}‖ in the space; every supported norm is rotation invariant."""
    if space.n != 1:
        raise SpecError("peak functions live on the disk")
    k = int(k)
    v = space.variant
    if v == "hardy_sobolev":
        return peak_norm_exact_H2beta(k, space.beta)
    if v == "hardy":
        s = k * space.p
        log_mean = gammaln((s + 1.0) / 2.0) - 0.5 * math.log(math.pi) - gammaln(s / 2.0 + 1.0)
        return math.exp(log_mean / space.p)
    if v == "bergman_sobolev" and space.p == 2:
        n = np.arange(k + 1, dtype=float)
        log_terms = (
            2.0 * space.beta * np.log1p(n)
            + 2.0 * log_binomial(k, n)
            - 2.0 * k * _LN2
            + np.log(radial_moments(space.alpha, k))
        )
        return math.sqrt(math.fsum(np.exp(log_terms)))
    if v == "bergman_sobolev":
        return norm(space, peak_function(1.0, k))
    if v == "bloch":
        if k == 0:
            return 1.0
        sup = weighted_sup(_peak_derivative_quantity(k, space.alpha, True))
        return 2.0 ** (-k) + sup.value
    return weighted_sup(_peak_derivative_quantity(k, space.alpha, False)).value


def normalized_peak(family: PeakFamily, k: int) -> PowerSeries:
    """g_{ξ,k} = f_{ξ,k} / ‖f_{ξ,k}‖."""
    return peak_function(family.xi, k) * (1.0 / peak_norm(family.space, k))


@dataclass(frozen=True)
class ParsevalCheck:
    quadrature: float
    coefficient_sum: float

    @property
    def rel_diff(self) -> float:
        return abs(self.quadrature - self.coefficient_sum) / abs(self.coefficient_sum)


def parseval_check(K: int, r: float) -> ParsevalCheck:
    """∫₀^{2π} |1 + re^{it}|^{2K} dt against 2π Σ binom(K,n)² r^{2n}."""
    if not 0 <= K <= 60 or int(K) != K:
        raise DomainError(f"parseval_check needs an integer 0 <= K <= 60, got {K}")
    if not 0.0 <= r < 1.0:
        raise DomainError(f"r must lie in [0, 1), got {r}")
    K = int(K)
    quadrature = 2.0 * math.pi * circle_mean(
        lambda t: np.abs(1.0 + r * np.exp(1j * t)) ** (2 * K), 4 * K + 4
    )
    n = np.arange(K + 1)
    terms = np.exp(2.0 * log_binomial(K, n)) * np.power(r, 2 * n)
    return ParsevalCheck(quadrature=quadrature, coefficient_sum=2.0 * math.pi * math.fsum(terms))


@dataclass(frozen=True)
class ChuVandermondeCheck:
    lhs: float
    rhs: float

    @property
    def rel_diff(self) -> float:
        return abs(self.lhs - self.rhs) / abs(self.rhs)


def chu_vandermonde_check(K: int, gamma: float) -> ChuVandermondeCheck:
    """Σ binom(K,n)² Γ(γ+1)Γ(n+1)/Γ(n+γ+2) against Γ(γ+1)Γ(2K+γ+2)/Γ(K+γ+2)²."""
    if gamma <= -1:
        raise DomainError(f"γ must exceed -1, got {gamma}")
    if not 0 <= K <= 60 or int(K) != K:
        raise DomainError(f"chu_vandermonde_check needs an integer 0 <= K <= 60, got {K}")
    K = int(K)
    n = np.arange(K + 1, dtype=float)
    log_terms = 2.0 * log_binomial(K, n) + gammaln(gamma + 1.0) + gammaln(n + 1.0) - gammaln(n + gamma + 2.0)
    lhs = math.fsum(np.exp(log_terms))
    rhs = math.exp(gammaln(gamma + 1.0) + gammaln(2 * K + gamma + 2.0) - 2.0 * gammaln(K + gamma + 2.0))
    return ChuVandermondeCheck(lhs=lhs, rhs=rhs)


@dataclass(frozen=True)
class ExponentFit:
    fitted_slope: float
    predicted_slope: float
    norms: Tuple[Tuple[int, float], ...] = field(default=())

    @property
    def difference(self) -> float:
        return abs(self.fitted_slope - self.predicted_slope)


def predicted_norm_exponent(space: SpaceSpec) -> float:
    if space.variant == "bloch":
        return 1.0 - space.alpha
    if space.variant in ("bergman_sobolev", "hardy_sobolev"):
        return (-space.alpha + space.beta * space.p - 1.5) / space.p
    raise SpecError(f"no peak-norm exponent is known for {space.label}")


def peak_norm_exponent(space: SpaceSpec, family: PeakFamily) -> ExponentFit:
    """Fitted growth exponent of ‖f_{ξ,k}‖ against (k+1), and its prediction."""
    predicted = predicted_norm_exponent(space)
    norms = ordered_map(lambda k: peak_norm(space, k), family.k_grid)
    fit = fit_loglog_slope([(k + 1.0, value) for k, value in zip(family.k_grid, norms)])
    logger.info("%s: fitted exponent %.4f, predicted %.4f", space.label, fit.slope, predicted)
    return ExponentFit(
        fitted_slope=fit.slope,
        predicted_slope=predicted,
        norms=tuple(zip(family.k_grid, norms)),
    )


@dataclass(frozen=True)
class AsymptoteCheck:
    ratios: Tuple[float, ...]
    k_grid: Tuple[int, ...]


def exact_asymptote_check(p: int, gamma: float, j: int, k_grid: Sequence[int] = DEFAULT_K_GRID) -> AsymptoteCheck:
    """Ratios ‖D^j f_{1,k}‖^p_{A^p_γ} / (Γ(γ+2) 2^{2γ+5/2-jp} / (√π p^{γ+3/2}) (k+1)^{jp-γ-3/2})."""
    if int(p) != p or p < 1:
        raise DomainError(f"the exact constant needs a positive integer p, got {p}")
    if gamma <= -1:
        raise DomainError(f"γ must exceed -1, got {gamma}")
    p, j = int(p), int(j)
    ratios: List[float] = []
    for k in k_grid:
        if k < j:
            raise DomainError(f"k = {k} is smaller than the derivative order {j}")
        log_scale = gammaln(k + 1.0) - gammaln(k - j + 1.0) - j * _LN2
        computed = math.exp(p * log_scale) * peak_power_integral((k - j) * p, gamma)
        log_model = (
            gammaln(gamma + 2.0)
            + (2.0 * gamma + 2.5 - j * p) * _LN2
            - 0.5 * math.log(math.pi)
            - (gamma + 1.5) * math.log(p)
            + (j * p - gamma - 1.5) * math.log(k + 1.0)
        )
        ratios.append(computed / math.exp(log_model))
    return AsymptoteCheck(ratios=tuple(ratios), k_grid=tuple(int(k) for k in k_grid))


def _region_points(xi: complex, delta: float) -> np.ndarray:
    radii = np.concatenate([np.linspace(0.0, 0.95, 39), 1.0 - 2.0 ** (-np.arange(5, 15) / 2.0), [1.0]])
    theta = 2.0 * np.pi * np.arange(192) / 192
    grid = (radii[:, None] * np.exp(1j * theta)[None, :]).ravel()
    phi = 2.0 * np.pi * np.arange(512) / 512
    arc = xi + delta * np.exp(1j * phi)
    points = np.concatenate([grid, arc[np.abs(arc) <= 1.0]])
    return points[np.abs(points - xi) >= delta * (1.0 - 1e-12)]


def uniform_decay_check(family: PeakFamily, delta: float, m: int) -> List[Tuple[int, float]]:
    """sup over A_δ = {|z - ξ| >= δ} of |R^m g_{ξ,k}| for each k."""
    if not 0.0 < delta < 2.0:
        raise DomainError(f"δ must lie in (0, 2), got {delta}")
    if m < 0:
        raise DomainError("m must be non-negative")
    points = _region_points(family.xi, delta)

    def sup_at(k: int) -> float:
        g = normalized_peak(family, k)
        if m:
            g = radial_derivative(g, m)
        return float(np.max(np.abs(evaluate(g, points))))

    return list(zip(family.k_grid, ordered_map(sup_at, family.k_grid)))


@dataclass(frozen=True)
class DivideBoundCheck:
    measured: float
    proof_bound: float


def bloch_divide_bound_check(f: PowerSeries, z0: complex, N: int, alpha: float) -> DivideBoundCheck:
    """Weighted size of D^N(f/(z - z0)) near the circle against the bound of the division lemma."""
    z0 = complex(z0)
    if not abs(z0) < 1.0:
        raise DomainError(f"z0 = {z0} must lie in the open disk")
    if alpha < 0:
        raise DomainError("the weight (1 - |z|²)^α must be bounded, so α >= 0")
    if N < 0:
        raise DomainError("N must be non-negative")
    g = divide_by_root(f, z0)
    dg, df = g, f
    derivatives_at_zero = []
    for _ in range(N):
        derivatives_at_zero.append(abs(df.coeffs[0]))
        dg, df = complex_derivative(dg), complex_derivative(df)
    # derivatives_at_zero[j] = |D^j f(0)|

    rho = (1.0 + abs(z0)) / 2.0
    radii = np.concatenate([rho + (1.0 - rho) * (1.0 - 2.0 ** (-np.arange(1, 57) / 4.0)), [1.0]])
    theta = 2.0 * np.pi * np.arange(settings.angular_samples) / settings.angular_samples
    ring = radii[:, None] * np.exp(1j * theta)[None, :]
    weight = (1.0 - radii[:, None] ** 2) ** alpha
    measured = float(np.max(weight * np.abs(evaluate(dg, ring))))

    sup_term = weighted_sup(lambda z: (1.0 - np.abs(z) ** 2) ** alpha * np.abs(evaluate(df, z))).value
    M = sup_term + math.fsum(derivatives_at_zero)
    d = 1.0 - abs(z0)
    factor = math.fsum(math.factorial(N) * 2.0 ** (N - k + 1) / d ** (N - k + 1) for k in range(N + 1))
    return DivideBoundCheck(measured=measured, proof_bound=M * factor)
