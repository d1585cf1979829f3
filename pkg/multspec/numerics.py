"""Foundation numerics: log-gamma, weighted disk and circle quadrature,
winding numbers of closed polylines and log-log slope fits."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, List, Sequence, Tuple, TypeVar

import numpy as np
from scipy.special import gammaln, roots_jacobi

from .config import settings
from .errors import ArgumentError, DomainError, EvaluationError, OnCurveError

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def log_gamma(x: float) -> float:
    """Return ln Γ(x) for x > 0."""
    if not np.isfinite(x) or x <= 0:
        raise DomainError(f"log_gamma requires a positive argument, got {x!r}")
    return float(gammaln(x))


def log_binomial(a, n):
    """ln |binom(a, n)| for real a and integer n >= 0, vectorized over n.

    Vanishing binomials (integer a < n) come back as -inf.
    """
    n = np.asarray(n, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        return gammaln(a + 1.0) - gammaln(n + 1.0) - gammaln(a - n + 1.0)


def radial_moments(alpha: float, kmax: int) -> np.ndarray:
    """μ_k = ∫|z|^{2k} dA_α for k = 0..kmax.

    α = −1 is the boundary limit, where every moment is 1.
    """
    k = np.arange(kmax + 1, dtype=float)
    return np.exp(gammaln(k + 1.0) + gammaln(alpha + 2.0) - gammaln(k + alpha + 2.0))


@dataclass(frozen=True)
class GammaRatioErrors:
    ratio1_error: float
    ratio2_error: float


def gamma_ratio_check(K: float, L: float, M: float) -> GammaRatioErrors:
    """Errors of the two Stirling-type ratios used by the peak lemmas.

    ratio1 compares Γ(K+L) with K^L Γ(K); ratio2 compares
    Γ(2K+L)/(Γ(K+L)Γ(K+M)) with 2^{2K+L-1} K^{1/2-M} / √π.
    """
    if K <= 0 or L < 0 or M < 0:
        raise DomainError(f"gamma_ratio_check needs K > 0 and L, M >= 0 (K={K}, L={L}, M={M})")
    log_ratio1 = log_gamma(K + L) - L * math.log(K) - log_gamma(K)
    log_exact = log_gamma(2 * K + L) - log_gamma(K + L) - log_gamma(K + M)
    log_model = (2 * K + L - 1) * math.log(2.0) + (0.5 - M) * math.log(K) - 0.5 * math.log(math.pi)
    return GammaRatioErrors(
        ratio1_error=abs(math.expm1(log_ratio1)),
        ratio2_error=abs(math.expm1(log_exact - log_model)),
    )


@dataclass(frozen=True)
class QuadratureRule:
    """Product rule for dA_α on the unit disk: radial nodes times equispaced angles."""

    radial_nodes: Tuple[Tuple[float, float], ...]
    angular_count: int
    alpha: float

    def __post_init__(self) -> None:
        if self.alpha <= -1:
            raise DomainError(f"weight exponent must exceed -1, got {self.alpha}")
        if self.angular_count < 1:
            raise DomainError("angular_count must be positive")
        if not self.radial_nodes:
            raise DomainError("a quadrature rule needs at least one radial node")
        for radius, weight in self.radial_nodes:
            if not 0.0 < radius < 1.0 or weight <= 0.0:
                raise DomainError(f"invalid radial node ({radius}, {weight})")
        if abs(sum(w for _, w in self.radial_nodes) - 1.0) > 1e-12:
            raise DomainError("radial weights do not integrate 1 to 1")

    @classmethod
    def gauss_jacobi(cls, alpha: float, radial_count: int, angular_count: int) -> "QuadratureRule":
        """Gauss-Jacobi in s = r², exact for r^{2m} with m <= 2*radial_count - 1."""
        if alpha <= -1:
            raise DomainError(f"weight exponent must exceed -1, got {alpha}")
        x, w = roots_jacobi(int(radial_count), alpha, 0.0)
        radii = np.sqrt((1.0 + x) / 2.0)
        weights = w * (alpha + 1.0) / 2.0 ** (alpha + 1.0)
        # Renormalize the last few ulps so the constant integrates to 1.
        weights = weights / math.fsum(weights)
        nodes = tuple((float(r), float(v)) for r, v in zip(radii, weights))
        return cls(radial_nodes=nodes, angular_count=int(angular_count), alpha=float(alpha))

    @classmethod
    def for_degree(cls, alpha: float, degree: int) -> "QuadratureRule":
        """Rule integrating |P|² exactly for polynomials P of the given degree."""
        degree = max(int(degree), 0)
        return cls.gauss_jacobi(alpha, degree // 2 + 2, 2 * degree + 4)

    @property
    def radii(self) -> np.ndarray:
        return np.array([r for r, _ in self.radial_nodes])

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.radial_nodes])

    def points(self) -> np.ndarray:
        """Nodes as a (radial, angular) complex array."""
        theta = 2.0 * np.pi * np.arange(self.angular_count) / self.angular_count
        return self.radii[:, None] * np.exp(1j * theta)[None, :]


def disk_integral(values_fn: Callable[[np.ndarray], np.ndarray], rule: QuadratureRule) -> float:
    """∫ values_fn dA_α for a vectorized real integrand."""
    nodes = rule.points()
    values = np.asarray(values_fn(nodes), dtype=float)
    if values.shape != nodes.shape:
        values = np.broadcast_to(values, nodes.shape)
    bad = ~np.isfinite(values)
    if bad.any():
        node = complex(nodes[bad][0])
        raise EvaluationError(f"integrand is not finite at node {node}", node=node)
    ring_means = values.mean(axis=1)
    return float(math.fsum(rule.weights * ring_means))


_RING_CHUNK = 64


def ring_values(coeffs, radii, count: int) -> np.ndarray:
    """Σ c_n z^n at z = r·e^{2πij/count} for each r, shape (len(radii), count).

    One inverse FFT per ring; count must exceed the degree so nothing aliases.
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.size > count:
        raise DomainError(f"{count} angles cannot resolve degree {c.size - 1}")
    r = np.atleast_1d(np.asarray(radii, dtype=float))
    n = np.arange(c.size)
    with np.errstate(under="ignore"):
        scaled = c[None, :] * np.power(r[:, None], n[None, :])
    return np.fft.ifft(scaled, n=count, axis=1) * count


def disk_power_integral(coeffs, p: float, rule: QuadratureRule) -> float:
    """∫ |Σ c_n z^n|^p dA_α over the rule's nodes, evaluated ring by ring."""
    radii = rule.radii
    ring_means = np.empty(radii.size)
    for start in range(0, radii.size, _RING_CHUNK):
        block = np.abs(ring_values(coeffs, radii[start : start + _RING_CHUNK], rule.angular_count)) ** p
        bad = ~np.isfinite(block)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            node = complex(radii[start + i] * np.exp(2j * np.pi * j / rule.angular_count))
            raise EvaluationError(f"integrand is not finite at node {node}", node=node)
        ring_means[start : start + block.shape[0]] = block.mean(axis=1)
    return float(math.fsum(rule.weights * ring_means))


def circle_mean(values_fn: Callable[[np.ndarray], np.ndarray], count: int) -> float:
    """Trapezoidal mean over `count` equispaced angles."""
    if count < 4:
        raise DomainError(f"circle_mean needs at least 4 angles, got {count}")
    theta = 2.0 * np.pi * np.arange(count) / count
    values = np.broadcast_to(np.asarray(values_fn(theta), dtype=float), theta.shape)
    return math.fsum(values) / count


def unimodular(xi: complex) -> complex:
    """xi as a complex number, required to lie on the unit circle."""
    xi = complex(xi)
    if abs(abs(xi) - 1.0) > 1e-12:
        raise DomainError(f"ξ = {xi} is not unimodular")
    return xi


def _closed(curve: Sequence[complex]) -> np.ndarray:
    points = np.asarray(curve, dtype=complex).ravel()
    if points.size and points[0] != points[-1]:
        points = np.append(points, points[0])
    return points


def curve_diameter(curve: Sequence[complex]) -> float:
    points = np.asarray(curve, dtype=complex).ravel()
    if points.size == 0:
        return 0.0
    return float(math.hypot(np.ptp(points.real), np.ptp(points.imag)))


def curve_distance(curve: Sequence[complex], lam: complex) -> float:
    """Distance from lam to the closed polyline."""
    points = _closed(curve)
    if points.size == 1:
        return float(abs(points[0] - lam))
    a = points[:-1]
    d = points[1:] - a
    length2 = (d * d.conjugate()).real
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(length2 > 0, ((lam - a) * d.conjugate()).real / length2, 0.0)
    t = np.clip(t, 0.0, 1.0)
    return float(np.min(np.abs(a + t * d - lam)))


def winding_number(curve: Sequence[complex], lam: complex, rel_tol: float = None) -> int:
    """Winding number of the closed polyline around lam.

    Raises OnCurveError when lam is within rel_tol * diameter of the curve.
    """
    tol = settings.rel_tol if rel_tol is None else rel_tol
    points = _closed(curve)
    if points.size == 0:
        raise ArgumentError("empty curve")
    distance = curve_distance(points, lam)
    threshold = tol * curve_diameter(points)
    if distance <= threshold:
        raise OnCurveError(f"{lam} lies on the curve (distance {distance:.3e})", distance)
    w = points - lam
    total = float(np.sum(np.angle(w[1:] / w[:-1])))
    return int(round(total / (2.0 * math.pi)))


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    residual: float
    intercept: float


def fit_loglog_slope(pairs: Iterable[Tuple[float, float]]) -> SlopeFit:
    """Least-squares slope of ln y against ln x."""
    data = np.asarray(list(pairs), dtype=float)
    if data.ndim != 2 or data.shape[0] < 3:
        raise ArgumentError("fit_loglog_slope needs at least 3 (x, y) pairs")
    if np.any(data <= 0) or not np.all(np.isfinite(data)):
        raise DomainError("fit_loglog_slope needs positive finite pairs")
    lx, ly = np.log(data[:, 0]), np.log(data[:, 1])
    slope, intercept = np.polyfit(lx, ly, 1)
    residual = float(np.max(np.abs(ly - (slope * lx + intercept))))
    return SlopeFit(slope=float(slope), residual=residual, intercept=float(intercept))


def ordered_map(fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
    """Map over items on up to MULTSPEC_THREADS workers, keeping input order."""
    items = list(items)
    workers = max(1, min(settings.threads, len(items)))
    if workers == 1:
        return [fn(item) for item in items]
    logger.debug("mapping %d items on %d threads", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))
