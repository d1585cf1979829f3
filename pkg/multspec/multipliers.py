"""Multiplier membership, invertibility and Fredholm analysis of M_u."""

import logging
from dataclasses import dataclass
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np

from .config import settings
from .errors import HypothesisError, SpecError
from .numerics import fit_loglog_slope, ordered_map, unimodular, winding_number
from .peaks import DEFAULT_K_GRID, peak_function, peak_norm
from .series import multiply
from .spaces import Regime, SpaceSpec, classify_regime, norm, weighted_sup
from .symbols import (
    Symbol,
    ZeroSet,
    ball_fill,
    boundary_curve,
    boundary_min_modulus,
    sup_norm,
    to_series,
    zeros_in_disk,
)

logger = logging.getLogger(__name__)

Verdict = Literal["yes", "no", "indeterminate"]

CRITERIA = {
    "bloch_small": "bloch alpha<1: u in B_alpha and bounded",
    "bloch_log": "bloch alpha=1: sup |u'|(1-|z|^2)log(e/(1-|z|^2)) finite and bounded",
    "bounded": "M(X) = H^inf: bounded",
    "algebra": "algebra: u in X",
    "uncovered": "uncovered parameter band: no characterization",
}

_CONTRACTION = 0.75
_GROWTH_SLOPE = 0.1


@dataclass(frozen=True)
class MultiplierReport:
    verdict: Verdict
    criterion: str
    regime: Regime
    witnesses: Tuple[Tuple[float, float], ...]
    growth_slope: float
    bounded: bool
    space: str


def _level_radii() -> List[np.ndarray]:
    """Rings of the annuli 1 - 2^{-(j-1)} <= r <= 1 - 2^{-j}, j = 1..depth."""
    substeps = settings.radial_substeps
    levels = []
    for j in range(1, settings.boundary_refine_depth + 1):
        s = (j - 1) + np.arange(0, substeps + 1) / substeps
        levels.append(1.0 - 2.0 ** (-s))
    return levels


def _ring_levels(u: Symbol, quantity) -> List[Tuple[float, float]]:
    count = settings.angular_samples
    circle = np.exp(2j * np.pi * np.arange(count) / count)
    out = []
    for radii in _level_radii():
        z = radii[:, None] * circle[None, :]
        values, derivs = u.values_and_derivative(z)
        q = quantity(np.abs(z), values, derivs)
        out.append((float(radii[-1]), float(np.max(q))))
    return out


def _series_levels(u: Symbol, space: SpaceSpec) -> List[Tuple[float, float]]:
    top = min(settings.boundary_refine_depth, 10 if space.p == 2 else 8)
    out = []
    for j in range(1, top + 1):
        out.append((1.0 - 2.0 ** (-j), norm(space, to_series(u, 2**j))))
    return out


def _growth_slope(levels: Sequence[Tuple[float, float]]) -> float:
    pairs = [(1.0 / (1.0 - r), v) for r, v in levels[-6:] if v > 0]
    if len(pairs) < 3:
        return 0.0
    return fit_loglog_slope(pairs).slope


def _verdict(levels: Sequence[Tuple[float, float]], slope: float) -> Verdict:
    values = np.array([v for _, v in levels])
    tail = values[-4:]
    scale = max(float(np.max(np.abs(values))), 1.0)
    steps = np.diff(tail)
    if np.all(steps <= 1e-12 * scale):
        return "yes"
    if np.all(steps >= 0) and np.all(steps[1:] <= _CONTRACTION * steps[:-1] + 1e-14 * scale):
        return "yes"
    if slope > _GROWTH_SLOPE:
        return "no"
    return "indeterminate"


def _settles(levels: Sequence[Tuple[float, float]]) -> bool:
    """Level values settle toward a finite limit under the verdict rule."""
    return _verdict(levels, _growth_slope(levels)) == "yes"


def is_multiplier(space: SpaceSpec, u: Symbol) -> MultiplierReport:
    """Decide u ∈ M(X) through the branch that characterizes M(X) for the space."""
    if u.dimension != 1 or space.n != 1:
        raise SpecError("multiplier membership is implemented for n = 1")
    regime = classify_regime(space)
    modulus = _ring_levels(u, lambda r, v, d: np.abs(v))
    bounded = _settles(modulus)

    if regime == "bloch_small":
        alpha = space.alpha
        levels = _ring_levels(u, lambda r, v, d: (1.0 - r**2) ** alpha * np.abs(d))
    elif regime == "bloch_log":

        def log_weight(r, v, d):
            w = 1.0 - r**2
            with np.errstate(divide="ignore", invalid="ignore"):
                weighted = np.abs(d) * w * np.log(np.e / w)
            return np.where(w > 0, weighted, 0.0)

        levels = _ring_levels(u, log_weight)
    elif regime == "algebra":
        levels = _series_levels(u, space)
    else:
        levels = modulus

    slope = _growth_slope(levels)
    verdict: Verdict = "indeterminate" if regime == "uncovered" else _verdict(levels, slope)
    if not bounded and verdict == "yes":
        verdict = "no" if _growth_slope(modulus) > _GROWTH_SLOPE else "indeterminate"
    logger.info("multiplier %s on %s: %s (%s)", u.render(), space.label, verdict, regime)
    return MultiplierReport(
        verdict=verdict,
        criterion=CRITERIA[regime],
        regime=regime,
        witnesses=tuple(levels),
        growth_slope=slope,
        bounded=bounded,
        space=space.label,
    )


@dataclass(frozen=True)
class InvertibilityReport:
    invertible: bool
    inf_modulus: float
    resolution: Optional[float] = None


def is_invertible(u: Symbol) -> InvertibilityReport:
    """M_u is invertible iff inf |u| > 0 on the ball."""
    if u.dimension == 1:
        bound = boundary_min_modulus(u, 0.0)
        if bound.min <= settings.rel_tol * max(1.0, sup_norm(u)):
            return InvertibilityReport(invertible=False, inf_modulus=0.0)
        _, curve = boundary_curve(u)
        if winding_number(curve, 0.0) != 0:
            return InvertibilityReport(invertible=False, inf_modulus=0.0)
        return InvertibilityReport(invertible=True, inf_modulus=bound.min)

    poly = u.to_multipoly()
    points = ball_fill(u.dimension)
    values = np.abs(poly.evaluate(points))
    gradient = np.sqrt(
        sum(np.abs(poly.partial(j).evaluate(points)) ** 2 for j in range(1, u.dimension + 1))
    )
    spacing = 2.0 * 2.0 ** (-settings.ball_samples_log2 / (2.0 * u.dimension))
    inf_modulus = float(values.min())
    tolerance = spacing * float(gradient.max())
    return InvertibilityReport(
        invertible=inf_modulus > tolerance,
        inf_modulus=inf_modulus,
        resolution=spacing,
    )


@dataclass(frozen=True)
class FredholmReport:
    lam: complex
    boundary_delta: float
    certified_lower: float
    zeros: ZeroSet
    fredholm: bool
    index: Optional[int]
    kernel_dimension: Optional[int]
    cokernel_dimension: Optional[int]
    annulus_radius: Optional[float]
    theory: str
    conclusion: str
    witness_angle: Optional[float] = None


def _both_directions(space: SpaceSpec) -> bool:
    regime = classify_regime(space)
    if regime in ("bounded", "bloch_small", "bloch_log"):
        return True
    if regime == "algebra":
        return space.variant == "hardy_sobolev" or space.p > 1
    return False


def _annulus_radius(u: Symbol, lam: complex, delta: float) -> float:
    """Smallest level radius r with |u - λ| >= δ/2 on every sampled circle in [r, 1]."""
    count = settings.angular_samples
    circle = np.exp(2j * np.pi * np.arange(count) / count)
    radii = np.concatenate([[0.0], 1.0 - 2.0 ** (-np.arange(1, settings.boundary_refine_depth + 1)), [1.0]])
    ring_min = np.abs(u.values(radii[:, None] * circle[None, :]) - lam).min(axis=1)
    low = np.nonzero(ring_min < delta / 2.0)[0]
    if low.size == 0:
        return 0.0
    return float(radii[min(low[-1] + 1, radii.size - 1)])


def fredholm_analysis(u: Symbol, lam: complex, space: SpaceSpec) -> FredholmReport:
    """Fredholmness of M_u - λ with the index derived from the zeros of u - λ."""
    if u.dimension != 1 or space.n != 1:
        raise SpecError("Fredholm analysis is implemented for n = 1")
    lam = complex(lam)
    both = _both_directions(space)
    theory = "necessary and sufficient" if both else "sufficiency only"
    bound = boundary_min_modulus(u, lam)
    scale = max(1.0, sup_norm(u) + abs(lam))
    if bound.min <= settings.rel_tol * scale:
        conclusion = "not Fredholm: boundary zero" if both else "no conclusion from implemented theory"
        logger.info("λ=%s: boundary zero at angle %.6f", lam, bound.argmin_angle)
        return FredholmReport(
            lam=lam,
            boundary_delta=0.0,
            certified_lower=0.0,
            zeros=ZeroSet(()),
            fredholm=False,
            index=None,
            kernel_dimension=None,
            cokernel_dimension=None,
            annulus_radius=None,
            theory=theory,
            conclusion=conclusion,
            witness_angle=bound.argmin_angle,
        )
    zeros = zeros_in_disk(u, lam)
    count = zeros.total_count
    return FredholmReport(
        lam=lam,
        boundary_delta=bound.min,
        certified_lower=bound.certified_lower,
        zeros=zeros,
        fredholm=True,
        index=-count,
        kernel_dimension=0,
        cokernel_dimension=count,
        annulus_radius=_annulus_radius(u, lam, bound.min),
        theory=theory,
        conclusion="Fredholm",
    )


def _scan_supported(space: SpaceSpec) -> bool:
    regime = classify_regime(space)
    if regime in ("bloch_small", "bloch_log"):
        return True
    return regime == "algebra"


def peak_refutation_scan(
    u: Symbol,
    xi: complex,
    space: SpaceSpec,
    k_grid: Sequence[int] = DEFAULT_K_GRID,
) -> List[Tuple[int, float]]:
    """‖u g_{ξ,k}‖ along the normalized peak functions at ξ."""
    xi = unimodular(xi)
    if not _scan_supported(space) or space.n != 1:
        raise HypothesisError(
            f"the peak-function necessity argument does not cover {space.label}",
            theorem="peak-function necessity lemmas (Bloch 0<alpha<=1, Sobolev algebras)",
        )
    if u.dimension != 1:
        raise SpecError("peak scans need n = 1")
    conj_xi = xi.conjugate()

    def bloch_value(k: int) -> float:
        alpha = space.alpha

        def quantity(z: np.ndarray) -> np.ndarray:
            base = (1.0 + conj_xi * z) / 2.0
            f = base**k
            df = (k * conj_xi / 2.0) * base ** (k - 1) if k else np.zeros_like(z)
            uv, du = u.values_and_derivative(z)
            return (1.0 - np.abs(z) ** 2) ** alpha * np.abs(du * f + uv * df)

        value_at_zero = abs(complex(u.values(0.0))) * 2.0 ** (-k)
        return (value_at_zero + weighted_sup(quantity).value) / peak_norm(space, k)

    def sobolev_value(k: int) -> float:
        f = peak_function(xi, k)
        product = multiply(to_series(u, k + settings.truncation_degree), f)
        return norm(space, product) / peak_norm(space, k)

    value = bloch_value if space.variant == "bloch" else sobolev_value
    return list(zip(list(k_grid), ordered_map(value, list(k_grid))))
