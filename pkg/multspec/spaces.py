"""Function-space descriptors and their norms."""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from scipy import optimize
from scipy.special import gammaln

from .config import settings
from .errors import EvaluationError, SpecError
from .numerics import QuadratureRule, disk_power_integral, radial_moments, ring_values
from .series import (
    MultiPoly,
    PowerSeries,
    complex_derivative,
    evaluate,
    radial_derivative,
    shifted_radial_derivative,
)

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

Variant = Literal["bloch", "growth", "bergman_sobolev", "hardy_sobolev", "hardy"]
Regime = Literal["bloch_small", "bloch_log", "bounded", "algebra", "uncovered"]
Analytic = Union[PowerSeries, MultiPoly]


class SpaceSpec(BaseModel):
    """A point in one of the five parameterized space families."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    variant: Variant
    p: Optional[float] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None
    n: int = Field(default=1, ge=1, le=3)
    schema_version: int = SCHEMA_VERSION

    @model_validator(mode="before")
    @classmethod
    def _defaults(cls, data):
        if not isinstance(data, dict):
            return data
        data = dict(data)
        variant = data.get("variant")
        if variant == "hardy_sobolev":
            data.setdefault("p", 2.0)
            data.setdefault("alpha", -1.0)
            data.setdefault("beta", 0.0)
        elif variant == "bergman_sobolev":
            data.setdefault("beta", 0.0)
        elif variant == "hardy":
            data.setdefault("p", 2.0)
        return data

    @model_validator(mode="after")
    def _ranges(self) -> "SpaceSpec":
        v = self.variant
        if v in ("bloch", "growth"):
            if self.alpha is None or not self.alpha > 0:
                raise ValueError(f"{v} needs alpha > 0")
            if self.p is not None or self.beta is not None:
                raise ValueError(f"{v} takes alpha only")
        elif v == "bergman_sobolev":
            if self.p is None or self.p < 1:
                raise ValueError("bergman_sobolev needs p >= 1")
            if self.alpha is None or not self.alpha > -1:
                raise ValueError("bergman_sobolev needs alpha > -1")
            if self.beta < 0:
                raise ValueError("bergman_sobolev needs beta >= 0")
        elif v == "hardy_sobolev":
            if self.p != 2 or self.alpha != -1:
                raise ValueError("hardy_sobolev fixes p = 2 and alpha = -1")
            if self.beta < 0:
                raise ValueError("hardy_sobolev needs beta >= 0")
        elif v == "hardy":
            if self.p < 1:
                raise ValueError("hardy needs p >= 1")
            if self.alpha is not None or self.beta is not None:
                raise ValueError("hardy takes p only")
        return self

    @property
    def label(self) -> str:
        if self.variant == "bloch":
            return f"B_{self.alpha:g}"
        if self.variant == "growth":
            return f"H^inf_{self.alpha:g}"
        if self.variant == "bergman_sobolev":
            return f"A^{self.p:g}_{{{self.alpha:g},{self.beta:g}}}"
        if self.variant == "hardy_sobolev":
            return f"H^2_{self.beta:g}"
        return f"H^{self.p:g}"

    def to_json(self) -> dict:
        return self.model_dump(exclude_none=True)


def parse_space(data: Union[str, dict, SpaceSpec]) -> SpaceSpec:
    """Validate a space description; failures surface as SpecError."""
    if isinstance(data, SpaceSpec):
        return data
    try:
        if isinstance(data, str):
            return SpaceSpec.model_validate_json(data)
        return SpaceSpec.model_validate(data)
    except ValidationError as e:
        raise SpecError(f"invalid space: {e.errors()[0].get('msg', e)}") from e


def bloch(alpha: float, n: int = 1) -> SpaceSpec:
    return parse_space({"variant": "bloch", "alpha": alpha, "n": n})


def growth(alpha: float, n: int = 1) -> SpaceSpec:
    return parse_space({"variant": "growth", "alpha": alpha, "n": n})


def bergman_sobolev(p: float, alpha: float, beta: float, n: int = 1) -> SpaceSpec:
    return parse_space({"variant": "bergman_sobolev", "p": p, "alpha": alpha, "beta": beta, "n": n})


def hardy_sobolev(beta: float, n: int = 1) -> SpaceSpec:
    return parse_space({"variant": "hardy_sobolev", "beta": beta, "n": n})


def hardy(p: float = 2.0, n: int = 1) -> SpaceSpec:
    return parse_space({"variant": "hardy", "p": p, "n": n})


def classify_regime(space: SpaceSpec) -> Regime:
    """Which multiplier characterization governs the space."""
    v = space.variant
    if v == "bloch":
        if space.alpha < 1:
            return "bloch_small"
        return "bloch_log" if space.alpha == 1 else "bounded"
    if v in ("growth", "hardy"):
        return "bounded"
    p, alpha, beta = space.p, space.alpha, space.beta
    lower, upper = (1 + alpha) / p, (2 + alpha) / p
    if beta < lower or (p == 2 and beta <= lower):
        return "bounded"
    if beta > upper:
        return "algebra"
    return "uncovered"


def y_space_N(space: SpaceSpec) -> Optional[int]:
    """Smallest integer N >= 1 with N > β - (α + 1/2)/p."""
    if space.variant not in ("bergman_sobolev", "hardy_sobolev"):
        return None
    threshold = space.beta - (space.alpha + 0.5) / space.p
    return max(1, math.floor(threshold) + 1)


# --- weighted suprema --------------------------------------------------------


@dataclass(frozen=True)
class SupEstimate:
    value: float
    low: float
    high: float
    argmax: complex


def radius_levels(depth: Optional[int] = None, substeps: Optional[int] = None) -> np.ndarray:
    """Interior radii followed by 1 - 2^{-j/substeps} up to the refine depth."""
    depth = settings.boundary_refine_depth if depth is None else depth
    substeps = settings.radial_substeps if substeps is None else substeps
    interior = np.linspace(0.0, 0.5, 8, endpoint=False)
    j = np.arange(substeps, depth * substeps + 1) / substeps
    return np.concatenate([interior, 1.0 - 2.0 ** (-j)])


def weighted_sup(quantity: Callable[[np.ndarray], np.ndarray]) -> SupEstimate:
    """sup over the disk of a radial-weighted modulus.

    The grid maximum is polished with Nelder-Mead in (-log2(1 - r), θ);
    the bracket adds the largest variation to a grid neighbour.
    """
    radii = radius_levels()
    count = settings.angular_samples
    theta = 2.0 * np.pi * np.arange(count) / count
    grid = radii[:, None] * np.exp(1j * theta)[None, :]
    values = np.asarray(quantity(grid), dtype=float)
    if not np.all(np.isfinite(values)):
        node = complex(grid[~np.isfinite(values)][0])
        raise EvaluationError(f"weighted quantity is not finite at {node}", node=node)
    i, j = np.unravel_index(int(np.argmax(values)), values.shape)
    best = float(values[i, j])
    neighbours = [values[i, (j + 1) % count], values[i, (j - 1) % count]]
    if i > 0:
        neighbours.append(values[i - 1, j])
    if i + 1 < radii.size:
        neighbours.append(values[i + 1, j])
    slack = float(max(abs(best - v) for v in neighbours))

    s_max = settings.boundary_refine_depth + 6.0

    def point(x: np.ndarray) -> complex:
        s = min(max(float(x[0]), 0.0), s_max)
        return (1.0 - 2.0 ** (-s)) * complex(math.cos(x[1]), math.sin(x[1]))

    def objective(x: np.ndarray) -> float:
        value = float(np.asarray(quantity(np.array([point(x)])), dtype=float)[0])
        return -value if math.isfinite(value) else 0.0

    s0 = -math.log2(1.0 - radii[i]) if radii[i] > 0 else 0.0
    result = optimize.minimize(
        objective,
        x0=np.array([s0, theta[j]]),
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": 2000},
    )
    argmax = complex(grid[i, j])
    if -result.fun > best:
        best = float(-result.fun)
        argmax = point(result.x)
    return SupEstimate(value=best, low=best, high=best + slack, argmax=argmax)


# --- norms -------------------------------------------------------------------


@dataclass(frozen=True)
class NormReport:
    value: float
    low: float
    high: float
    space: str
    method: str
    y_space_N: Optional[int] = None


def _check_dimension(space: SpaceSpec, f: Analytic) -> None:
    n = f.dimension if isinstance(f, MultiPoly) else 1
    if n != space.n:
        raise SpecError(f"function has n = {n}, space has n = {space.n}")


def _bergman_p2_multipoly(g: MultiPoly, alpha: float) -> float:
    n = g.dimension
    total = 0.0
    for index, coeff in g.terms.items():
        size = sum(index)
        log_moment = (
            sum(gammaln(k + 1.0) for k in index)
            + gammaln(n + alpha + 1.0)
            - gammaln(n + size + alpha + 1.0)
        )
        total += abs(coeff) ** 2 * math.exp(log_moment)
    return math.sqrt(total)


def bergman_lp(g: Analytic, p: float, alpha: float) -> float:
    """‖g‖ in A^p_α, or in H^p when α = -1."""
    if isinstance(g, MultiPoly):
        if p != 2:
            raise SpecError("norms in several variables need p = 2")
        return _bergman_p2_multipoly(g, alpha)
    K = g.truncation_degree
    if p == 2:
        moments = radial_moments(alpha, K)
        return math.sqrt(math.fsum(np.abs(g.coeffs) ** 2 * moments))
    if alpha == -1:
        count = max(256, int(math.ceil(p * K)) + 8)
        mean = float(np.mean(np.abs(ring_values(g.coeffs, 1.0, count)[0]) ** p))
        return mean ** (1.0 / p)
    rule = QuadratureRule.gauss_jacobi(
        alpha, int(math.ceil(p * (K + 1) / 4.0)) + 8, int(math.ceil(p * K)) + 8
    )
    return disk_power_integral(g.coeffs, p, rule) ** (1.0 / p)


def norm_report(space: SpaceSpec, f: Analytic) -> NormReport:
    _check_dimension(space, f)
    v = space.variant
    method = "exact"
    if v in ("bloch", "growth"):
        if isinstance(f, MultiPoly):
            raise SpecError("sup-type norms are implemented for n = 1 only")
        if v == "bloch":
            df = complex_derivative(f)
            weight = space.alpha
            sup = weighted_sup(lambda z: (1.0 - np.abs(z) ** 2) ** weight * np.abs(evaluate(df, z)))
            base = abs(f.coeffs[0])
        else:
            weight = space.alpha
            sup = weighted_sup(lambda z: (1.0 - np.abs(z) ** 2) ** weight * np.abs(evaluate(f, z)))
            base = 0.0
        return NormReport(
            value=base + sup.value,
            low=base + sup.low,
            high=base + sup.high,
            space=space.label,
            method="grid",
        )
    if v == "hardy":
        value = bergman_lp(f, space.p, -1.0)
        if space.p != 2:
            if isinstance(f, PowerSeries) and not f.exact:
                method = "truncated estimate"
            elif space.p % 2:
                method = "quadrature"
    else:
        g = shifted_radial_derivative(f, space.beta)
        value = bergman_lp(g, space.p, space.alpha)
        if space.p != 2:
            method = "quadrature"
    return NormReport(
        value=value,
        low=value,
        high=value,
        space=space.label,
        method=method,
        y_space_N=y_space_N(space),
    )


def norm(space: SpaceSpec, f: Analytic) -> float:
    return norm_report(space, f).value


def _value_at_origin(f: Analytic) -> complex:
    if isinstance(f, MultiPoly):
        return f.terms.get((0,) * f.dimension, 0j)
    return complex(f.coeffs[0])


def equivalent_norm_R(space: SpaceSpec, f: Analytic) -> float:
    """|f(0)| + ‖R^β f‖ in the underlying A^p_α (or H^2)."""
    if space.variant not in ("bergman_sobolev", "hardy_sobolev"):
        raise SpecError("equivalent_norm_R applies to Sobolev-type spaces")
    _check_dimension(space, f)
    g = radial_derivative(f, space.beta)
    return abs(_value_at_origin(f)) + bergman_lp(g, space.p, space.alpha)


def equivalent_norm_D(space: SpaceSpec, f: PowerSeries) -> float:
    """Σ_{j<N} |D^j f(0)| + ‖D^N f‖ for integer β = N >= 1."""
    if space.variant != "bergman_sobolev":
        raise SpecError("equivalent_norm_D applies to Bergman-Sobolev spaces")
    if space.n != 1 or isinstance(f, MultiPoly):
        raise SpecError("equivalent_norm_D needs n = 1")
    N = space.beta
    if N < 1 or N != int(N):
        raise SpecError(f"equivalent_norm_D needs a positive integer beta, got {N}")
    N = int(N)
    total = 0.0
    derivative = f
    for j in range(N):
        total += abs(derivative.coeffs[0])
        derivative = complex_derivative(derivative)
    return total + bergman_lp(derivative, space.p, space.alpha)


def shift_parameters(space: SpaceSpec, new_beta: float) -> SpaceSpec:
    """The isomorphic space with α₁ - α₂ = p(β₁ - β₂)."""
    if space.variant != "bergman_sobolev":
        raise SpecError("shift_parameters applies to Bergman-Sobolev spaces")
    alpha2 = space.alpha - space.p * (space.beta - new_beta)
    if alpha2 > -1:
        return bergman_sobolev(space.p, alpha2, new_beta, space.n)
    if space.p == 2 and abs(alpha2 + 1.0) <= 1e-12:
        return hardy_sobolev(new_beta, space.n)
    raise SpecError(
        f"shift to beta={new_beta} gives alpha={alpha2:g}, which leaves the admissible scale"
    )
