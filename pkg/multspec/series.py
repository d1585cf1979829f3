"""Truncated power series in one variable and polynomials in a few variables."""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.signal import lfilter
from scipy.special import comb

from .config import settings
from .errors import DomainError, LowerBoundError, NotAZeroError

logger = logging.getLogger(__name__)

_EVAL_SLACK = 1e-12

Number = Union[int, float, complex]


class PowerSeries:
    """Coefficients a_0..a_K of a power series at the origin.

    ``exact`` marks a polynomial whose coefficients are complete; a
    truncated series only knows its coefficients through degree K.
    """

    __slots__ = ("_coeffs", "exact")

    def __init__(self, coeffs: Iterable[Number], exact: bool = True) -> None:
        arr = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs, dtype=complex).ravel()
        if arr.size == 0:
            arr = np.zeros(1, dtype=complex)
        arr.setflags(write=False)
        self._coeffs = arr
        self.exact = bool(exact)

    @classmethod
    def constant(cls, c: Number) -> "PowerSeries":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c: Number = 1.0) -> "PowerSeries":
        coeffs = np.zeros(k + 1, dtype=complex)
        coeffs[k] = c
        return cls(coeffs)

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]], exact: bool = True) -> "PowerSeries":
        return cls([complex(re, im) for re, im in pairs], exact=exact)

    def to_pairs(self) -> List[List[float]]:
        return [[float(c.real), float(c.imag)] for c in self._coeffs]

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def truncation_degree(self) -> int:
        return self._coeffs.size - 1

    def __len__(self) -> int:
        return self._coeffs.size

    def __repr__(self) -> str:
        kind = "exact" if self.exact else "truncated"
        return f"PowerSeries(K={self.truncation_degree}, {kind})"

    def truncate(self, K: int) -> "PowerSeries":
        if K >= self.truncation_degree:
            return self
        return PowerSeries(self._coeffs[: K + 1], exact=False)

    def padded(self, K: int) -> np.ndarray:
        out = np.zeros(K + 1, dtype=complex)
        n = min(K + 1, self._coeffs.size)
        out[:n] = self._coeffs[:n]
        return out

    def allclose(self, other: "PowerSeries", tol: Optional[float] = None) -> bool:
        tol = settings.rel_tol if tol is None else tol
        K = max(self.truncation_degree, other.truncation_degree)
        a, b = self.padded(K), other.padded(K)
        scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300)
        return bool(np.max(np.abs(a - b)) <= tol * scale)

    def __call__(self, z):
        return evaluate(self, z)

    def __add__(self, other) -> "PowerSeries":
        return add(self, other)

    __radd__ = __add__

    def __neg__(self) -> "PowerSeries":
        return PowerSeries(-self._coeffs, exact=self.exact)

    def __sub__(self, other) -> "PowerSeries":
        return add(self, -_as_series(other))

    def __rsub__(self, other) -> "PowerSeries":
        return add(_as_series(other), -self)

    def __mul__(self, other) -> "PowerSeries":
        if isinstance(other, (int, float, complex, np.number)):
            return PowerSeries(self._coeffs * other, exact=self.exact)
        return multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, m: int) -> "PowerSeries":
        if m < 0:
            raise DomainError("negative powers need series division")
        result = PowerSeries.constant(1.0)
        base = self
        while m:
            if m & 1:
                result = multiply(result, base)
            m >>= 1
            if m:
                base = multiply(base, base)
        return result


def _as_series(value) -> PowerSeries:
    if isinstance(value, PowerSeries):
        return value
    return PowerSeries.constant(complex(value))


def _budget(*operands: PowerSeries) -> Optional[int]:
    truncated = [f.truncation_degree for f in operands if not f.exact]
    return min(truncated) if truncated else None


def add(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    f, g = _as_series(f), _as_series(g)
    budget = _budget(f, g)
    K = max(f.truncation_degree, g.truncation_degree) if budget is None else budget
    return PowerSeries(f.padded(K) + g.padded(K), exact=budget is None)


def multiply(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """Cauchy product; truncated operands cap the result at their smallest degree."""
    f, g = _as_series(f), _as_series(g)
    budget = _budget(f, g)
    product = np.convolve(f.coeffs, g.coeffs)
    if budget is None:
        if product.size - 1 > settings.max_degree:
            logger.warning(
                "product degree %d exceeds MULTSPEC_MAX_DEGREE=%d; truncating",
                product.size - 1,
                settings.max_degree,
            )
            return PowerSeries(product[: settings.max_degree + 1], exact=False)
        return PowerSeries(product)
    return PowerSeries(product[: budget + 1], exact=False)


def evaluate(f: PowerSeries, z):
    """Horner evaluation on the closed unit disk; z may be an array."""
    z_arr = np.asarray(z, dtype=complex)
    if z_arr.size and np.max(np.abs(z_arr)) > 1.0 + _EVAL_SLACK:
        raise DomainError("power series are evaluated on the closed unit disk only")
    values = npoly.polyval(z_arr, f.coeffs)
    if np.ndim(z) == 0:
        return complex(values)
    return values


def _degree_factors(K: int, beta: float, shift: float) -> np.ndarray:
    k = np.arange(K + 1, dtype=float) + shift
    factors = np.zeros(K + 1)
    positive = k > 0
    factors[positive] = np.exp(beta * np.log(k[positive]))
    return factors


def radial_derivative(f, beta: float):
    """R^β: the degree-k block is scaled by k^β, the constant term dropped."""
    if isinstance(f, MultiPoly):
        return f.scale_by_degree(lambda d: 0.0 if d == 0 else math.exp(beta * math.log(d)))
    return PowerSeries(f.coeffs * _degree_factors(f.truncation_degree, beta, 0.0), exact=f.exact)


def shifted_radial_derivative(f, beta: float):
    """(I+R)^β: the degree-k block is scaled by (1+k)^β."""
    if isinstance(f, MultiPoly):
        return f.scale_by_degree(lambda d: math.exp(beta * math.log(1.0 + d)))
    return PowerSeries(f.coeffs * _degree_factors(f.truncation_degree, beta, 1.0), exact=f.exact)


def complex_derivative(f: PowerSeries) -> PowerSeries:
    if f.truncation_degree == 0:
        return PowerSeries([0.0], exact=f.exact)
    k = np.arange(1, f.truncation_degree + 1)
    return PowerSeries(f.coeffs[1:] * k, exact=f.exact)


def divide_by_root(f: PowerSeries, z0: complex, tol: Optional[float] = None) -> PowerSeries:
    """Synthetic division of f by (z - z0).

    The residual f(z0) is judged against the largest coefficient so the
    test does not depend on the scale of f.
    """
    tol = settings.rel_tol if tol is None else tol
    z0 = complex(z0)
    if abs(z0) > 1.0 + _EVAL_SLACK:
        raise DomainError(f"root {z0} lies outside the closed unit disk")
    residual = abs(evaluate(f, z0))
    scale = float(np.max(np.abs(f.coeffs)))
    if residual > tol * max(scale, 1e-300):
        raise NotAZeroError(f"f({z0}) = {residual:.3e} is not a zero", residual=residual)
    a = f.coeffs
    K = a.size - 1
    if K == 0:
        return PowerSeries([0.0], exact=f.exact)
    b = np.zeros(K, dtype=complex)
    b[K - 1] = a[K]
    for j in range(K - 1, 0, -1):
        b[j - 1] = a[j] + z0 * b[j]
    return PowerSeries(b, exact=f.exact)


def series_divide(f: PowerSeries, u: PowerSeries, K: Optional[int] = None) -> PowerSeries:
    """Taylor coefficients of f/u through degree K by long division."""
    K = settings.truncation_degree if K is None else int(K)
    u_coeffs = np.trim_zeros(u.coeffs, "b")
    if u_coeffs.size == 0 or u_coeffs[0] == 0:
        raise DomainError("the divisor must not vanish at the origin")
    impulse = np.zeros(K + 1, dtype=complex)
    impulse[0] = 1.0
    # Dividing power series is running an IIR filter on the unit impulse.
    quotient = lfilter(f.padded(K), u_coeffs, impulse)
    return PowerSeries(quotient, exact=False)


def quotient_radial_derivative(
    f: PowerSeries,
    u: PowerSeries,
    N: int,
    sample_points: Sequence[complex],
) -> np.ndarray:
    """R^N(f/u) at each sample point through products of f with powers of u.

    R^N(f/u) = (-1)^N / u^{N+1} Σ_{k=0}^{N} (-1)^k C(N+1, k) u^k R^N(u^{N-k} f).
    The identity fails for N = 0, which is rejected.
    """
    if int(N) != N or N < 1:
        raise DomainError(f"the quotient formula needs N >= 1, got {N}")
    N = int(N)
    points = np.asarray(sample_points, dtype=complex)
    u_values = evaluate(u, points)
    moduli = np.abs(u_values)
    if moduli.size and np.min(moduli) <= settings.rel_tol:
        worst = complex(np.ravel(points)[int(np.argmin(moduli))])
        raise LowerBoundError(f"|u| is not bounded below at {worst}", point=worst)

    total = np.zeros_like(u_values)
    power = f
    terms: List[PowerSeries] = [f]
    for _ in range(N):
        power = multiply(power, u)
        terms.append(power)
    # terms[m] = u^m f
    for k in range(N + 1):
        derived = evaluate(radial_derivative(terms[N - k], N), points)
        total = total + ((-1) ** k) * comb(N + 1, k, exact=True) * u_values**k * derived
    return ((-1) ** N) * total / u_values ** (N + 1)


MultiIndex = Tuple[int, ...]


@dataclass(frozen=True)
class MultiPoly:
    """Polynomial Σ c_k z^k in n = 2 or 3 variables."""

    terms: Mapping[MultiIndex, complex] = field(default_factory=dict)
    dimension: int = 2

    def __post_init__(self) -> None:
        if self.dimension not in (2, 3):
            raise DomainError(f"MultiPoly supports n = 2 or 3, got {self.dimension}")
        cleaned: Dict[MultiIndex, complex] = {}
        for index, coeff in dict(self.terms).items():
            index = tuple(int(i) for i in index)
            if len(index) != self.dimension or any(i < 0 for i in index):
                raise DomainError(f"multi-index {index} does not fit dimension {self.dimension}")
            if coeff != 0:
                cleaned[index] = cleaned.get(index, 0j) + complex(coeff)
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def constant(cls, c: Number, dimension: int) -> "MultiPoly":
        return cls({(0,) * dimension: complex(c)}, dimension)

    @classmethod
    def coordinate(cls, j: int, dimension: int) -> "MultiPoly":
        if not 1 <= j <= dimension:
            raise DomainError(f"coordinate z{j} does not exist in dimension {dimension}")
        index = tuple(1 if i == j - 1 else 0 for i in range(dimension))
        return cls({index: 1.0}, dimension)

    @property
    def total_degree(self) -> int:
        return max((sum(k) for k in self.terms), default=0)

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        out = dict(self.terms)
        for index, coeff in other.terms.items():
            out[index] = out.get(index, 0j) + coeff
        return MultiPoly(out, self.dimension)

    def __neg__(self) -> "MultiPoly":
        return self.scale(-1.0)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        out: Dict[MultiIndex, complex] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                index = tuple(x + y for x, y in zip(a, b))
                out[index] = out.get(index, 0j) + ca * cb
        return MultiPoly(out, self.dimension)

    def __pow__(self, m: int) -> "MultiPoly":
        result = MultiPoly.constant(1.0, self.dimension)
        for _ in range(m):
            result = result * self
        return result

    def scale(self, c: Number) -> "MultiPoly":
        return MultiPoly({k: v * c for k, v in self.terms.items()}, self.dimension)

    def scale_by_degree(self, factor) -> "MultiPoly":
        return MultiPoly({k: v * factor(sum(k)) for k, v in self.terms.items()}, self.dimension)

    def partial(self, j: int) -> "MultiPoly":
        """∂/∂z_j for j = 1..n."""
        out: Dict[MultiIndex, complex] = {}
        for index, coeff in self.terms.items():
            power = index[j - 1]
            if power:
                lowered = tuple(p - 1 if i == j - 1 else p for i, p in enumerate(index))
                out[lowered] = out.get(lowered, 0j) + coeff * power
        return MultiPoly(out, self.dimension)

    def homogeneous_parts(self) -> Dict[int, "MultiPoly"]:
        parts: Dict[int, Dict[MultiIndex, complex]] = {}
        for index, coeff in self.terms.items():
            parts.setdefault(sum(index), {})[index] = coeff
        return {d: MultiPoly(t, self.dimension) for d, t in sorted(parts.items())}

    def evaluate(self, points) -> np.ndarray:
        """Evaluate at points of shape (n,) or (n, M)."""
        pts = np.asarray(points, dtype=complex)
        if pts.shape[0] != self.dimension:
            raise DomainError(f"expected {self.dimension} coordinates, got {pts.shape[0]}")
        total = np.zeros(pts.shape[1:], dtype=complex)
        for index, coeff in self.terms.items():
            term = np.full(pts.shape[1:], coeff, dtype=complex)
            for j, power in enumerate(index):
                if power:
                    term = term * pts[j] ** power
            total = total + term
        return total
