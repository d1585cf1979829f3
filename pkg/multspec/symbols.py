"""Closed-form symbols: AST, parser, exact evaluation, zeros and boundary bounds.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | factor
    factor := base ('^' uint)?
    base   := number | number 'i' | 'i' | 'z' | 'z1'..'z3' | 'B(' expr ')' | '(' expr ')'

``B(a)`` is the Blaschke factor (a - z) / (1 - conj(a) z); its argument
must be a constant.
"""

import logging
import math
import re
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import optimize
from scipy.special import ndtri
from scipy.stats import qmc

from .config import settings
from .errors import (
    BoundaryZeroError,
    ConsistencyError,
    DomainError,
    ParseError,
    SymbolConstructionError,
)
from .numerics import winding_number
from .series import MultiPoly, PowerSeries, series_divide

logger = logging.getLogger(__name__)


# --- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class Constant:
    value: complex


@dataclass(frozen=True)
class Coordinate:
    index: int = 1


@dataclass(frozen=True)
class Poly:
    """Polynomial in one coordinate, ascending coefficients."""

    coeffs: Tuple[complex, ...]
    variable: int = 1


@dataclass(frozen=True)
class Sum:
    left: "Node"
    right: "Node"
    subtract: bool = False


@dataclass(frozen=True)
class Product:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Quotient:
    num: "Node"
    den: "Node"


@dataclass(frozen=True)
class BlaschkeFactor:
    a: complex


@dataclass(frozen=True)
class IntegerPower:
    base: "Node"
    exponent: int


Node = Union[Constant, Coordinate, Poly, Sum, Product, Quotient, BlaschkeFactor, IntegerPower]


def _children(node: Node) -> Iterator[Node]:
    if isinstance(node, (Sum, Product)):
        yield node.left
        yield node.right
    elif isinstance(node, Quotient):
        yield node.num
        yield node.den
    elif isinstance(node, IntegerPower):
        yield node.base


def _walk(node: Node) -> Iterator[Node]:
    yield node
    for child in _children(node):
        yield from _walk(child)


def _variables(node: Node) -> set:
    found = set()
    for item in _walk(node):
        if isinstance(item, Coordinate):
            found.add(item.index)
        elif isinstance(item, Poly) and any(c != 0 for c in item.coeffs[1:]):
            found.add(item.variable)
        elif isinstance(item, BlaschkeFactor):
            found.add(1)
    return found


def _poly_form(node: Node) -> Optional[Tuple[Optional[int], np.ndarray]]:
    """(variable, coefficients) when the subtree is a polynomial in one coordinate."""
    if isinstance(node, Constant):
        return None, np.array([node.value], dtype=complex)
    if isinstance(node, Coordinate):
        return node.index, np.array([0.0, 1.0], dtype=complex)
    if isinstance(node, Poly):
        return node.variable, np.array(node.coeffs, dtype=complex)
    if isinstance(node, (Sum, Product)):
        left, right = _poly_form(node.left), _poly_form(node.right)
        if left is None or right is None:
            return None
        variable = _merge_variable(left[0], right[0])
        if variable is False:
            return None
        if isinstance(node, Product):
            return variable, npoly.polymul(left[1], right[1])
        sign = -1.0 if node.subtract else 1.0
        return variable, npoly.polyadd(left[1], sign * right[1])
    if isinstance(node, Quotient):
        num, den = _poly_form(node.num), _poly_form(node.den)
        if num is None or den is None or den[0] is not None or den[1][0] == 0:
            return None
        return num[0], num[1] / den[1][0]
    if isinstance(node, IntegerPower):
        base = _poly_form(node.base)
        if base is None:
            return None
        return base[0], npoly.polypow(base[1], node.exponent)
    return None


def _merge_variable(a: Optional[int], b: Optional[int]):
    if a is None:
        return b
    if b is None or a == b:
        return a
    return False


# --- parser ------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>i)?"
    r"|(?P<name>z[1-3]?|B|i)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> List[Tuple[str, object, int]]:
    tokens: List[Tuple[str, object, int]] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", len(text) - len(text[pos:].lstrip()))
        start = match.start(match.lastgroup) if match.lastgroup else pos
        if match.group("number") is not None:
            value = float(match.group("number"))
            tokens.append(("num", complex(0.0, value) if match.group("imag") else complex(value), match.start("number")))
        elif match.group("name") is not None:
            name = match.group("name")
            if name == "i":
                tokens.append(("num", 1j, start))
            else:
                tokens.append(("name", name, start))
        else:
            tokens.append(("op", match.group("op"), start))
        pos = match.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self) -> Tuple[str, object, int]:
        return self.tokens[self.index]

    def take(self) -> Tuple[str, object, int]:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, op: str) -> None:
        kind, value, pos = self.take()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}", pos)

    def parse(self) -> Node:
        node = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ParseError("unexpected trailing input", pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        folded = False
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            _, op, _ = self.take()
            node = Sum(node, self.term(), subtract=(op == "-"))
            folded = True
        return _fold_polynomial(node) if folded else node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            _, op, _ = self.take()
            right = self.unary()
            node = Product(node, right) if op == "*" else Quotient(node, right)
        return node

    def unary(self) -> Node:
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            operand = self.unary()
            if isinstance(operand, Constant):
                return Constant(-operand.value)
            return Product(Constant(-1.0), operand)
        return self.factor()

    def factor(self) -> Node:
        node = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            kind, value, pos = self.take()
            if kind != "num" or value.imag != 0 or value.real != int(value.real):
                raise ParseError("exponent must be a non-negative integer", pos)
            node = IntegerPower(node, int(value.real))
        return node

    def base(self) -> Node:
        kind, value, pos = self.take()
        if kind == "num":
            return Constant(value)
        if kind == "name":
            if value == "B":
                self.expect("(")
                inner_pos = self.peek()[2]
                inner = self.expr()
                self.expect(")")
                form = _poly_form(inner)
                if form is None or form[0] is not None:
                    raise ParseError("Blaschke parameter must be a constant", inner_pos)
                return BlaschkeFactor(complex(form[1][0]))
            return Coordinate(1 if value == "z" else int(value[1]))
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError("expected a number, coordinate, B(...) or '('", pos)


def _fold_polynomial(node: Node) -> Node:
    form = _poly_form(node)
    if form is None:
        return node
    variable, coeffs = form
    if variable is None:
        return Constant(complex(coeffs[0]))
    return Poly(tuple(complex(c) for c in coeffs), variable)


# --- rational form and roots -------------------------------------------------


def _rational(node: Node) -> Tuple[np.ndarray, np.ndarray]:
    """Numerator and denominator coefficients of a one-variable symbol."""
    if isinstance(node, Constant):
        return np.array([node.value], dtype=complex), np.ones(1, dtype=complex)
    if isinstance(node, Coordinate):
        return np.array([0.0, 1.0], dtype=complex), np.ones(1, dtype=complex)
    if isinstance(node, Poly):
        return np.array(node.coeffs, dtype=complex), np.ones(1, dtype=complex)
    if isinstance(node, BlaschkeFactor):
        a = node.a
        return np.array([a, -1.0], dtype=complex), np.array([1.0, -np.conj(a)], dtype=complex)
    if isinstance(node, Sum):
        p1, q1 = _rational(node.left)
        p2, q2 = _rational(node.right)
        sign = -1.0 if node.subtract else 1.0
        if len(q1) == 1 and len(q2) == 1:
            return npoly.polyadd(p1 * q2[0], sign * p2 * q1[0]), q1 * q2
        return npoly.polyadd(npoly.polymul(p1, q2), sign * npoly.polymul(p2, q1)), npoly.polymul(q1, q2)
    if isinstance(node, Product):
        p1, q1 = _rational(node.left)
        p2, q2 = _rational(node.right)
        return npoly.polymul(p1, p2), npoly.polymul(q1, q2)
    if isinstance(node, Quotient):
        p1, q1 = _rational(node.num)
        p2, q2 = _rational(node.den)
        return npoly.polymul(p1, q2), npoly.polymul(q1, p2)
    if isinstance(node, IntegerPower):
        p, q = _rational(node.base)
        return npoly.polypow(p, node.exponent), npoly.polypow(q, node.exponent)
    raise TypeError(f"unknown node {node!r}")


def _trim(coeffs: np.ndarray) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=complex)
    scale = np.max(np.abs(coeffs)) if coeffs.size else 0.0
    if scale == 0.0:
        return np.zeros(1, dtype=complex)
    keep = np.nonzero(np.abs(coeffs) > 1e-14 * scale)[0]
    return coeffs[: keep[-1] + 1]


def _aberth(coeffs: np.ndarray, guesses: np.ndarray, max_iter: int = 200) -> np.ndarray:
    deriv = npoly.polyder(coeffs)
    z = guesses.astype(complex).copy()
    n = z.size
    for _ in range(max_iter):
        p = npoly.polyval(z, coeffs)
        dp = npoly.polyval(z, deriv)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        repulsion = (1.0 / diff).sum(axis=1) - 1.0 if n > 1 else np.zeros(n)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            step = ratio / (1.0 - ratio * repulsion)
        step = np.where(np.isfinite(step), step, 0.0)
        z = z - step
        if np.max(np.abs(step)) <= 4e-16 * (1.0 + np.max(np.abs(z))):
            return z
    logger.debug("Aberth iteration stopped after %d steps", max_iter)
    return z


def polynomial_roots(coeffs: Sequence[complex]) -> np.ndarray:
    """All roots of the polynomial with ascending coefficients.

    Companion eigenvalues for low degree, a Cauchy-bound circle for high
    degree, then Aberth sweeps to polish.
    """
    c = _trim(np.asarray(coeffs, dtype=complex))
    if c.size <= 1:
        return np.zeros(0, dtype=complex)
    nz = np.nonzero(c)[0]
    zero_roots = np.zeros(int(nz[0]), dtype=complex)
    c = c[nz[0]:]
    degree = c.size - 1
    if degree == 0:
        return zero_roots
    if degree <= 60:
        guesses = np.roots(c[::-1])
    else:
        radius = 1.0 + np.max(np.abs(c[:-1] / c[-1]))
        guesses = radius * np.exp(2j * np.pi * (np.arange(degree) + 0.25) / degree)
    roots = _aberth(c, guesses)
    return np.concatenate([zero_roots, roots])


def cluster_roots(roots: np.ndarray, tol: float = 1e-5) -> List[Tuple[complex, int]]:
    """Group roots closer than tol * (1 + |r|) into (location, multiplicity)."""
    remaining = list(np.asarray(roots, dtype=complex))
    clusters: List[Tuple[complex, int]] = []
    while remaining:
        seed = remaining.pop(0)
        members = [seed]
        changed = True
        while changed:
            changed = False
            centre = np.mean(members)
            for r in list(remaining):
                if abs(r - centre) <= tol * (1.0 + abs(centre)):
                    members.append(r)
                    remaining.remove(r)
                    changed = True
        clusters.append((complex(np.mean(members)), len(members)))
    return sorted(clusters, key=lambda item: (round(item[0].real, 12), round(item[0].imag, 12)))


# --- evaluation --------------------------------------------------------------


def _eval1(node: Node, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Value and complex derivative of a one-variable symbol."""
    if isinstance(node, Constant):
        return np.full(z.shape, node.value, dtype=complex), np.zeros(z.shape, dtype=complex)
    if isinstance(node, Coordinate):
        return z.astype(complex), np.ones(z.shape, dtype=complex)
    if isinstance(node, Poly):
        c = np.array(node.coeffs, dtype=complex)
        return npoly.polyval(z, c), npoly.polyval(z, npoly.polyder(c)) if c.size > 1 else np.zeros(z.shape, dtype=complex)
    if isinstance(node, BlaschkeFactor):
        a = node.a
        den = 1.0 - np.conj(a) * z
        return (a - z) / den, (abs(a) ** 2 - 1.0) / den**2
    if isinstance(node, Sum):
        v1, d1 = _eval1(node.left, z)
        v2, d2 = _eval1(node.right, z)
        if node.subtract:
            return v1 - v2, d1 - d2
        return v1 + v2, d1 + d2
    if isinstance(node, Product):
        v1, d1 = _eval1(node.left, z)
        v2, d2 = _eval1(node.right, z)
        return v1 * v2, d1 * v2 + v1 * d2
    if isinstance(node, Quotient):
        v1, d1 = _eval1(node.num, z)
        v2, d2 = _eval1(node.den, z)
        return v1 / v2, (d1 * v2 - v1 * d2) / v2**2
    if isinstance(node, IntegerPower):
        m = node.exponent
        v, d = _eval1(node.base, z)
        if m == 0:
            return np.ones(z.shape, dtype=complex), np.zeros(z.shape, dtype=complex)
        return v**m, m * v ** (m - 1) * d
    raise TypeError(f"unknown node {node!r}")


def _evaln(node: Node, pts: np.ndarray) -> np.ndarray:
    """Value of a symbol at points of shape (n, M)."""
    shape = pts.shape[1:]
    if isinstance(node, Constant):
        return np.full(shape, node.value, dtype=complex)
    if isinstance(node, Coordinate):
        return pts[node.index - 1].astype(complex)
    if isinstance(node, Poly):
        return npoly.polyval(pts[node.variable - 1], np.array(node.coeffs, dtype=complex))
    if isinstance(node, BlaschkeFactor):
        return _eval1(node, pts[0])[0]
    if isinstance(node, Sum):
        left, right = _evaln(node.left, pts), _evaln(node.right, pts)
        return left - right if node.subtract else left + right
    if isinstance(node, Product):
        return _evaln(node.left, pts) * _evaln(node.right, pts)
    if isinstance(node, Quotient):
        return _evaln(node.num, pts) / _evaln(node.den, pts)
    if isinstance(node, IntegerPower):
        return _evaln(node.base, pts) ** node.exponent
    raise TypeError(f"unknown node {node!r}")


def _multipoly(node: Node, n: int) -> MultiPoly:
    if isinstance(node, Constant):
        return MultiPoly.constant(node.value, n)
    if isinstance(node, Coordinate):
        return MultiPoly.coordinate(node.index, n)
    if isinstance(node, Poly):
        z = MultiPoly.coordinate(node.variable, n)
        total = MultiPoly.constant(0.0, n)
        for k, c in enumerate(node.coeffs):
            if c:
                total = total + (z**k).scale(c)
        return total
    if isinstance(node, Sum):
        left, right = _multipoly(node.left, n), _multipoly(node.right, n)
        return left - right if node.subtract else left + right
    if isinstance(node, Product):
        return _multipoly(node.left, n) * _multipoly(node.right, n)
    if isinstance(node, Quotient):
        den = _poly_form(node.den)
        return _multipoly(node.num, n).scale(1.0 / den[1][0])
    if isinstance(node, IntegerPower):
        return _multipoly(node.base, n) ** node.exponent
    raise SymbolConstructionError("symbols in several variables must be polynomials")


# --- Symbol ------------------------------------------------------------------


def _as_node(value) -> Node:
    if isinstance(value, Symbol):
        return value.ast
    return Constant(complex(value))


@dataclass(frozen=True)
class Symbol:
    """A validated closed-form symbol on the closed unit ball of C^n."""

    ast: Node
    dimension: int = 1

    def __post_init__(self) -> None:
        if self.dimension < 1 or self.dimension > 3:
            raise SymbolConstructionError(f"dimension must be 1, 2 or 3, got {self.dimension}")
        for node in _walk(self.ast):
            if isinstance(node, Coordinate) and not 1 <= node.index <= self.dimension:
                raise SymbolConstructionError(f"z{node.index} does not exist for n={self.dimension}")
            if isinstance(node, BlaschkeFactor):
                if not abs(node.a) < 1.0:
                    raise SymbolConstructionError(f"Blaschke parameter {node.a} is not inside the disk")
                if self.dimension > 1:
                    raise SymbolConstructionError("Blaschke factors need n = 1")
            if isinstance(node, IntegerPower) and node.exponent < 0:
                raise SymbolConstructionError("exponents must be non-negative")
            if isinstance(node, Quotient):
                self._check_denominator(node.den)

    def _check_denominator(self, den: Node) -> None:
        if self.dimension > 1:
            form = _poly_form(den)
            if form is None or form[0] is not None:
                raise SymbolConstructionError("symbols in several variables must be polynomials")
            if form[1][0] == 0:
                raise SymbolConstructionError("division by zero", witness=0j)
            return
        p, _ = _rational(den)
        p = _trim(p)
        if not np.any(p):
            raise SymbolConstructionError("denominator vanishes identically", witness=0j)
        for root in polynomial_roots(p):
            if abs(root) <= 1.0 + 1e-9:
                raise SymbolConstructionError(
                    f"denominator vanishes at {complex(root):.6g} in the closed disk",
                    witness=complex(root),
                )

    # arithmetic keeps symbols closed under the operations the checks need
    def __add__(self, other) -> "Symbol":
        return _combine(Sum(self.ast, _as_node(other)), self, other)

    __radd__ = __add__

    def __sub__(self, other) -> "Symbol":
        return _combine(Sum(self.ast, _as_node(other), subtract=True), self, other)

    def __rsub__(self, other) -> "Symbol":
        return _combine(Sum(_as_node(other), self.ast, subtract=True), self, other)

    def __mul__(self, other) -> "Symbol":
        return _combine(Product(self.ast, _as_node(other)), self, other)

    __rmul__ = __mul__

    def scaled(self, c: complex) -> "Symbol":
        return Symbol(Product(Constant(complex(c)), self.ast), self.dimension)

    @property
    def variables(self) -> set:
        return _variables(self.ast)

    def is_constant(self) -> bool:
        return not self.variables

    def is_polynomial(self) -> bool:
        return all(
            not isinstance(node, BlaschkeFactor)
            and not (isinstance(node, Quotient) and _variables(node.den))
            for node in _walk(self.ast)
        )

    def values(self, z) -> np.ndarray:
        """Vectorized values for n = 1."""
        self._require_one_variable()
        return _eval1(self.ast, np.asarray(z, dtype=complex))[0]

    def values_and_derivative(self, z) -> Tuple[np.ndarray, np.ndarray]:
        self._require_one_variable()
        return _eval1(self.ast, np.asarray(z, dtype=complex))

    def ball_values(self, points) -> np.ndarray:
        """Values at points of shape (n, M)."""
        pts = np.asarray(points, dtype=complex)
        if self.dimension == 1 and pts.ndim == 1:
            pts = pts[None, :]
        return _evaln(self.ast, pts)

    def as_rational(self) -> Tuple[np.ndarray, np.ndarray]:
        self._require_one_variable()
        p, q = _rational(self.ast)
        return _trim(p), _trim(q)

    def to_multipoly(self) -> MultiPoly:
        if self.dimension < 2:
            raise DomainError("to_multipoly needs n >= 2; use to_series for n = 1")
        return _multipoly(self.ast, self.dimension)

    def render(self) -> str:
        return render_symbol(self)

    def _require_one_variable(self) -> None:
        if self.dimension != 1:
            raise DomainError(f"operation needs n = 1, symbol has n = {self.dimension}")


def _combine(node: Node, a, b) -> Symbol:
    dims = [s.dimension for s in (a, b) if isinstance(s, Symbol)]
    return Symbol(node, max(dims))


@dataclass(frozen=True)
class ZeroSet:
    zeros: Tuple[Tuple[complex, int], ...]

    def __post_init__(self) -> None:
        for location, multiplicity in self.zeros:
            if not abs(location) < 1.0 or multiplicity < 1:
                raise ConsistencyError(f"invalid zero ({location}, {multiplicity})")

    @property
    def total_count(self) -> int:
        return sum(m for _, m in self.zeros)


@dataclass(frozen=True)
class BoundaryModulus:
    min: float
    argmin_angle: float
    certified_lower: float
    lipschitz: float


@dataclass(frozen=True)
class BoundaryMax:
    value: float
    witness_point: Tuple[complex, ...]
    witness_value: complex
    resolution: float


# --- operations --------------------------------------------------------------


def parse_symbol(text: str, dimension: Optional[int] = None) -> Symbol:
    """Parse the symbol DSL. The dimension defaults to the largest coordinate used."""
    ast = _Parser(text).parse()
    used = max(_variables(ast), default=1)
    n = used if dimension is None else int(dimension)
    if n < used:
        raise SymbolConstructionError(f"symbol uses z{used} but dimension is {n}")
    return Symbol(ast, n)


def parse_constant(text: str) -> complex:
    """A complex literal such as "0.5-2i" written in the symbol DSL."""
    ast = _Parser(str(text)).parse()
    if _variables(ast):
        raise ParseError("expected a constant, found a coordinate", 0)
    return complex(_eval1(ast, np.zeros(1, dtype=complex))[0][0])


def evaluate(u: Symbol, point) -> complex:
    """Exact value u(point) on the closed unit ball."""
    pts = np.atleast_1d(np.asarray(point, dtype=complex))
    if pts.size != u.dimension:
        raise DomainError(f"expected {u.dimension} coordinates, got {pts.size}")
    if float(np.sqrt(np.sum(np.abs(pts) ** 2))) > 1.0 + 1e-12:
        raise DomainError(f"{point} lies outside the closed unit ball")
    return complex(_evaln(u.ast, pts.reshape(-1, 1))[0])


def _unit_circle(count: int) -> Tuple[np.ndarray, np.ndarray]:
    t = 2.0 * np.pi * np.arange(count) / count
    return t, np.exp(1j * t)


def boundary_min_modulus(u: Symbol, lam: complex = 0.0) -> BoundaryModulus:
    """Certified lower bound of |u(e^{it}) - λ| on the unit circle.

    Samples, then bisects angle intervals whose Lipschitz lower bound
    could still undercut the best value, then polishes the minimum.
    """
    u._require_one_variable()
    count = settings.curve_samples
    t, z = _unit_circle(count)
    values, derivs = u.values_and_derivative(z)
    moduli = np.abs(values - lam)
    lipschitz = 1.25 * float(np.max(np.abs(derivs))) + 1e-300
    best_index = int(np.argmin(moduli))
    best, best_t = float(moduli[best_index]), float(t[best_index])
    tol = settings.rel_tol * max(best, 1.0)

    left = t
    width = np.full(count, 2.0 * np.pi / count)
    f_left = moduli
    f_right = np.roll(moduli, -1)
    for _ in range(settings.boundary_refine_depth):
        lower = np.minimum(f_left, f_right) - lipschitz * width / 2.0
        active = lower < best - tol
        if not active.any() or active.sum() > 65536:
            break
        left, width = left[active], width[active] / 2.0
        f_left, f_right = f_left[active], f_right[active]
        mids = left + width
        f_mid = np.abs(u.values(np.exp(1j * mids)) - lam)
        if f_mid.min() < best:
            best, best_t = float(f_mid.min()), float(mids[int(np.argmin(f_mid))])
        left = np.concatenate([left, mids])
        width = np.concatenate([width, width])
        f_left, f_right = np.concatenate([f_left, f_mid]), np.concatenate([f_mid, f_right])

    h = 2.0 * np.pi / count
    # polish the offset from best_t: the bounded solver's tolerance scales with |x|
    polished = optimize.minimize_scalar(
        lambda d: abs(complex(u.values(np.exp(1j * (best_t + d)))) - lam),
        bounds=(-h, h),
        method="bounded",
        options={"xatol": 1e-15},
    )
    if polished.fun < best:
        best, best_t = float(polished.fun), best_t + float(polished.x)
    lower = np.minimum(f_left, f_right) - lipschitz * width / 2.0
    certified = max(0.0, min(best, float(lower.min())))
    return BoundaryModulus(
        min=best,
        argmin_angle=float(np.mod(best_t, 2.0 * np.pi)),
        certified_lower=certified,
        lipschitz=lipschitz,
    )


def boundary_curve(u: Symbol, count: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    count = settings.curve_samples if count is None else count
    t, z = _unit_circle(count)
    return t, u.values(z)


def zeros_in_disk(u: Symbol, lam: complex = 0.0) -> ZeroSet:
    """Zeros of u - λ inside the open disk, with multiplicities."""
    u._require_one_variable()
    bound = boundary_min_modulus(u, lam)
    scale = max(1.0, sup_norm(u) + abs(lam))
    if bound.min <= settings.rel_tol * scale:
        raise BoundaryZeroError(
            f"u - λ vanishes on the unit circle near angle {bound.argmin_angle:.6f}",
            angle=bound.argmin_angle,
            modulus=bound.min,
        )
    p, q = u.as_rational()
    numerator = _trim(npoly.polysub(p, lam * q))
    inside = [r for r in polynomial_roots(numerator) if abs(r) < 1.0]
    zeros = ZeroSet(tuple(cluster_roots(np.array(inside))))
    _, curve = boundary_curve(u)
    winding = winding_number(curve - lam, 0.0)
    if winding != zeros.total_count:
        raise ConsistencyError(
            f"root count {zeros.total_count} disagrees with winding number {winding}"
        )
    logger.debug("zeros of u - %s: %s", lam, zeros.zeros)
    return zeros


def _sphere_grid(n: int) -> Tuple[np.ndarray, float]:
    """Product grid on the unit sphere of C^n and its angular step."""
    if n == 2:
        phi = np.linspace(0.0, np.pi / 2.0, 65)
        theta = 2.0 * np.pi * np.arange(128) / 128
        P, T1, T2 = np.meshgrid(phi, theta, theta, indexing="ij")
        pts = np.stack([np.cos(P) * np.exp(1j * T1), np.sin(P) * np.exp(1j * T2)])
        return pts.reshape(2, -1), float(np.pi / 128)
    a = np.linspace(0.0, np.pi / 2.0, 17)
    theta = 2.0 * np.pi * np.arange(24) / 24
    A, Bv, T1, T2, T3 = np.meshgrid(a, a, theta, theta, theta, indexing="ij")
    pts = np.stack(
        [
            np.cos(A) * np.exp(1j * T1),
            np.sin(A) * np.cos(Bv) * np.exp(1j * T2),
            np.sin(A) * np.sin(Bv) * np.exp(1j * T3),
        ]
    )
    return pts.reshape(3, -1), float(np.pi / 24)


def boundary_max_modulus(u: Symbol) -> BoundaryMax:
    """max |u| over the boundary with a witness point (maximum principle)."""
    if u.dimension == 1:
        count = settings.curve_samples
        t, values = boundary_curve(u, count)
        moduli = np.abs(values)
        i = int(np.argmax(moduli))
        h = 2.0 * np.pi / count
        polished = optimize.minimize_scalar(
            lambda d: -abs(complex(u.values(np.exp(1j * (t[i] + d))))),
            bounds=(-h, h),
            method="bounded",
            options={"xatol": 1e-15},
        )
        s = float(t[i] + polished.x) if -polished.fun >= moduli[i] else float(t[i])
        z = complex(np.exp(1j * s))
        w = complex(u.values(z))
        return BoundaryMax(value=abs(w), witness_point=(z,), witness_value=w, resolution=h)

    pts, step = _sphere_grid(u.dimension)
    values = u.ball_values(pts)
    i = int(np.argmax(np.abs(values)))
    witness = tuple(complex(c) for c in pts[:, i])
    logger.debug("sphere grid of %d points, angular step %.4f", pts.shape[1], step)
    return BoundaryMax(
        value=float(abs(values[i])),
        witness_point=witness,
        witness_value=complex(values[i]),
        resolution=step,
    )


def sup_norm(u: Symbol) -> float:
    return boundary_max_modulus(u).value


def ball_fill(n: int, log2_count: Optional[int] = None, seed: Optional[int] = None) -> np.ndarray:
    """Low-discrepancy points of the closed unit ball of C^n, shape (n, M).

    Half the points fill the ball, half lie on the sphere.
    """
    m = (settings.ball_samples_log2 if log2_count is None else log2_count) - 1
    seed = settings.seed if seed is None else seed
    eps = 1e-12
    sphere = qmc.Sobol(d=2 * n, scramble=True, seed=seed).random_base2(m)
    g = ndtri(np.clip(sphere, eps, 1 - eps))
    s = g[:, :n] + 1j * g[:, n:]
    s /= np.linalg.norm(np.abs(s), axis=1, keepdims=True)

    ball = qmc.Sobol(d=2 * n + 1, scramble=True, seed=seed + 1).random_base2(m)
    g = ndtri(np.clip(ball[:, : 2 * n], eps, 1 - eps))
    b = g[:, :n] + 1j * g[:, n:]
    b /= np.linalg.norm(np.abs(b), axis=1, keepdims=True)
    b *= ball[:, 2 * n : 2 * n + 1] ** (1.0 / (2 * n))
    return np.concatenate([b, s]).T


def to_series(u: Symbol, K: Optional[int] = None) -> PowerSeries:
    """Taylor coefficients at 0 through degree K."""
    u._require_one_variable()
    K = settings.truncation_degree if K is None else int(K)
    p, q = u.as_rational()
    if q.size == 1:
        if p.size - 1 <= K:
            return PowerSeries(p / q[0])
        return PowerSeries(p[: K + 1] / q[0], exact=False)
    return series_divide(PowerSeries(p), PowerSeries(q), K)


# --- rendering ---------------------------------------------------------------


def _fmt_real(x: float) -> str:
    text = repr(float(x))
    return f"({text})" if text.startswith("-") else text


def _fmt_complex(c: complex, bare: bool = False) -> str:
    c = complex(c)
    if c.imag == 0:
        return repr(float(c.real)) if bare else _fmt_real(c.real)
    sign = "-" if math.copysign(1.0, c.imag) < 0 else "+"
    text = f"{repr(float(c.real))}{sign}{repr(abs(float(c.imag)))}i"
    return text if bare else f"({text})"


def _render(node: Node, n: int) -> str:
    def var(j: int) -> str:
        return "z" if n == 1 else f"z{j}"

    if isinstance(node, Constant):
        return _fmt_complex(node.value)
    if isinstance(node, Coordinate):
        return var(node.index)
    if isinstance(node, Poly):
        parts = []
        for k, c in enumerate(node.coeffs):
            if k == 0:
                parts.append(_fmt_complex(c))
            elif c != 0:
                parts.append(f"{_fmt_complex(c)}*{var(node.variable)}^{k}")
        return "(" + " + ".join(parts) + ")"
    if isinstance(node, Sum):
        op = "-" if node.subtract else "+"
        return f"({_render(node.left, n)} {op} {_render(node.right, n)})"
    if isinstance(node, Product):
        return f"({_render(node.left, n)})*({_render(node.right, n)})"
    if isinstance(node, Quotient):
        return f"({_render(node.num, n)})/({_render(node.den, n)})"
    if isinstance(node, BlaschkeFactor):
        return f"B({_fmt_complex(node.a, bare=True)})"
    if isinstance(node, IntegerPower):
        return f"({_render(node.base, n)})^{node.exponent}"
    raise TypeError(f"unknown node {node!r}")


def render_symbol(u: Symbol) -> str:
    """Text that parse_symbol maps back to an equal-valued symbol."""
    return _render(u.ast, u.dimension)
