"""
Exact polynomial arithmetic over ZZ for edge rings.

Every variable carries quantum degree 2. Polynomials are sympy ``PolyElement``
values in a graded-lex ``PolyRing`` whose symbols are ``x<edge id>``.
"""
from functools import lru_cache
from typing import Dict, Mapping, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator
from sympy.polys.domains import ZZ
from sympy.polys.orderings import grlex
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement, PolyRing

from workflows.error_handler import DivisibilityError, UnknownVariableError

Poly = PolyElement


def polynomial_ring(edges: Sequence[int]) -> PolyRing:
    """ZZ[x_e : e in edges] with graded lexicographic order"""
    return PolyRing(",".join(f"x{e}" for e in edges), ZZ, grlex)


def edges_of(ring: PolyRing) -> Tuple[int, ...]:
    return tuple(int(str(symbol)[1:]) for symbol in ring.symbols)


def variable(ring: PolyRing, edge: int) -> Poly:
    edges = edges_of(ring)
    if edge not in edges:
        raise UnknownVariableError(f"x{edge} is not a variable of {ring}")
    return ring.gens[edges.index(edge)]


def linear_form(ring: PolyRing, coefficients: Mapping[int, int]) -> Poly:
    """Sum of c * x_e over the given edge -> coefficient map"""
    result = ring.zero
    for edge, coefficient in coefficients.items():
        if coefficient:
            result += coefficient * variable(ring, edge)
    return result


def add(a: Poly, b: Poly) -> Poly:
    return a + b


def mul(a: Poly, b: Poly) -> Poly:
    return a * b


def neg(a: Poly) -> Poly:
    return -a


def substitute_linear(p: Poly, edge: int, expr: Poly) -> Poly:
    """Replace x_edge by an integer-linear combination of variables."""
    return p.compose(variable(p.ring, edge), expr)


def substitute_many(p: Poly, replacements: Mapping[int, Poly]) -> Poly:
    """Simultaneous substitution x_e -> replacements[e]."""
    if not replacements:
        return p
    pairs = [(variable(p.ring, edge), value) for edge, value in sorted(replacements.items())]
    return p.compose(pairs)


def restrict(p: Poly, ring: PolyRing) -> Poly:
    """Move p into a ring on a subset of its variables; p must not use the dropped ones."""
    return p.set_ring(ring)


def divide_exact(num: Poly, den: Poly) -> Poly:
    """
    Exact quotient num / den in ZZ[x].

    Raises:
        DivisibilityError: den does not divide num
    """
    if not num:
        return num
    try:
        return num.exquo(den)
    except (ExactQuotientFailed, ZeroDivisionError) as e:
        raise DivisibilityError(f"{poly_to_text(den)} does not divide {poly_to_text(num)}") from e


def total_degree(p: Poly) -> int:
    if not p:
        return 0
    return max(sum(monom) for monom in p.itermonoms())


def is_homogeneous(p: Poly) -> bool:
    degrees = {sum(monom) for monom in p.itermonoms()}
    return len(degrees) <= 1


def quantum_degree(p: Poly) -> int:
    return 2 * total_degree(p)


def unit_value(p: Poly) -> Optional[int]:
    """+1 or -1 when p is that constant, otherwise None"""
    if p.is_ground:
        value = int(p.LC) if p else 0
        if value in (1, -1):
            return value
    return None


def poly_to_text(p: Poly) -> str:
    """Canonical rendering: graded-lex descending terms with explicit coefficients."""
    if not p:
        return "0"
    names = [str(symbol) for symbol in p.ring.symbols]
    pieces = []
    for monom, coefficient in sorted(p.terms(), key=lambda t: (sum(t[0]), t[0]), reverse=True):
        factors = [
            name if power == 1 else f"{name}^{power}"
            for name, power in zip(names, monom) if power
        ]
        body = "*".join([str(abs(int(coefficient)))] + factors)
        pieces.append(("-" if coefficient < 0 else "+") + body)
    text = " ".join(pieces)
    return text[1:] if text.startswith("+") else text


class Potential(BaseModel):
    """Univariate p(x) = sum c_m x^m over ZZ"""
    model_config = ConfigDict(frozen=True)

    coefficients: Tuple[int, ...] = Field(..., description="c_0, c_1, ... in increasing degree")

    @field_validator("coefficients")
    @classmethod
    def _strip(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        coefficients = list(value)
        while coefficients and coefficients[-1] == 0:
            coefficients.pop()
        if not coefficients:
            raise ValueError("potential must be a nonzero polynomial")
        return tuple(coefficients)

    @classmethod
    def sln(cls, n: int) -> "Potential":
        """x^(n+1); n = 0 is the degenerate potential p(x) = x"""
        if n < 0:
            raise ValueError("sl(n) needs n >= 0")
        return cls(coefficients=(0,) * (n + 1) + (1,))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_homogeneous(self) -> bool:
        return sum(1 for c in self.coefficients if c) == 1

    @property
    def rank(self) -> int:
        """n for p = c * x^(n+1)"""
        if not self.is_homogeneous:
            raise ValueError(f"{self.label} is not homogeneous")
        return self.degree - 1

    @property
    def label(self) -> str:
        terms = []
        for power, c in reversed(list(enumerate(self.coefficients))):
            if not c:
                continue
            monomial = "1" if power == 0 else ("x" if power == 1 else f"x^{power}")
            terms.append(monomial if c == 1 and power else f"{c}*{monomial}")
        return " + ".join(terms)

    def evaluate(self, x: Poly) -> Poly:
        result = x.ring.zero
        for c in reversed(self.coefficients):
            result = result * x + c
        return result

    def derivative(self) -> Tuple[int, ...]:
        return tuple(m * c for m, c in enumerate(self.coefficients))[1:] or (0,)

    def evaluate_derivative(self, x: Poly) -> Poly:
        result = x.ring.zero
        for c in reversed(self.derivative()):
            result = result * x + c
        return result


@lru_cache(maxsize=64)
def _local_potential_data(coefficients: Tuple[int, ...]) -> Tuple[Poly, Poly, Poly]:
    local = PolyRing("xi,xj,xk", ZZ, grlex)
    xi, xj, xk = local.gens
    potential = Potential(coefficients=coefficients)
    w = (
        potential.evaluate(xk) + potential.evaluate(xi + xj - xk)
        - potential.evaluate(xi) - potential.evaluate(xj)
    )
    p_i = divide_exact(w, xk - xi)
    p_ij = -divide_exact(w, (xk - xi) * (xk - xj))
    return w, p_i, p_ij


def _embed(local: Poly, xi: Poly, xj: Poly, xk: Poly) -> Poly:
    result = xi.ring.zero
    for (a, b, c), coefficient in local.terms():
        result += int(coefficient) * xi**a * xj**b * xk**c
    return result


def potential_data(potential: Potential, xi: Poly, xj: Poly, xk: Poly) -> Tuple[Poly, Poly, Poly]:
    """
    Crossing potential and its two quotients, with x_l = x_i + x_j - x_k.

    Returns:
        (W_p, p_i, p_ij) where (x_k - x_i) p_i = W_p and
        -(x_k - x_i)(x_k - x_j) p_ij = W_p
    """
    w, p_i, p_ij = _local_potential_data(potential.coefficients)
    return _embed(w, xi, xj, xk), _embed(p_i, xi, xj, xk), _embed(p_ij, xi, xj, xk)


def monomials_of_degree(nvars: int, degree: int) -> Tuple[Tuple[int, ...], ...]:
    """All exponent vectors of the given total degree, in a fixed order"""
    return _monomials(nvars, degree)


@lru_cache(maxsize=4096)
def _monomials(nvars: int, degree: int) -> Tuple[Tuple[int, ...], ...]:
    if degree < 0:
        return ()
    if nvars == 0:
        return ((),) if degree == 0 else ()
    if nvars == 1:
        return ((degree,),)
    result = []
    for first in range(degree, -1, -1):
        for rest in _monomials(nvars - 1, degree - first):
            result.append((first,) + rest)
    return tuple(result)


def terms_dict(p: Poly) -> Dict[Tuple[int, ...], int]:
    return {monom: int(c) for monom, c in p.terms()}
