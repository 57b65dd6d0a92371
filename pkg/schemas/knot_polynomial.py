from math import comb
from typing import Dict, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

Monomial = Tuple[int, int]


class LaurentAQ(BaseModel):
    """Laurent polynomial in a and q over ZZ, stored as sorted (a_exp, q_exp, coefficient) rows"""
    model_config = ConfigDict(frozen=True)

    terms: Tuple[Tuple[int, int, int], ...] = ()

    @field_validator("terms")
    @classmethod
    def _canonical(cls, value: Tuple[Tuple[int, int, int], ...]) -> Tuple[Tuple[int, int, int], ...]:
        collected: Dict[Monomial, int] = {}
        for a, q, c in value:
            collected[(a, q)] = collected.get((a, q), 0) + c
        return tuple(sorted((a, q, c) for (a, q), c in collected.items() if c))

    @classmethod
    def from_dict(cls, terms: Dict[Monomial, int]) -> "LaurentAQ":
        return cls(terms=tuple((a, q, c) for (a, q), c in terms.items()))

    @classmethod
    def monomial(cls, a: int = 0, q: int = 0, coefficient: int = 1) -> "LaurentAQ":
        return cls(terms=((a, q, coefficient),))

    @classmethod
    def one(cls) -> "LaurentAQ":
        return cls.monomial()

    def as_dict(self) -> Dict[Monomial, int]:
        return {(a, q): c for a, q, c in self.terms}

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "LaurentAQ") -> "LaurentAQ":
        return LaurentAQ(terms=self.terms + other.terms)

    def __neg__(self) -> "LaurentAQ":
        return LaurentAQ(terms=tuple((a, q, -c) for a, q, c in self.terms))

    def __sub__(self, other: "LaurentAQ") -> "LaurentAQ":
        return self + (-other)

    def __mul__(self, other: "LaurentAQ") -> "LaurentAQ":
        return LaurentAQ(terms=tuple(
            (a1 + a2, q1 + q2, c1 * c2)
            for a1, q1, c1 in self.terms
            for a2, q2, c2 in other.terms
        ))

    def substitute_a(self, n: int) -> "LaurentAQ":
        """a -> q^n; the result has only a^0 terms"""
        return LaurentAQ(terms=tuple((0, q + n * a, c) for a, q, c in self.terms))

    def mirror(self) -> "LaurentAQ":
        return LaurentAQ(terms=tuple((-a, -q, c) for a, q, c in self.terms))

    def truncate(self, q_max: int) -> "LaurentAQ":
        return LaurentAQ(terms=tuple(t for t in self.terms if t[1] <= q_max))

    def q_range(self) -> Tuple[int, int]:
        qs = [q for _, q, _ in self.terms]
        return (min(qs), max(qs)) if qs else (0, 0)

    def to_text(self) -> str:
        """Canonical form "c*a^j*q^i + ..." in increasing (j, i)"""
        if not self.terms:
            return "0"
        pieces = []
        for a, q, c in self.terms:
            factors = [str(abs(c))]
            if a:
                factors.append(f"a^{a}")
            if q:
                factors.append(f"q^{q}")
            pieces.append(("- " if c < 0 else "+ ") + "*".join(factors))
        text = " ".join(pieces)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __str__(self) -> str:
        return self.to_text()


class HomflyPolynomial(BaseModel):
    """P = numerator / (q - q^-1)^z_power with z_power minimal"""
    model_config = ConfigDict(frozen=True)

    numerator: LaurentAQ
    z_power: int = Field(0, ge=0)

    @property
    def is_laurent(self) -> bool:
        return self.z_power == 0

    def mirror(self) -> "HomflyPolynomial":
        # (q - q^-1) -> -(q - q^-1) under q -> 1/q
        sign = -1 if self.z_power % 2 else 1
        numerator = self.numerator.mirror()
        return HomflyPolynomial(
            numerator=numerator if sign > 0 else -numerator, z_power=self.z_power
        )

    def expand_in_q(self, q_max: int) -> LaurentAQ:
        """
        Series expansion in positive powers of q, cut after q^q_max.

        1/(q - q^-1)^m = (-1)^m q^m sum_t C(m-1+t, t) q^(2t)
        """
        m = self.z_power
        if m == 0:
            return self.numerator.truncate(q_max)
        q_low = self.numerator.q_range()[0] + m
        series = []
        t = 0
        while q_low + 2 * t <= q_max:
            series.append((0, m + 2 * t, (-1) ** m * comb(m - 1 + t, t)))
            t += 1
        return (self.numerator * LaurentAQ(terms=tuple(series))).truncate(q_max)

    def divided_by_z(self, sign: int = 1) -> "HomflyPolynomial":
        """sign * P / (q - q^-1)"""
        numerator = self.numerator if sign > 0 else -self.numerator
        return HomflyPolynomial(numerator=numerator, z_power=self.z_power + 1)

    def specialize_sln(self, n: int) -> LaurentAQ:
        """a -> q^n, dividing out (q - q^-1)^z_power exactly"""
        coefficients: Dict[int, int] = {}
        for _, q, c in self.numerator.substitute_a(n).terms:
            coefficients[q] = coefficients.get(q, 0) + c
        for _ in range(self.z_power):
            coefficients = _divide_by_z(coefficients)
        return LaurentAQ(terms=tuple((0, q, c) for q, c in coefficients.items()))

    def to_text(self) -> str:
        if self.z_power == 0:
            return self.numerator.to_text()
        return f"({self.numerator.to_text()}) / (q - q^-1)^{self.z_power}"


def _divide_by_z(coefficients: Dict[int, int]) -> Dict[int, int]:
    """f / (q - q^-1) = f q / (q^2 - 1) for a Laurent polynomial in q"""
    remainder = {q + 1: c for q, c in coefficients.items() if c}
    if not remainder:
        return {}
    lowest = min(remainder)
    quotient: Dict[int, int] = {}
    while remainder:
        top = max(remainder)
        c = remainder.pop(top)
        if not c:
            continue
        if top - 2 < lowest:
            raise ValueError("polynomial is not divisible by q - q^-1")
        quotient[top - 2] = c
        remainder[top - 2] = remainder.get(top - 2, 0) + c
    return quotient
