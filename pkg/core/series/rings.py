"""
Exact coefficient rings: the rationals, and a one-parameter family ring
(Laurent polynomials in u over the rationals, computed inside Q(u)).
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

from sympy import QQ, Integer, Rational, Symbol, SympifyError, sympify

from core.series.errors import DegenerateSpecialization, InvalidCoefficient, NonInvertible

U = Symbol("u")


def to_fraction(value: Any) -> Fraction:
    """
    Convert a sympy rational (or a domain element of QQ) to a Fraction.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(int(value.p), int(value.q))
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    value = Rational(value)
    return Fraction(int(value.p), int(value.q))


class CoefficientRing:
    """
    Exact ring of series coefficients, backed by a sympy domain.
    """

    name: str = ""
    domain: Any = None

    def __call__(self, value: Any):
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, Fraction):
            return self.domain.from_sympy(Rational(value.numerator, value.denominator))
        if isinstance(value, int):
            return self.domain.from_sympy(Integer(value))
        return self.domain.convert(value)

    @property
    def zero(self):
        return self.domain.zero

    @property
    def one(self):
        return self.domain.one

    def is_zero(self, a) -> bool:
        return self.domain.is_zero(a)

    def is_unit(self, a) -> bool:
        raise NotImplementedError()

    def power(self, a, k: int):
        if k >= 0:
            return a**k
        if self.is_zero(a):
            raise NonInvertible(f"cannot invert zero (power {k})")
        return self.one / a ** (-k)

    def parse(self, text: str):
        try:
            expr = sympify(text, locals={"u": U})
        except (SympifyError, SyntaxError, TypeError) as err:
            raise InvalidCoefficient(f"cannot parse coefficient {text!r}: {err}") from err
        if expr.free_symbols - self.symbols:
            raise InvalidCoefficient(f"coefficient {text!r} is not an element of {self.name}")
        try:
            return self.domain.from_sympy(expr)
        except Exception as err:
            raise InvalidCoefficient(f"coefficient {text!r} is not an element of {self.name}") from err

    @property
    def symbols(self) -> set:
        return set()

    def evaluate(self, a, point: Optional[Fraction] = None) -> Fraction:
        raise NotImplementedError()

    def format(self, a) -> str:
        return str(self.domain.to_sympy(a))


class RationalField(CoefficientRing):
    name = "QQ"
    domain = QQ

    def is_unit(self, a) -> bool:
        return not self.is_zero(a)

    def evaluate(self, a, point: Optional[Fraction] = None) -> Fraction:
        return to_fraction(a)


class FamilyRing(CoefficientRing):
    """
    Q[u, 1/u]: units are the nonzero monomials c*u^k.
    """

    name = "QQ[u,1/u]"
    domain = QQ.frac_field(U)

    @property
    def symbols(self) -> set:
        return {U}

    def parse(self, text: str):
        value = super().parse(text)
        # reduced form; only monomial denominators lie in Q[u, 1/u]
        if len(value.denom.terms()) != 1:
            raise InvalidCoefficient(f"coefficient {text!r} is not an element of {self.name}")
        return value

    def is_unit(self, a) -> bool:
        if self.is_zero(a):
            return False
        return len(a.numer.terms()) == 1 and len(a.denom.terms()) == 1

    def evaluate(self, a, point: Optional[Fraction] = None) -> Fraction:
        if point is None:
            raise DegenerateSpecialization("family coefficients need an evaluation point u0")
        u0 = Rational(point.numerator, point.denominator)
        den = a.denom.as_expr().subs(U, u0)
        if den == 0:
            raise DegenerateSpecialization(f"denominator of {self.format(a)} vanishes at u = {point}")
        return to_fraction(a.numer.as_expr().subs(U, u0) / den)


QQ_RING = RationalField()
FAMILY_RING = FamilyRing()


def ring_by_name(name: str) -> CoefficientRing:
    if name in ("QQ", "Q", "rational"):
        return QQ_RING
    if name in ("QQ[u]", "QQ[u,1/u]", "family"):
        return FAMILY_RING
    raise InvalidCoefficient(f"unknown coefficient ring {name!r}; expected QQ or family")


@dataclass(frozen=True)
class EvalPoint:
    """
    Ring morphism to the rationals: the identity on QQ, u -> u0 on the family ring.
    """

    ring: CoefficientRing
    u0: Optional[Fraction] = None

    def __call__(self, a) -> Fraction:
        return self.ring.evaluate(a, self.u0)

    def label(self) -> str:
        return "identity" if self.u0 is None else f"u={self.u0}"


__all__ = [
    "CoefficientRing",
    "RationalField",
    "FamilyRing",
    "EvalPoint",
    "QQ_RING",
    "FAMILY_RING",
    "U",
    "ring_by_name",
    "to_fraction",
]
