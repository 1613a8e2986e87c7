"""
Values of Q(S)/P(S) at S = 1 by comparing orders, exactly.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from sympy import QQ, Poly, Rational

from core.log import get_logger
from core.periods.errors import ZeroDenominator
from core.series.errors import DegenerateSpecialization
from core.series.rational import S
from core.series.rings import CoefficientRing, EvalPoint, to_fraction

log = get_logger(__name__)


@dataclass(frozen=True)
class Value:
    value: Fraction

    @property
    def status(self) -> str:
        return "value"

    def describe(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Pole:
    """
    Q/P is not regular at S = 1: the order of P there exceeds that of Q.
    """

    ord_p: int
    ord_q: int
    where: str = ""

    @property
    def status(self) -> str:
        return "pole"

    def describe(self) -> str:
        location = f" at {self.where}" if self.where else ""
        return f"pole{location} (ord P = {self.ord_p}, ord Q = {self.ord_q})"


@dataclass(frozen=True)
class OrderJump:
    """
    The order of P at S = 1 differs from its generic order in the family.
    """

    u0: Fraction
    generic_order: int
    order: int

    @property
    def status(self) -> str:
        return "order-jump"

    def describe(self) -> str:
        return f"order of P at S=1 jumps from {self.generic_order} to {self.order} at u={self.u0}"


PeriodResult = Union[Value, Pole]


def _evaluate(poly: Poly, x: EvalPoint) -> Poly:
    ring = x.ring
    coeffs = [x(ring.domain.from_sympy(c)) for c in poly.all_coeffs()]
    return Poly([Rational(c.numerator, c.denominator) for c in coeffs], S, domain=QQ)


def taylor_at_one(poly: Poly) -> list[Fraction]:
    """
    Coefficients of poly(1 + eps) in increasing powers of eps.
    """
    shifted = poly.shift(1)
    return [to_fraction(c) for c in reversed(shifted.all_coeffs())]


def order_at_one(coeffs: Sequence) -> Optional[int]:
    for i, c in enumerate(coeffs):
        if c != 0:
            return i
    return None


def eval_at_one(Q: Poly, P: Poly, x: EvalPoint) -> PeriodResult:
    """
    Value of Q/P at S = 1 after applying an evaluation point.

    :param Q: Numerator polynomial in S over the ring of `x`.
    :param P: Denominator polynomial in S over the ring of `x`.
    :param x: Evaluation point.
    :return: Value(b_r / a_r) with r the order of P at S = 1 when Q
        vanishes to at least that order; Pole otherwise.
    :raises ZeroDenominator: If P vanishes identically after evaluation.
    """
    p = taylor_at_one(_evaluate(P, x))
    q = taylor_at_one(_evaluate(Q, x))
    r = order_at_one(p)
    if r is None:
        raise ZeroDenominator(f"denominator vanishes identically at {x.label()}")
    ord_q = order_at_one(q)
    if ord_q is None:
        return Value(Fraction(0))
    if r <= ord_q:
        b_r = q[r] if r < len(q) else Fraction(0)
        return Value(b_r / p[r])
    return Pole(r, ord_q)


class FamilyEvaluation:
    """
    Evaluation at S = 1 of a family Q/P over Q[u, 1/u], generically and at points u0.
    """

    def __init__(self, Q: Poly, P: Poly, ring: CoefficientRing):
        self.Q = Q
        self.P = P
        self.ring = ring
        p = self._generic_taylor(P)
        self.generic_order = order_at_one(p)
        if self.generic_order is None:
            raise ZeroDenominator("denominator of the family is identically zero")

    def _generic_taylor(self, poly: Poly) -> list:
        return [self.ring.domain.from_sympy(c) for c in reversed(poly.shift(1).all_coeffs())]

    def generic(self):
        """
        Generic value b_r / a_r as a ring element, or None for a generic pole.
        """
        p = self._generic_taylor(self.P)
        q = self._generic_taylor(self.Q)
        r = self.generic_order
        ord_q = next((i for i, c in enumerate(q) if not self.ring.is_zero(c)), None)
        if ord_q is None:
            return self.ring.zero
        if r > ord_q:
            return None
        b_r = q[r] if r < len(q) else self.ring.zero
        return b_r / p[r]

    def at(self, u0: Fraction) -> Union[Value, Pole, OrderJump]:
        """
        Evaluate at u = u0, reporting an order jump instead of a value when
        the order of P at S = 1 is not the generic one.

        :raises DegenerateSpecialization: If a coefficient has a pole at u0.
        """
        x = EvalPoint(self.ring, Fraction(u0))
        order = order_at_one(taylor_at_one(_evaluate(self.P, x)))
        if order is None or order != self.generic_order:
            jump = OrderJump(Fraction(u0), self.generic_order, -1 if order is None else order)
            log.info(jump.describe())
            return jump
        return eval_at_one(self.Q, self.P, x)

    def commutes(self, u0: Fraction) -> bool:
        """
        Whether evaluating at u0 after taking the value at S = 1 agrees with the reverse order.
        """
        result = self.at(u0)
        generic = self.generic()
        if isinstance(result, OrderJump):
            return False
        if generic is None:
            return isinstance(result, Pole)
        try:
            expected = self.ring.evaluate(generic, Fraction(u0))
        except DegenerateSpecialization:
            return False
        return isinstance(result, Value) and result.value == expected


__all__ = [
    "Value",
    "Pole",
    "OrderJump",
    "PeriodResult",
    "eval_at_one",
    "taylor_at_one",
    "order_at_one",
    "FamilyEvaluation",
]
