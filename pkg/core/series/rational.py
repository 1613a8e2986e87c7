"""
Rational closed forms N(T) / prod (1 - lambda T^sigma)^k of cone series.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Any, Mapping, Optional, Sequence

from sympy import Poly, Symbol

from core.roots.groups import Vector
from core.series.coefficients import AnnihilatorPoly
from core.series.errors import DegenerateSpecialization, SeriesError
from core.series.laurent import LaurentPoly, poly_sum
from core.series.rings import QQ_RING, CoefficientRing, EvalPoint

S = Symbol("S")

# (lambda, sigma) -> multiplicity k, meaning (1 - lambda * T^sigma)^k
FactorKey = tuple[Any, Vector]


def _factor_order(ring: CoefficientRing):
    def key(item):
        (lam, sigma), _ = item
        return (sum(sigma), sigma, ring.format(lam))

    return key


@dataclass(frozen=True)
class RationalSeries:
    """
    A power series in the T variables written as numerator / prod of
    (1 - lambda T^sigma)^k. Every factor has constant term 1 and a unit
    lambda, so it is invertible in the power-series ring of the sector.
    """

    ring: CoefficientRing
    nvars: int
    numerator: LaurentPoly
    factors: tuple[tuple[FactorKey, int], ...] = ()

    def __post_init__(self):
        for (lam, sigma), k in self.factors:
            if len(sigma) != self.nvars or any(e < 0 for e in sigma) or not any(sigma):
                raise SeriesError(f"denominator shift {sigma} is not a nonzero exponent vector")
            if not self.ring.is_unit(lam):
                raise SeriesError(f"denominator eigenvalue {self.ring.format(lam)} is not a unit")
            if k < 1:
                raise SeriesError(f"denominator multiplicity must be positive, got {k}")

    @classmethod
    def build(
        cls, ring: CoefficientRing, nvars: int, numerator: LaurentPoly, factors: Mapping[FactorKey, int]
    ) -> "RationalSeries":
        items = sorted(((key, k) for key, k in factors.items() if k), key=_factor_order(ring))
        return cls(ring, nvars, numerator, tuple(items))

    @classmethod
    def polynomial(cls, poly: LaurentPoly) -> "RationalSeries":
        return cls(poly.ring, poly.nvars, poly)

    @classmethod
    def zero(cls, ring: CoefficientRing, nvars: int) -> "RationalSeries":
        return cls(ring, nvars, LaurentPoly.zero(ring, nvars))

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def factor_map(self) -> dict[FactorKey, int]:
        return dict(self.factors)

    def _lifted(self, target: Mapping[FactorKey, int]) -> LaurentPoly:
        """
        Numerator over the larger denominator `target`.
        """
        own = self.factor_map()
        numerator = self.numerator
        for (lam, sigma), k in target.items():
            extra = k - own.get((lam, sigma), 0)
            if extra:
                numerator = numerator * linear_factor(self.ring, lam, sigma) ** extra
        return numerator

    def __add__(self, other: "RationalSeries") -> "RationalSeries":
        if other.nvars != self.nvars:
            raise SeriesError(f"cannot add series in {self.nvars} and {other.nvars} variables")
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        target = self.factor_map()
        for key, k in other.factors:
            target[key] = max(target.get(key, 0), k)
        numerator = self._lifted(target) + other._lifted(target)
        return RationalSeries.build(self.ring, self.nvars, numerator, target)

    def scale(self, c: Any) -> "RationalSeries":
        return RationalSeries(self.ring, self.nvars, self.numerator.scale(c), self.factors)

    def shift(self, exponent: Sequence[int]) -> "RationalSeries":
        """
        Multiply by T^exponent.
        """
        return RationalSeries(self.ring, self.nvars, self.numerator.shift(tuple(exponent)), self.factors)

    def divide(self, lam: Any, sigma: Sequence[int], k: int = 1) -> "RationalSeries":
        """
        Divide by (1 - lam * T^sigma)^k.
        """
        factors = self.factor_map()
        key = (lam, tuple(sigma))
        factors[key] = factors.get(key, 0) + k
        return RationalSeries.build(self.ring, self.nvars, self.numerator, factors)

    def denominator(self) -> LaurentPoly:
        result = LaurentPoly.monomial(self.ring, (0,) * self.nvars)
        for (lam, sigma), k in self.factors:
            result = result * linear_factor(self.ring, lam, sigma) ** k
        return result

    def annihilators(self) -> list[tuple[AnnihilatorPoly, Vector]]:
        """
        Denominator as prod P(T^-sigma) * T^(deg P * sigma), one P per shift.
        """
        by_shift: dict[Vector, list[tuple[Any, int]]] = {}
        for (lam, sigma), k in self.factors:
            by_shift.setdefault(sigma, []).append((lam, k))
        return [(AnnihilatorPoly.from_roots(self.ring, roots), sigma) for sigma, roots in by_shift.items()]

    def expand(self, order: int) -> LaurentPoly:
        """
        Power series expansion up to total degree `order`, exact.
        """
        if order < 0:
            raise SeriesError(f"expansion order must be nonnegative, got {order}")
        result = self.numerator.truncate(order)
        for (lam, sigma), k in self.factors:
            result = (result * inverse_factor(self.ring, lam, sigma, k, order)).truncate(order)
        return result

    def evaluated(self, x: EvalPoint) -> "RationalSeries":
        """
        Push every coefficient through an evaluation point.

        :raises DegenerateSpecialization: If a denominator eigenvalue evaluates to zero.
        """
        numerator = self.numerator.map_coefficients(lambda c: QQ_RING(x(c)), QQ_RING)
        factors: dict[FactorKey, int] = {}
        for (lam, sigma), k in self.factors:
            value = QQ_RING(x(lam))
            if QQ_RING.is_zero(value):
                raise DegenerateSpecialization(f"eigenvalue {self.ring.format(lam)} vanishes at {x.label()}")
            key = (value, sigma)
            factors[key] = factors.get(key, 0) + k
        return RationalSeries.build(QQ_RING, self.nvars, numerator, factors)

    def specialize(self, q: Fraction, weights: Sequence[int]) -> tuple[Poly, Poly]:
        """
        Substitute T_f -> q^(N_f) * S.

        :param q: Residue field size.
        :param weights: Exponent N_f for every variable (0 for complement forms).
        :return: (Q(S), P(S)) over the coefficient domain; P(0) = 1.
        """
        if len(weights) != self.nvars:
            raise SeriesError(f"expected {self.nvars} modulus exponents, got {len(weights)}")
        ring = self.ring

        def substitute(poly: LaurentPoly) -> Poly:
            coeffs: dict[tuple[int], Any] = {}
            for e, c in poly.terms:
                factor = Fraction(q) ** sum(n * k for n, k in zip(weights, e))
                key = (sum(e),)
                coeffs[key] = coeffs.get(key, ring.zero) + c * ring(factor)
            coeffs = {k: v for k, v in coeffs.items() if not ring.is_zero(v)}
            return Poly.from_dict(coeffs or {(0,): ring.zero}, S, domain=ring.domain)

        return substitute(self.numerator), substitute(self.denominator())

    def __str__(self) -> str:
        if not self.factors:
            return str(self.numerator)
        den = " * ".join(
            f"(1 - ({self.ring.format(lam)})*T^{sigma})" + (f"^{k}" if k > 1 else "")
            for (lam, sigma), k in self.factors
        )
        return f"[{self.numerator}] / [{den}]"


def linear_factor(ring: CoefficientRing, lam: Any, sigma: Sequence[int]) -> LaurentPoly:
    """
    1 - lam * T^sigma.
    """
    nvars = len(sigma)
    return LaurentPoly.from_dict(ring, nvars, {(0,) * nvars: ring.one, tuple(sigma): -lam})


def inverse_factor(ring: CoefficientRing, lam: Any, sigma: Sequence[int], k: int, order: int) -> LaurentPoly:
    """
    Expansion of (1 - lam * T^sigma)^-k up to total degree `order`.
    """
    step = sum(sigma)
    coeffs = {}
    j = 0
    while j * step <= order:
        coeffs[tuple(j * e for e in sigma)] = ring(comb(j + k - 1, k - 1)) * ring.power(lam, j)
        j += 1
    return LaurentPoly.from_dict(ring, len(sigma), coeffs)


def series_sum(ring: CoefficientRing, nvars: int, parts: Sequence[RationalSeries]) -> RationalSeries:
    """
    Sum of series; parts sharing their denominator are added numerator-wise first.
    """
    grouped: dict[tuple, list[LaurentPoly]] = {}
    for p in parts:
        grouped.setdefault(p.factors, []).append(p.numerator)
    total = RationalSeries.zero(ring, nvars)
    for factors, numerators in grouped.items():
        total = total + RationalSeries(ring, nvars, poly_sum(ring, nvars, numerators), factors)
    return total


def specialization_weights(names: Sequence[str], n_exp: Mapping[str, int]) -> list[int]:
    return [n_exp.get(name, 0) for name in names]


def expand_ratio(numerator: Poly, denominator: Poly, order: int, ring: Optional[CoefficientRing] = None) -> list:
    """
    Coefficients of Q(S)/P(S) up to S^order, for P(0) a unit.
    """
    ring = ring or QQ_RING
    q = [ring.domain.from_sympy(c) for c in reversed(numerator.all_coeffs())]
    p = [ring.domain.from_sympy(c) for c in reversed(denominator.all_coeffs())]
    if not p or ring.is_zero(p[0]):
        raise SeriesError("denominator constant term is zero")
    inv0 = ring.one / p[0]
    result = []
    for n in range(order + 1):
        value = q[n] if n < len(q) else ring.zero
        for j in range(1, min(n, len(p) - 1) + 1):
            value = value - p[j] * result[n - j]
        result.append(value * inv0)
    return result


__all__ = [
    "RationalSeries",
    "linear_factor",
    "inverse_factor",
    "series_sum",
    "specialization_weights",
    "expand_ratio",
    "S",
]
