"""
Exponential-polynomial coefficient functions and their annihilators.

A coefficient c(t) = sum_j scalar_j * chi_j(t) * p_j(t) lives on the H-lattice;
characters are given by their (unit) values on the lattice basis and p_j
by its monomials in the lattice coordinates.
"""

from dataclasses import dataclass, field
from math import comb
from typing import Any, Iterator, Mapping, Optional, Sequence

from sympy import Poly, Symbol

from core.cones.constraints import Sector
from core.log import get_logger
from core.roots.datum import SphericalPair
from core.roots.errors import DimensionMismatch
from core.roots.groups import Vector
from core.series.errors import InvalidCoefficient, NonUnitEigenvalue
from core.series.rings import QQ_RING, CoefficientRing

log = get_logger(__name__)

X = Symbol("X")


def character_value(ring: CoefficientRing, character: Sequence[Any], t: Sequence[int]):
    if len(character) != len(t):
        raise DimensionMismatch(f"character of rank {len(character)} evaluated at {tuple(t)}")
    value = ring.one
    for chi, k in zip(character, t):
        value = value * ring.power(chi, k)
    return value


def monomial_value(ring: CoefficientRing, m: Sequence[int], t: Sequence[int]):
    value = ring.one
    for k, x in zip(m, t):
        value = value * ring(x**k)
    return value


@dataclass(frozen=True)
class ExpPolyTerm:
    scalar: Any
    character: tuple
    polynomial: tuple[tuple[Vector, Any], ...]

    @property
    def degree(self) -> int:
        return max((sum(m) for m, _ in self.polynomial), default=0)


@dataclass(frozen=True)
class ExpPolyCoefficient:
    """
    Exponential-polynomial function on a lattice of rank `rank`.
    """

    ring: CoefficientRing
    rank: int
    terms: tuple[ExpPolyTerm, ...]

    def __post_init__(self):
        for term in self.terms:
            if len(term.character) != self.rank:
                raise DimensionMismatch(f"character {term.character} does not have {self.rank} values")
            for chi in term.character:
                if not self.ring.is_unit(chi):
                    raise NonUnitEigenvalue(f"character value {self.ring.format(chi)} is not a unit")
            for m, _ in term.polynomial:
                if len(m) != self.rank or any(k < 0 for k in m):
                    raise InvalidCoefficient(f"monomial exponent {m} is not valid in rank {self.rank}")

    @classmethod
    def build(
        cls,
        ring: CoefficientRing,
        rank: int,
        terms: Sequence[tuple[Any, Sequence[Any], Optional[Mapping[Vector, Any]]]],
    ) -> "ExpPolyCoefficient":
        """
        Build a coefficient from (scalar, character values, polynomial) triples.

        Values may be ints, Fractions, strings or ring elements; a missing
        polynomial means the constant 1.
        """
        built = []
        for scalar, character, polynomial in terms:
            polynomial = polynomial or {(0,) * rank: 1}
            monomials = tuple(sorted((tuple(m), ring(c)) for m, c in polynomial.items()))
            built.append(ExpPolyTerm(ring(scalar), tuple(ring(x) for x in character), monomials))
        return cls(ring, rank, tuple(built))

    @classmethod
    def exponential(
        cls, character: Sequence[Any], scalar: Any = 1, ring: CoefficientRing = QQ_RING
    ) -> "ExpPolyCoefficient":
        return cls.build(ring, len(character), [(scalar, character, None)])

    @classmethod
    def constant(cls, value: Any, rank: int, ring: CoefficientRing = QQ_RING) -> "ExpPolyCoefficient":
        return cls.build(ring, rank, [(value, [1] * rank, None)])

    def __call__(self, t: Sequence[int]):
        return coeff_eval(self, t)

    def atoms(self) -> Iterator[tuple[Any, tuple, Vector]]:
        """
        Yield (weight, character, monomial exponent) with c = sum weight * chi * x^m.
        """
        for term in self.terms:
            for m, coeff in term.polynomial:
                yield term.scalar * coeff, term.character, m

    def evaluated(self, f, ring: CoefficientRing) -> "ExpPolyCoefficient":
        """
        Apply a ring morphism to every scalar, character value and polynomial coefficient.
        """
        terms = []
        for term in self.terms:
            terms.append(
                ExpPolyTerm(
                    ring(f(term.scalar)),
                    tuple(ring(f(x)) for x in term.character),
                    tuple((m, ring(f(c))) for m, c in term.polynomial),
                )
            )
        return ExpPolyCoefficient(ring, self.rank, tuple(terms))


def coeff_eval(c: ExpPolyCoefficient, t: Sequence[int]):
    """
    Exact value sum_j scalar_j * chi_j(t) * p_j(t).
    """
    if len(t) != c.rank:
        raise DimensionMismatch(f"point {tuple(t)} does not live on a rank {c.rank} lattice")
    ring = c.ring
    total = ring.zero
    for term in c.terms:
        p = ring.zero
        for m, coeff in term.polynomial:
            p = p + coeff * monomial_value(ring, m, t)
        if not ring.is_zero(p):
            total = total + term.scalar * character_value(ring, term.character, t) * p
    return total


def shift_atom(ring: CoefficientRing, character: tuple, m: Vector, u: Sequence[int]) -> list[tuple[Any, Vector]]:
    """
    Expand chi(t + u) (t + u)^m as sum of weight * chi(t) t^m' over m' <= m.
    """
    scale = character_value(ring, character, u)
    result = [(scale, ())]
    for k, x in zip(m, u):
        step = []
        for weight, prefix in result:
            for j in range(k + 1):
                factor = comb(k, j) * x ** (k - j)
                if factor:
                    step.append((weight * ring(factor), prefix + (j,)))
        result = step
    return result


@dataclass(frozen=True)
class ToyModule:
    """
    Matrix coefficient t -> <pi(t)v, v~> on the H-lattice, optionally with
    a different exponential-polynomial on each sector cone.
    """

    pair: SphericalPair
    coefficient: ExpPolyCoefficient
    sectors: tuple[tuple[Sector, ExpPolyCoefficient], ...] = field(default=())

    def __post_init__(self):
        rank = self.pair.h_lattice.rank
        for c in [self.coefficient] + [c for _, c in self.sectors]:
            if c.rank != rank:
                raise DimensionMismatch(f"coefficient of rank {c.rank} on the rank {rank} lattice of {self.pair.key}")
            if c.ring is not self.coefficient.ring:
                raise InvalidCoefficient("all coefficients of a module must share one ring")

    @property
    def ring(self) -> CoefficientRing:
        return self.coefficient.ring

    def coefficient_for(self, sector: Sector) -> ExpPolyCoefficient:
        for s, c in self.sectors:
            if s == sector:
                return c
        return self.coefficient

    def evaluated(self, f, ring: CoefficientRing) -> "ToyModule":
        return ToyModule(
            self.pair,
            self.coefficient.evaluated(f, ring),
            tuple((s, c.evaluated(f, ring)) for s, c in self.sectors),
        )


@dataclass(frozen=True)
class AnnihilatorPoly:
    """
    P(X) = a_0 + a_1 X + ... + a_N X^N with unit a_0 and a_N.
    """

    ring: CoefficientRing
    coefficients: tuple

    def __post_init__(self):
        if not self.coefficients:
            raise InvalidCoefficient("an annihilator needs at least one coefficient")
        for a in (self.coefficients[0], self.coefficients[-1]):
            if not self.ring.is_unit(a):
                raise NonUnitEigenvalue(f"annihilator coefficient {self.ring.format(a)} is not a unit")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @classmethod
    def from_roots(cls, ring: CoefficientRing, roots: Sequence[tuple[Any, int]]) -> "AnnihilatorPoly":
        """
        prod (X - root)^multiplicity.
        """
        poly = Poly.from_list([ring.one], X, domain=ring.domain)
        for root, k in roots:
            if not ring.is_unit(root):
                raise NonUnitEigenvalue(f"eigenvalue {ring.format(root)} is not a unit")
            poly = poly * Poly.from_list([ring.one, -root], X, domain=ring.domain) ** k
        coefficients = tuple(ring.domain.from_sympy(a) for a in reversed(poly.all_coeffs()))
        return cls(ring, coefficients)

    def apply(self, c: ExpPolyCoefficient, s: Sequence[int], t: Sequence[int]):
        """
        (P(Shift_s) c)(t) = sum_i a_i c(t + i*s).
        """
        total = self.ring.zero
        for i, a in enumerate(self.coefficients):
            point = tuple(x + i * y for x, y in zip(t, s))
            total = total + a * coeff_eval(c, point)
        return total

    def __str__(self) -> str:
        parts = [f"({self.ring.format(a)})*X^{i}" for i, a in enumerate(self.coefficients) if not self.ring.is_zero(a)]
        return " + ".join(parts) or "0"


def annihilator(module: ToyModule, s: Sequence[int], sector: Optional[Sector] = None) -> AnnihilatorPoly:
    """
    Polynomial P with P(Shift_s) killing the module's coefficient.

    :param module: Toy module.
    :param s: Shift (a point of the H-lattice).
    :param sector: Sector whose coefficient is used (default coefficient if None).
    :return: prod_j (X - chi_j(s))^(1 + deg p_j).
    :raises NonUnitEigenvalue: If some chi_j(s) is not a unit.
    """
    c = module.coefficient if sector is None else module.coefficient_for(sector)
    ring = c.ring
    roots = [(character_value(ring, term.character, s), 1 + term.degree) for term in c.terms]
    return AnnihilatorPoly.from_roots(ring, roots)


__all__ = [
    "ExpPolyTerm",
    "ExpPolyCoefficient",
    "ToyModule",
    "AnnihilatorPoly",
    "annihilator",
    "coeff_eval",
    "character_value",
    "shift_atom",
    "monomial_value",
]
