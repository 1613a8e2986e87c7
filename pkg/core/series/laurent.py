from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping

from core.roots.groups import Vector
from core.series.rings import CoefficientRing


def graded_lex(exponent: Vector) -> tuple:
    return (sum(exponent), exponent)


@dataclass(frozen=True)
class LaurentPoly:
    """
    Sparse Laurent polynomial in the variables T_f (one per basis form).

    Terms are kept in graded-lex order and never hold zero coefficients.
    """

    ring: CoefficientRing
    nvars: int
    terms: tuple[tuple[Vector, Any], ...] = ()

    @classmethod
    def from_dict(cls, ring: CoefficientRing, nvars: int, coeffs: Mapping[Vector, Any]) -> "LaurentPoly":
        for e in coeffs:
            if len(e) != nvars:
                raise ValueError(f"exponent {e} does not have {nvars} entries")
        items = [(tuple(e), c) for e, c in coeffs.items() if not ring.is_zero(c)]
        items.sort(key=lambda t: graded_lex(t[0]))
        return cls(ring, nvars, tuple(items))

    @classmethod
    def zero(cls, ring: CoefficientRing, nvars: int) -> "LaurentPoly":
        return cls(ring, nvars)

    @classmethod
    def monomial(cls, ring: CoefficientRing, exponent: Vector, coeff: Any = None) -> "LaurentPoly":
        coeff = ring.one if coeff is None else coeff
        return cls.from_dict(ring, len(exponent), {tuple(exponent): coeff})

    def as_dict(self) -> dict[Vector, Any]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exponent: Vector):
        return self.as_dict().get(tuple(exponent), self.ring.zero)

    def _combine(self, other: "LaurentPoly", sign: int) -> "LaurentPoly":
        if other.nvars != self.nvars:
            raise ValueError(f"cannot combine polynomials in {self.nvars} and {other.nvars} variables")
        acc = self.as_dict()
        for e, c in other.terms:
            acc[e] = acc.get(e, self.ring.zero) + (c if sign > 0 else -c)
        return LaurentPoly.from_dict(self.ring, self.nvars, acc)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self._combine(other, 1)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self._combine(other, -1)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.ring, self.nvars, tuple((e, -c) for e, c in self.terms))

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if other.nvars != self.nvars:
            raise ValueError(f"cannot multiply polynomials in {self.nvars} and {other.nvars} variables")
        acc: dict[Vector, Any] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, self.ring.zero) + c1 * c2
        return LaurentPoly.from_dict(self.ring, self.nvars, acc)

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise ValueError(f"negative power {k} of a Laurent polynomial")
        result = LaurentPoly.monomial(self.ring, (0,) * self.nvars)
        for _ in range(k):
            result = result * self
        return result

    def scale(self, c: Any) -> "LaurentPoly":
        return LaurentPoly.from_dict(self.ring, self.nvars, {e: c * v for e, v in self.terms})

    def shift(self, exponent: Vector) -> "LaurentPoly":
        """
        Multiply by the monomial T^exponent.
        """
        return LaurentPoly(
            self.ring, self.nvars, tuple((tuple(a + b for a, b in zip(e, exponent)), c) for e, c in self.terms)
        )

    def truncate(self, order: int) -> "LaurentPoly":
        """
        Drop terms of total degree above `order`.
        """
        return LaurentPoly(self.ring, self.nvars, tuple((e, c) for e, c in self.terms if sum(e) <= order))

    def map_coefficients(self, f: Callable[[Any], Any], ring: CoefficientRing) -> "LaurentPoly":
        return LaurentPoly.from_dict(ring, self.nvars, {e: f(c) for e, c in self.terms})

    def min_degree(self) -> int:
        return min((sum(e) for e, _ in self.terms), default=0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            mono = "*".join(f"T{i + 1}^{k}" if k != 1 else f"T{i + 1}" for i, k in enumerate(e) if k)
            coeff = self.ring.format(c)
            parts.append(f"({coeff})*{mono}" if mono else f"({coeff})")
        return " + ".join(parts)


def poly_sum(ring: CoefficientRing, nvars: int, polys: Iterable[LaurentPoly]) -> LaurentPoly:
    acc: dict[Vector, Any] = {}
    for p in polys:
        for e, c in p.terms:
            acc[e] = acc.get(e, ring.zero) + c
    return LaurentPoly.from_dict(ring, nvars, acc)


__all__ = ["LaurentPoly", "poly_sum", "graded_lex"]
