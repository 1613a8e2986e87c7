from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

from sympy import Matrix as SympyMatrix

from core.roots.datum import LinearForm, SphericalPair
from core.roots.groups import Vector


@dataclass(frozen=True)
class ValuationChart:
    """
    Coordinates v(x) = (<f, x>)_f of H-lattice points in the basis forms
    Delta_H + C_H.

    The forms need not generate the dual lattice (long roots of Sp and SO
    pair into 2Z), so not every integer value vector comes from a lattice
    point; `point` returns None for those.
    """

    forms: tuple[LinearForm, ...]

    @classmethod
    def of(cls, pair: SphericalPair) -> "ValuationChart":
        return cls(pair.basis_forms)

    @property
    def rank(self) -> int:
        return len(self.forms)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.forms)

    @cached_property
    def _matrix(self) -> SympyMatrix:
        return SympyMatrix([list(f.coefficients) for f in self.forms])

    @cached_property
    def det(self) -> int:
        return int(self._matrix.det()) if self.rank else 1

    @cached_property
    def _adjugate(self) -> tuple[Vector, ...]:
        if not self.rank:
            return ()
        adj = self._matrix.adjugate()
        return tuple(tuple(int(adj[i, j]) for j in range(self.rank)) for i in range(self.rank))

    @property
    def index(self) -> int:
        """
        Index of the sublattice of value vectors coming from lattice points.
        """
        return abs(self.det)

    def values(self, x: Sequence[int]) -> Vector:
        return tuple(f(x) for f in self.forms)

    def value(self, name: str, x: Sequence[int]) -> int:
        return self.forms[self.names.index(name)](x)

    def point(self, values: Sequence[int]) -> Optional[Vector]:
        """
        The lattice point with the given form values, if there is one.
        """
        if len(values) != self.rank:
            raise ValueError(f"expected {self.rank} values, got {len(values)}")
        result = []
        for row in self._adjugate:
            numerator = sum(a * v for a, v in zip(row, values))
            if numerator % self.det:
                return None
            result.append(numerator // self.det)
        return tuple(result)


__all__ = ["ValuationChart"]
