"""
Cone series of toy modules: the brute-force truncation and the reduction
recursion producing rational closed forms.

For a cone C with triple shift s (sigma = |v(s)|) and an atom
a(t) = chi(t) t^m killed by P(X) = (X - chi(s))^k, k = 1 + |m|:

    F_C(a) * T^(k*sigma) P(T^-sigma) = sum_{i=1..k} a_i T^((k-i)*sigma) G_i,

where G_i is the series of a over C minus its translate by i*s. The (F1)
pieces split G_i into translates u + C' of cones with larger Theta_H or
sector zero; a(u + t') expands into atoms of the same character with
smaller monomials, so the recursion closes over finitely many atoms.
"""

from typing import Any, Iterable, Optional, Sequence

from core.cones.chart import ValuationChart
from core.cones.constraints import (
    Constraint,
    Relation,
    Sector,
    StdConeId,
    shift_in_semigroup,
    std_cone,
)
from core.cones.feasibility import bounded_points, is_finite
from core.log import get_logger
from core.reduction.catalog import structures_for
from core.reduction.structures import ReductionStructure, StructureEntry
from core.reduction.templates import instantiate
from core.roots.datum import LinearForm, SphericalPair
from core.roots.groups import Vector
from core.series.coefficients import (
    AnnihilatorPoly,
    ExpPolyCoefficient,
    ToyModule,
    character_value,
    monomial_value,
    shift_atom,
)
from core.series.errors import MissingStructure, SeriesError
from core.series.laurent import LaurentPoly, poly_sum
from core.series.rational import RationalSeries, series_sum
from core.series.rings import CoefficientRing

log = get_logger(__name__)


def _size_form(pair: SphericalPair, cone: StdConeId) -> LinearForm:
    """
    Linear form equal to sum |v_f(t)| on the closed sector of the cone.
    """
    rank = pair.h_lattice.rank
    coeffs = [0] * rank
    for f in pair.delta_h:
        coeffs = [a + b for a, b in zip(coeffs, f.coefficients)]
    sign = -1 if cone.sector == Sector.MINUS else 1
    for beta in pair.c_h:
        coeffs = [a + sign * b for a, b in zip(coeffs, beta.coefficients)]
    return LinearForm("size", tuple(coeffs))


def cone_points(pair: SphericalPair, cone: StdConeId, order: int) -> list[Vector]:
    """
    Points t of the strict cone with sum |v(t)| <= order, in lexicographic order.
    """
    cs = std_cone(pair, cone)
    bounded = cs.extended([Constraint(_size_form(pair, cone), Relation.LE, order)])
    return bounded_points(bounded)


def abs_values(chart: ValuationChart, t: Sequence[int]) -> Vector:
    return tuple(abs(v) for v in chart.values(t))


def truncate(module: ToyModule, cone: StdConeId, order: int) -> LaurentPoly:
    """
    Exact sum of c(t) T^|v(t)| over the cone points of total degree at most `order`.

    :param module: Toy module; its sector coefficient is used.
    :param cone: Theta_H and sector.
    :param order: Truncation order N >= 0.
    :return: Sparse Laurent polynomial in the basis-form variables.
    """
    if order < 0:
        raise SeriesError(f"truncation order must be nonnegative, got {order}")
    pair = module.pair
    chart = ValuationChart.of(pair)
    c = module.coefficient_for(cone.sector)
    ring = module.ring
    terms: dict[Vector, Any] = {}
    for t in cone_points(pair, cone, order):
        value = c(t)
        if not ring.is_zero(value):
            e = abs_values(chart, t)
            terms[e] = terms.get(e, ring.zero) + value
    return LaurentPoly.from_dict(ring, chart.rank, terms)


class SeriesEngine:
    """
    Closed forms of cone series for one pair, memoized per (atom, cone).

    :param pair: Spherical pair.
    :param structures: Reduction structures to reduce with (the pair's
        catalog structures by default).
    :param ring: Coefficient ring of the modules fed to this engine.
    """

    def __init__(
        self,
        pair: SphericalPair,
        ring: CoefficientRing,
        structures: Optional[Iterable[ReductionStructure]] = None,
    ):
        self.pair = pair
        self.ring = ring
        self.chart = ValuationChart.of(pair)
        if structures is None:
            structures = structures_for(pair)
        self.structures = {s.cone: s for s in structures if s.pair == pair}
        self._atoms: dict[tuple, RationalSeries] = {}
        self._finite: dict[StdConeId, bool] = {}
        self._active: set[tuple] = set()

    @property
    def nvars(self) -> int:
        return self.chart.rank

    def series(self, c: ExpPolyCoefficient, cone: StdConeId) -> RationalSeries:
        """
        Closed form of sum_{t in cone} c(t) T^|v(t)|.
        """
        parts = []
        for weight, character, m in c.atoms():
            if self.ring.is_zero(weight):
                continue
            parts.append(self.atom(character, m, cone).scale(weight))
        return series_sum(self.ring, self.nvars, parts)

    def atom(self, character: tuple, m: Vector, cone: StdConeId) -> RationalSeries:
        key = (character, m, cone)
        if key not in self._atoms:
            if key in self._active:
                raise SeriesError(f"reduction of {cone.label(self.pair)} loops back onto itself")
            self._active.add(key)
            try:
                self._atoms[key] = self._reduce_atom(character, m, cone)
            finally:
                self._active.discard(key)
        return self._atoms[key]

    def is_finite(self, cone: StdConeId) -> bool:
        if cone not in self._finite:
            self._finite[cone] = is_finite(std_cone(self.pair, cone))
        return self._finite[cone]

    def _reduce_atom(self, character: tuple, m: Vector, cone: StdConeId) -> RationalSeries:
        if self.is_finite(cone):
            return self._finite_sum(character, m, cone)

        entry = self._entry(cone)
        s = entry.triple.s
        sigma = abs_values(self.chart, s)
        lam = character_value(self.ring, character, s)
        k = 1 + sum(m)
        P = AnnihilatorPoly.from_roots(self.ring, [(lam, k)])
        log.debug(f"reducing x^{m} on {cone.label(self.pair)} with {entry.triple.label(self.pair)}, degree {k}")

        parts = []
        for i in range(1, k + 1):
            a_i = P.coefficients[i]
            if self.ring.is_zero(a_i):
                continue
            g_i = self._difference_series(character, m, cone, entry, i)
            parts.append(g_i.scale(a_i).shift(tuple((k - i) * e for e in sigma)))
        return series_sum(self.ring, self.nvars, parts).divide(lam, sigma, k)

    def _difference_series(
        self, character: tuple, m: Vector, cone: StdConeId, entry: StructureEntry, n: int
    ) -> RationalSeries:
        """
        Series of the atom over the cone minus its translate by n*s, piece by piece.
        """
        parts = []
        for piece in instantiate(self.pair, cone, entry.triple.s, entry.template, n):
            offset = abs_values(self.chart, piece.shift)
            for weight, m2 in shift_atom(self.ring, character, m, piece.shift):
                if self.ring.is_zero(weight):
                    continue
                parts.append(self.atom(character, m2, piece.body).scale(weight).shift(offset))
        return series_sum(self.ring, self.nvars, parts)

    def _finite_sum(self, character: tuple, m: Vector, cone: StdConeId) -> RationalSeries:
        terms = []
        for t in bounded_points(std_cone(self.pair, cone)):
            value = character_value(self.ring, character, t) * monomial_value(self.ring, m, t)
            terms.append(LaurentPoly.monomial(self.ring, abs_values(self.chart, t), value))
        return RationalSeries.polynomial(poly_sum(self.ring, self.nvars, terms))

    def _entry(self, cone: StdConeId) -> StructureEntry:
        structure = self.structures.get(cone)
        if structure is None:
            raise MissingStructure(f"{self.pair.key} has no reduction structure for {cone.label(self.pair)}")
        for entry in structure.entries:
            s = entry.triple.s
            if any(s) and shift_in_semigroup(self.pair, cone, s):
                return entry
        raise MissingStructure(
            f"structure {structure.key or cone.label(self.pair)} has no triple with a usable shift"
        )


def reduce(
    module: ToyModule,
    cone: StdConeId,
    structures: Optional[Iterable[ReductionStructure]] = None,
    engine: Optional[SeriesEngine] = None,
) -> RationalSeries:
    """
    Rational closed form of the module's series on a cone.

    :param module: Toy module; the coefficient of the cone's sector is used.
    :param cone: Theta_H and sector.
    :param structures: Reduction structures (catalog by default).
    :param engine: Engine to reuse memoized atoms from.
    :raises MissingStructure: If an infinite cone on the way has no structure.
    :raises NonUnitEigenvalue: If an annihilator eigenvalue is not a unit.
    """
    engine = engine or SeriesEngine(module.pair, module.ring, structures)
    return engine.series(module.coefficient_for(cone.sector), cone)


def cone_ids(pair: SphericalPair) -> list[StdConeId]:
    """
    Every strict cone of a pair: all Theta_H, with the sectors the pair has.
    """
    names = pair.delta_h_names
    sectors = [Sector.ZERO, Sector.PLUS, Sector.MINUS] if pair.has_sectors else [Sector.NONE]
    result = []
    for mask in range((1 << len(names)) - 1, -1, -1):
        theta = frozenset(names[i] for i in range(len(names)) if mask >> i & 1)
        for sector in sectors:
            result.append(StdConeId(theta, sector))
    return result


__all__ = [
    "SeriesEngine",
    "truncate",
    "reduce",
    "cone_points",
    "cone_ids",
    "abs_values",
]
