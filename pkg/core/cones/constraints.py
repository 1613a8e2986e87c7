"""
Integer-linear constraint systems on cocharacter lattices.

All pairings are integer valued, so strict inequalities are stored in
their non-strict integer form ("> b" becomes ">= b+1").
"""

from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Iterable, Optional, Sequence

from core.cones.errors import SectorMismatch, UnknownRoot
from core.log import get_logger
from core.roots.datum import CocharLattice, LinearForm, SphericalPair, pairing
from core.roots.errors import DimensionMismatch
from core.roots.groups import Vector

log = get_logger(__name__)


class Relation(str, Enum):
    GE = ">="
    EQ = "="
    LE = "<="


class Sector(str, Enum):
    """
    Sign of the complement coordinate v_beta on a cone.
    """

    PLUS = "plus"
    ZERO = "zero"
    MINUS = "minus"
    NONE = "none"

    @property
    def symbol(self) -> str:
        return {"plus": "+", "zero": "0", "minus": "-", "none": ""}[self.value]


@dataclass(frozen=True)
class Constraint:
    form: LinearForm
    relation: Relation
    bound: int

    @classmethod
    def make(cls, form: LinearForm, op: str, bound: int) -> "Constraint":
        """
        Build a constraint from any comparison operator, normalizing strict ones.

        :param op: One of ">=", ">", "=", "<=", "<".
        """
        if op == ">":
            return cls(form, Relation.GE, bound + 1)
        if op == "<":
            return cls(form, Relation.LE, bound - 1)
        return cls(form, Relation(op), bound)

    def holds(self, x: Sequence[int]) -> bool:
        value = pairing(self.form, x)
        if self.relation == Relation.GE:
            return value >= self.bound
        if self.relation == Relation.LE:
            return value <= self.bound
        return value == self.bound

    def negated(self) -> list["Constraint"]:
        """
        Integer negation; an equality splits into two half-lines.
        """
        if self.relation == Relation.GE:
            return [Constraint(self.form, Relation.LE, self.bound - 1)]
        if self.relation == Relation.LE:
            return [Constraint(self.form, Relation.GE, self.bound + 1)]
        return [
            Constraint(self.form, Relation.LE, self.bound - 1),
            Constraint(self.form, Relation.GE, self.bound + 1),
        ]

    def shifted(self, t: Sequence[int]) -> "Constraint":
        return Constraint(self.form, self.relation, self.bound + pairing(self.form, t))

    def homogeneous(self) -> "Constraint":
        return Constraint(self.form, self.relation, 0)

    def as_rows(self) -> list[tuple[Vector, int]]:
        """
        Rows (a, b) meaning a.x <= b.
        """
        a = self.form.coefficients
        neg = tuple(-c for c in a)
        if self.relation == Relation.LE:
            return [(a, self.bound)]
        if self.relation == Relation.GE:
            return [(neg, -self.bound)]
        return [(a, self.bound), (neg, -self.bound)]

    def __str__(self) -> str:
        return f"{self.form.name} {self.relation.value} {self.bound}"


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _canonical(c: Constraint) -> tuple[Vector, Optional[int], Optional[int]]:
    """
    Primitive direction of the form (first nonzero coefficient positive)
    with the integer interval it allows.
    """
    coeffs = c.form.coefficients
    g = 0
    for v in coeffs:
        g = gcd(g, v)
    lo, hi = None, None
    if c.relation in (Relation.GE, Relation.EQ):
        lo = c.bound
    if c.relation in (Relation.LE, Relation.EQ):
        hi = c.bound
    if g == 0:
        return coeffs, lo, hi
    sign = 1
    for v in coeffs:
        if v:
            sign = 1 if v > 0 else -1
            break
    g *= sign
    direction = tuple(v // g for v in coeffs)
    if sign < 0:
        lo, hi = (None if hi is None else -hi), (None if lo is None else -lo)
    g = abs(g)
    lo = None if lo is None else _ceil_div(lo, g)
    hi = None if hi is None else hi // g
    return direction, lo, hi


@dataclass(frozen=True)
class ConstraintSet:
    lattice: CocharLattice
    constraints: tuple[Constraint, ...] = field(default_factory=tuple)

    def __post_init__(self):
        for c in self.constraints:
            if c.form.rank != self.lattice.rank:
                raise DimensionMismatch(
                    f"constraint on {c.form.name} has rank {c.form.rank}, lattice has rank {self.lattice.rank}"
                )

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def contains(self, x: Sequence[int]) -> bool:
        if len(x) != self.rank:
            raise DimensionMismatch(f"point {tuple(x)} does not live on a rank {self.rank} lattice")
        return all(c.holds(x) for c in self.constraints)

    def extended(self, constraints: Iterable[Constraint]) -> "ConstraintSet":
        return ConstraintSet(self.lattice, self.constraints + tuple(constraints))

    def conjoin(self, other: "ConstraintSet") -> "ConstraintSet":
        if other.rank != self.rank:
            raise DimensionMismatch(f"cannot intersect rank {self.rank} and rank {other.rank} systems")
        return self.extended(other.constraints)

    def intervals(self) -> Optional[dict[Vector, tuple[Optional[int], Optional[int]]]]:
        """
        Integer interval allowed for each primitive form direction, or None
        if two constraints on the same direction already contradict.
        """
        result: dict[Vector, tuple[Optional[int], Optional[int]]] = {}
        for c in self.constraints:
            direction, lo, hi = _canonical(c)
            if not any(direction):
                if (lo is not None and lo > 0) or (hi is not None and hi < 0):
                    return None
                continue
            old_lo, old_hi = result.get(direction, (None, None))
            if lo is not None and (old_lo is None or lo > old_lo):
                old_lo = lo
            if hi is not None and (old_hi is None or hi < old_hi):
                old_hi = hi
            if old_lo is not None and old_hi is not None and old_lo > old_hi:
                return None
            result[direction] = (old_lo, old_hi)
        return result

    def is_trivially_empty(self) -> bool:
        """
        Cheap syntactic emptiness test (contradicting bounds on one form).
        """
        return self.intervals() is None

    def __str__(self) -> str:
        return " & ".join(str(c) for c in self.constraints) or "true"


@dataclass(frozen=True)
class StdConeId:
    theta_h: frozenset[str]
    sector: Sector

    def label(self, pair: Optional[SphericalPair] = None) -> str:
        names = sorted(self.theta_h)
        if pair is not None:
            names = [n for n in pair.delta_h_names if n in self.theta_h]
        theta = "+".join(names) if names else "empty"
        return theta if self.sector == Sector.NONE else f"{theta}/{self.sector.value}"


@dataclass(frozen=True)
class ConePiece:
    shift: Vector
    body: StdConeId


@dataclass(frozen=True)
class SemilinearFormula:
    """
    Disjunction of constraint systems on one lattice.
    """

    disjuncts: tuple[ConstraintSet, ...]

    def __post_init__(self):
        if not self.disjuncts:
            raise ValueError("a semilinear formula needs at least one disjunct")
        rank = self.disjuncts[0].rank
        if any(d.rank != rank for d in self.disjuncts):
            raise DimensionMismatch("all disjuncts of a formula must share one lattice")

    @property
    def lattice(self) -> CocharLattice:
        return self.disjuncts[0].lattice

    def contains(self, x: Sequence[int]) -> bool:
        return any(d.contains(x) for d in self.disjuncts)


def _zero_form(rank: int) -> LinearForm:
    return LinearForm("0", (0,) * rank)


def contradiction(lattice: CocharLattice) -> ConstraintSet:
    return ConstraintSet(lattice, (Constraint(_zero_form(lattice.rank), Relation.GE, 1),))


def check_cone_id(pair: SphericalPair, cone: StdConeId):
    unknown = set(cone.theta_h) - set(pair.delta_h_names)
    if unknown:
        raise UnknownRoot(f"{', '.join(sorted(unknown))} not in Delta_H of {pair.key}")
    if pair.has_sectors and cone.sector == Sector.NONE:
        raise SectorMismatch(f"{pair.key} has a complement form; choose a sector among plus, zero, minus")
    if not pair.has_sectors and cone.sector != Sector.NONE:
        raise SectorMismatch(f"{pair.key} has no complement form; sector must be none, got {cone.sector.value}")


def _sector_constraint(beta: LinearForm, sector: Sector, strict: bool) -> Constraint:
    if sector == Sector.ZERO:
        return Constraint(beta, Relation.EQ, 0)
    if sector == Sector.PLUS:
        return Constraint.make(beta, ">" if strict else ">=", 0)
    return Constraint.make(beta, "<" if strict else "<=", 0)


def std_cone(pair: SphericalPair, cone: StdConeId) -> ConstraintSet:
    """
    Constraint system of the strict cone T^{--,*}_{Theta_H}.

    :param pair: Spherical pair.
    :param cone: Theta_H and sector.
    :return: Equalities on Theta_H, strict positivity on the other simple
        roots, and the sector condition on the complement form.
    """
    check_cone_id(pair, cone)
    constraints = []
    for alpha in pair.delta_h:
        if alpha.name in cone.theta_h:
            constraints.append(Constraint(alpha, Relation.EQ, 0))
        else:
            constraints.append(Constraint.make(alpha, ">", 0))
    for beta in pair.c_h:
        constraints.append(_sector_constraint(beta, cone.sector, strict=True))
    return ConstraintSet(pair.h_lattice, tuple(constraints))


def closed_cone(pair: SphericalPair, cone: StdConeId) -> ConstraintSet:
    """
    Constraint system of the semigroup T^{-,*}_{Theta_H} (non-strict root conditions).
    """
    check_cone_id(pair, cone)
    constraints = []
    for alpha in pair.delta_h:
        relation = Relation.EQ if alpha.name in cone.theta_h else Relation.GE
        constraints.append(Constraint(alpha, relation, 0))
    for beta in pair.c_h:
        constraints.append(_sector_constraint(beta, cone.sector, strict=True))
    return ConstraintSet(pair.h_lattice, tuple(constraints))


def dominant_decomposition(pair: SphericalPair, cone: StdConeId) -> list[StdConeId]:
    """
    Strict cones whose disjoint union is T^{-,*}_{Theta_H}: one for every
    Theta'_H containing Theta_H.
    """
    check_cone_id(pair, cone)
    free = [n for n in pair.delta_h_names if n not in cone.theta_h]
    result = []
    for mask in range(1 << len(free)):
        extra = {free[i] for i in range(len(free)) if mask >> i & 1}
        result.append(StdConeId(frozenset(cone.theta_h | extra), cone.sector))
    return result


def translate(cs: ConstraintSet, t: Sequence[int]) -> ConstraintSet:
    """
    Translate a constraint system by a lattice point: x is in the result
    iff x - t is in `cs`.
    """
    if len(t) != cs.rank:
        raise DimensionMismatch(f"shift {tuple(t)} does not live on a rank {cs.rank} lattice")
    return ConstraintSet(cs.lattice, tuple(c.shifted(t) for c in cs.constraints))


def difference_formula(cs: ConstraintSet, shifted: ConstraintSet, prune: bool = True) -> SemilinearFormula:
    """
    Disjunctive normal form of `cs` minus `shifted`, in first-violation form.

    The k-th disjunct keeps the first k-1 constraints of `shifted` and
    violates the k-th one, so the disjuncts are pairwise disjoint.

    :param cs: Minuend.
    :param shifted: Subtrahend on the same lattice.
    :param prune: Drop disjuncts with syntactically contradicting bounds.
    :return: Nonempty formula; a single contradiction if every disjunct was dropped.
    """
    if cs.rank != shifted.rank:
        raise DimensionMismatch(f"cannot subtract rank {shifted.rank} system from rank {cs.rank} system")
    disjuncts = []
    kept: list[Constraint] = []
    for c in shifted.constraints:
        for neg in c.negated():
            d = cs.extended(kept + [neg])
            if prune and d.is_trivially_empty():
                continue
            disjuncts.append(d)
        kept.append(c)
    if not disjuncts:
        disjuncts.append(cs.extended(contradiction(cs.lattice).constraints))
    return SemilinearFormula(tuple(disjuncts))


def recession(cs: ConstraintSet) -> ConstraintSet:
    return ConstraintSet(cs.lattice, tuple(c.homogeneous() for c in cs.constraints))


def shift_in_semigroup(pair: SphericalPair, cone: StdConeId, t: Sequence[int]) -> bool:
    """
    Whether a shift lies in T^{-}_{Theta_H} with complement sign zero or
    that of the sector.
    """
    check_cone_id(pair, cone)
    for alpha in pair.delta_h:
        value = pairing(alpha, t)
        if alpha.name in cone.theta_h and value != 0:
            return False
        if value < 0:
            return False
    for beta in pair.c_h:
        value = pairing(beta, t)
        if cone.sector == Sector.ZERO and value != 0:
            return False
        if cone.sector == Sector.PLUS and value < 0:
            return False
        if cone.sector == Sector.MINUS and value > 0:
            return False
    return True


def cone_variables(pair: SphericalPair, cone: StdConeId) -> list[LinearForm]:
    """
    Basis forms that vary on the cone (Delta_H - Theta_H, then the complement form unless the sector is zero).
    """
    check_cone_id(pair, cone)
    forms = [a for a in pair.delta_h if a.name not in cone.theta_h]
    if cone.sector not in (Sector.ZERO, Sector.NONE):
        forms.extend(pair.c_h)
    return forms


__all__ = [
    "Relation",
    "Sector",
    "Constraint",
    "ConstraintSet",
    "StdConeId",
    "ConePiece",
    "SemilinearFormula",
    "std_cone",
    "closed_cone",
    "dominant_decomposition",
    "translate",
    "difference_formula",
    "recession",
    "shift_in_semigroup",
    "cone_variables",
    "contradiction",
    "check_cone_id",
]
