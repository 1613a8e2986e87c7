"""
Condition (F2): finiteness of the set of cone points that every triple keeps
"in range", and minimality of the structure with respect to it.

For a triple (Theta, w, s) and a point x of the cone write
f_alpha(x) = <alpha, w.embed(x)>. With epsilon = q^-M the triple's condition
is

    (some alpha in Theta has f_alpha(x) <= -1) or (some alpha in Delta_G - Theta has f_alpha(x) <= M)

since a violated dominance inequality outside Theta is already bounded by M.

Stage 1 decides finiteness for every M at once. The set is infinite for
large M iff some extreme ray d of the closed cone admits, for every triple,
either a bounded form with f(d) <= 0, a Theta form with f(d) < 0, or a Theta
form with f(d) = 0 whose "<= -1" condition can be met together with the
others at an integer point of the cone. Candidate rays are the
one-dimensional kernels of rank-1 subsets of all forms involved.

Stage 2 counts points of the concrete sets in growing boxes and must agree.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Optional, Sequence

from sympy import Matrix as SympyMatrix

from core.cones.constraints import Constraint, ConstraintSet, Relation, recession, std_cone
from core.cones.errors import SearchCapExceeded
from core.cones.feasibility import enumerate_box, integer_feasible, is_finite, rationally_empty
from core.cones.verdicts import FailFinite, FailMinimal, Inconclusive, Pass, Verdict
from core.log import get_logger
from core.reduction.errors import EmptyStructure
from core.reduction.structures import ReductionStructure
from core.roots.datum import LinearForm, pairing
from core.roots.groups import Vector

log = get_logger(__name__)

DEFAULT_M = (1, 3)
DEFAULT_B = (12, 24)

FREE = "free"
BLOCKED = "blocked"


@dataclass(frozen=True)
class _TripleForms:
    witness: tuple[LinearForm, ...]
    bounded: tuple[LinearForm, ...]


@dataclass(frozen=True)
class Certificate:
    """
    Points base + k * direction (k >= 0) lie in the (F2) set once M >= `m`.
    """

    direction: Vector
    base: Vector
    m: int


def _primitive(v: Sequence[Fraction]) -> Vector:
    den = 1
    for a in v:
        den = lcm(den, Fraction(a).denominator)
    ints = [int(Fraction(a) * den) for a in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    return tuple(a // g for a in ints) if g else tuple(ints)


def _forms_of(structure: ReductionStructure) -> list[_TripleForms]:
    pair = structure.pair
    result = []
    for t in structure.triples:
        witness = tuple(pair.pullback(a, t.w) for a in pair.delta_g if a.name in t.theta)
        bounded = tuple(pair.pullback(a, t.w) for a in pair.delta_g if a.name not in t.theta)
        result.append(_TripleForms(witness, bounded))
    return result


class F2Analysis:
    """
    Direction analysis of the (F2) set of a structure and of its subsets.

    Subsets are bitmasks over the structure's entries; per-ray statuses are
    computed once and shared by every subset.
    """

    def __init__(self, structure: ReductionStructure):
        self.structure = structure
        self.pair = structure.pair
        self.cone = std_cone(structure.pair, structure.cone)
        self.forms = _forms_of(structure)
        self.rays = self._candidate_rays()
        self.status = [[self._triple_status(tf, d) for tf in self.forms] for d in self.rays]
        self._solved: dict[frozenset, Optional[Vector]] = {}
        self.cone_point = integer_feasible(self.cone)

    @property
    def size(self) -> int:
        return len(self.forms)

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def _candidate_rays(self) -> list[Vector]:
        rank = self.pair.h_lattice.rank
        if rank == 0:
            return []
        closed = recession(self.cone)
        if rank == 1:
            candidates = [(1,), (-1,)]
        else:
            coeffs = {f.coefficients for f in self.pair.basis_forms}
            for tf in self.forms:
                coeffs.update(f.coefficients for f in tf.witness + tf.bounded)
            rows = sorted({_primitive([Fraction(c) for c in v]) for v in coeffs if any(v)})
            found = set()
            for subset in combinations(rows, rank - 1):
                kernel = SympyMatrix([list(r) for r in subset]).nullspace()
                if len(kernel) != 1:
                    continue
                d = _primitive([Fraction(str(c)) for c in kernel[0]])
                found.add(d)
                found.add(tuple(-c for c in d))
            candidates = sorted(found)
        return [d for d in candidates if any(d) and closed.contains(d)]

    @staticmethod
    def _triple_status(tf: _TripleForms, d: Vector):
        if any(pairing(f, d) <= 0 for f in tf.bounded):
            return FREE
        values = [(f, pairing(f, d)) for f in tf.witness]
        if any(v < 0 for _, v in values):
            return FREE
        zero = frozenset(Constraint(f, Relation.LE, -1) for f, v in values if v == 0)
        return zero or BLOCKED

    def _solve(self, options: frozenset) -> Optional[Vector]:
        """
        An integer point of the cone meeting one constraint of every option set.
        """
        if options in self._solved:
            return self._solved[options]
        # an option set containing another one is implied by it
        kept = [z for z in options if not any(other < z for other in options)]
        result = self._search(self.cone, sorted(kept, key=len))
        self._solved[options] = result
        return result

    def _search(self, cs: ConstraintSet, pending: list[frozenset]) -> Optional[Vector]:
        x = integer_feasible(cs)
        if x is None:
            return None
        unmet = [z for z in pending if not any(c.holds(x) for c in z)]
        if not unmet:
            return x
        first = unmet[0]
        rest = [z for z in pending if z is not first]
        for c in sorted(first, key=lambda c: c.form.name):
            narrowed = cs.extended([c])
            if narrowed.is_trivially_empty() or rationally_empty(narrowed):
                continue
            found = self._search(narrowed, rest)
            if found is not None:
                return found
        return None

    def certificate(self, mask: int) -> Optional[Certificate]:
        """
        Witness that the (F2) set of the subset `mask` is infinite, or None if
        it is finite for every M.

        :raises SearchCapExceeded: If an integer search could not decide.
        """
        if self.cone_point is None:
            return None
        members = [k for k in range(self.size) if mask >> k & 1]
        for r, d in enumerate(self.rays):
            status = [self.status[r][k] for k in members]
            if BLOCKED in status:
                continue
            options = frozenset(s for s in status if s != FREE)
            base = self._solve(options)
            if base is None:
                continue
            return Certificate(d, base, self._needed_m(members, d, base))
        return None

    def _needed_m(self, members: list[int], d: Vector, base: Vector) -> int:
        m = 0
        for k in members:
            tf = self.forms[k]
            if any(pairing(f, base) <= -1 and pairing(f, d) <= 0 for f in tf.witness):
                continue
            options = [pairing(f, base) for f in tf.bounded if pairing(f, d) <= 0]
            if options:
                m = max(m, min(options))
        return m


class F2Enumeration:
    """
    Points of the cone in a box with, per M, the bitmask of triples whose
    condition they satisfy.
    """

    def __init__(self, analysis: F2Analysis, B_max: int):
        self.analysis = analysis
        self.points = enumerate_box(analysis.cone, B_max)
        self.sizes = [max((abs(c) for c in x), default=0) for x in self.points]
        self._masks: dict[int, list[int]] = {}

    def masks(self, M: int) -> list[int]:
        if M not in self._masks:
            self._masks[M] = [self._mask(x, M) for x in self.points]
        return self._masks[M]

    def _mask(self, x: Vector, M: int) -> int:
        mask = 0
        for k, tf in enumerate(self.analysis.forms):
            if any(pairing(f, x) <= -1 for f in tf.witness) or any(pairing(f, x) <= M for f in tf.bounded):
                mask |= 1 << k
        return mask

    def members(self, subset: int, M: int, B: int) -> list[Vector]:
        masks = self.masks(M)
        return [x for x, m, size in zip(self.points, masks, self.sizes) if size <= B and m & subset == subset]

    def count(self, subset: int, M: int, B: int) -> int:
        return len(self.members(subset, M, B))


def box_sizes(B_list: Sequence[int]) -> list[int]:
    """
    Sorted box sizes for Stage 2; a single box B is compared with 2B.
    """
    bs = sorted(set(B_list))
    if len(bs) == 1:
        bs.append(2 * bs[0])
    return bs


def _stage2(enum: F2Enumeration, subset: int, infinite: bool, M_list: Sequence[int], B_list: Sequence[int]):
    """
    Diagnostic string when the box counts contradict Stage 1, else None.
    """
    bs = box_sizes(B_list)
    counts = {M: [enum.count(subset, M, B) for B in bs] for M in M_list}
    if infinite:
        if any(c[-1] > c[0] for c in counts.values()):
            return None
        return f"direction analysis says infinite, box counts {counts} for B={bs} do not grow"
    if all(len(set(c)) == 1 for c in counts.values()):
        return None
    return f"direction analysis says finite, box counts {counts} for B={bs} keep growing"


def _decide(analysis: F2Analysis, mask: int, enum: Optional[F2Enumeration], M_list, B_list):
    cert = analysis.certificate(mask)
    if enum is not None:
        ms = sorted(set(M_list) | ({cert.m} if cert is not None else set()))
        problem = _stage2(enum, mask, cert is not None, ms, B_list)
        if problem:
            return cert, problem
    return cert, None


def check_F2(
    structure: ReductionStructure,
    M_list: Sequence[int] = DEFAULT_M,
    B_list: Sequence[int] = DEFAULT_B,
    analysis: Optional[F2Analysis] = None,
    enumeration: Optional[F2Enumeration] = None,
) -> Verdict:
    """
    Check that the (F2) set of the full structure is finite for every M.

    :param structure: Reduction structure.
    :param M_list: Bounds M (epsilon = q^-M) used by the enumeration cross-check.
    :param B_list: Box sizes of the enumeration cross-check; empty skips Stage 2.
    :return: Pass, FailFinite with a ray, or Inconclusive when the stages
        disagree or a search ran out of budget.
    """
    if not structure.entries:
        cs = std_cone(structure.pair, structure.cone)
        try:
            if is_finite(cs):
                return Pass()
            analysis = analysis or F2Analysis(structure)
            cert = analysis.certificate(0)
        except SearchCapExceeded as err:
            return Inconclusive(err.message)
        if cert is None:
            return Inconclusive("cone is infinite but no ray certificate was found")
        return FailFinite(cert.direction, cert.base)

    try:
        analysis = analysis or F2Analysis(structure)
        if enumeration is None and B_list:
            enumeration = F2Enumeration(analysis, max(box_sizes(B_list)))
        cert, problem = _decide(analysis, analysis.full, enumeration, M_list, B_list)
    except SearchCapExceeded as err:
        return Inconclusive(err.message)
    if problem:
        log.warning(f"(F2) stages disagree on {structure.key}: {problem}")
        return Inconclusive(problem)
    if cert is not None:
        return FailFinite(cert.direction, cert.base)
    return Pass()


def check_minimality(
    structure: ReductionStructure,
    M_list: Sequence[int] = DEFAULT_M,
    B_list: Sequence[int] = DEFAULT_B,
    analysis: Optional[F2Analysis] = None,
    enumeration: Optional[F2Enumeration] = None,
    deletions: Optional[Sequence[Sequence[int]]] = None,
) -> Verdict:
    """
    Check that deleting any single triple makes the (F2) set infinite.

    Deleting more triples only enlarges the set, so single deletions suffice.

    :param deletions: Index sets to delete instead of every single triple.
    :raises EmptyStructure: If the structure has no triples.
    """
    if not structure.entries:
        raise EmptyStructure(f"{structure.key} has no triples to delete")
    try:
        analysis = analysis or F2Analysis(structure)
        if enumeration is None and B_list:
            enumeration = F2Enumeration(analysis, max(box_sizes(B_list)))
        for drop in deletions or [[k] for k in range(analysis.size)]:
            mask = analysis.full
            for k in drop:
                mask &= ~(1 << k)
            cert, problem = _decide(analysis, mask, enumeration, M_list, B_list)
            if problem:
                return Inconclusive(f"without {list(drop)}: {problem}")
            if cert is None:
                k = drop[0]
                return FailMinimal(k, structure.triples[k].label(structure.pair))
    except SearchCapExceeded as err:
        return Inconclusive(err.message)
    return Pass()


__all__ = [
    "check_F2",
    "check_minimality",
    "F2Analysis",
    "F2Enumeration",
    "Certificate",
    "DEFAULT_M",
    "DEFAULT_B",
    "box_sizes",
]
