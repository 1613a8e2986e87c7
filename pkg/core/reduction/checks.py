from dataclasses import dataclass
from typing import Optional

from core.cones.constraints import Sector, StdConeId, difference_formula, std_cone, translate
from core.cones.partition import verify_partition
from core.cones.verdicts import FailMembership, FailTemplate, Pass, Verdict
from core.log import get_logger
from core.reduction.errors import TemplateError
from core.reduction.structures import ReductionStructure, StructureEntry, Triple
from core.reduction.templates import check_piece_shape, instantiate
from core.roots.datum import SphericalPair, pairing, weyl_apply

log = get_logger(__name__)


def check_triple_membership(pair: SphericalPair, cone: StdConeId, triple: Triple) -> Verdict:
    """
    Check that s lies in w^-1 A_Theta^- w, in A^-_{empty_H}, in the closed
    cone of Theta_H with an admissible complement sign, and is not the origin.

    :return: Pass, or FailMembership naming the first violated condition (a)-(d).
    """
    unknown = set(triple.theta) - {a.name for a in pair.delta_g}
    if unknown:
        return FailMembership("a", f"{', '.join(sorted(unknown))} not in Delta_G")
    if len(triple.s) != pair.h_lattice.rank:
        return FailMembership("a", f"shift {triple.s} is not on the H-lattice")

    y = weyl_apply(triple.w, pair.embed_point(triple.s))
    for alpha in pair.delta_g:
        value = pairing(alpha, y)
        if alpha.name in triple.theta and value != 0:
            return FailMembership("a", f"<{alpha.name}, w.s> = {value}, expected 0 on Theta")
        if value < 0:
            return FailMembership("a", f"<{alpha.name}, w.s> = {value} is negative")

    for alpha in pair.delta_h:
        value = pairing(alpha, triple.s)
        if value < 0:
            return FailMembership("b", f"<{alpha.name}, s> = {value} is negative")

    for alpha in pair.delta_h:
        if alpha.name in cone.theta_h and pairing(alpha, triple.s) != 0:
            return FailMembership("c", f"<{alpha.name}, s> = {pairing(alpha, triple.s)} on Theta_H")
    for beta in pair.c_h:
        value = pairing(beta, triple.s)
        allowed = {Sector.PLUS: value >= 0, Sector.MINUS: value <= 0}.get(cone.sector, value == 0)
        if not allowed:
            return FailMembership("c", f"<{beta.name}, s> = {value} in sector {cone.sector.value}")

    if not any(triple.s):
        return FailMembership("d", "shift is the origin")
    return Pass()


@dataclass(frozen=True)
class F1Result:
    index: int
    n: int
    verdict: Verdict
    pieces: int = 0


def check_entry(pair: SphericalPair, cone: StdConeId, entry: StructureEntry, n: int) -> tuple[Verdict, int]:
    """
    Check (F1) for one triple and one power of its shift.

    :return: The verdict and the number of pieces instantiated.
    """
    s = entry.triple.s
    try:
        pieces = instantiate(pair, cone, s, entry.template, n)
    except TemplateError as err:
        return FailTemplate(err.message), 0
    for k, piece in enumerate(pieces):
        problem = check_piece_shape(pair, cone, piece)
        if problem:
            return FailTemplate(f"piece {k}: {problem}"), len(pieces)

    base = std_cone(pair, cone)
    shifted = translate(base, tuple(n * c for c in s))
    lhs = difference_formula(base, shifted)
    return verify_partition(lhs, pieces, pair), len(pieces)


def check_F1(structure: ReductionStructure, n_max: int, stop_early: bool = True) -> list[F1Result]:
    """
    Check (F1) for every triple and every n in 1..n_max.

    :param structure: Reduction structure.
    :param n_max: Largest shift power tested.
    :param stop_early: Stop at the first non-passing result; otherwise move on to
        the next triple.
    :return: One result per (triple, n) checked.
    """
    results = []
    for index, entry in enumerate(structure.entries):
        for n in range(1, n_max + 1):
            verdict, count = check_entry(structure.pair, structure.cone, entry, n)
            results.append(F1Result(index, n, verdict, count))
            if not verdict.passed:
                log.debug(f"{structure.key}: triple {index} fails (F1) at n={n}: {verdict.describe()}")
                if stop_early:
                    return results
                break
    return results


def first_failure(results: list[F1Result]) -> Optional[F1Result]:
    for r in results:
        if r.verdict.status == "fail":
            return r
    for r in results:
        if not r.verdict.passed:
            return r
    return None


__all__ = ["check_triple_membership", "check_entry", "check_F1", "F1Result", "first_failure"]
