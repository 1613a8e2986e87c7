from typing import Sequence

from core.cones.constraints import (
    ConePiece,
    ConstraintSet,
    SemilinearFormula,
    difference_formula,
    std_cone,
    translate,
)
from core.cones.errors import SearchCapExceeded
from core.cones.feasibility import integer_feasible, rationally_empty
from core.cones.verdicts import FailContainment, FailCover, FailDisjoint, Inconclusive, Pass, Verdict
from core.log import get_logger
from core.roots.datum import SphericalPair

log = get_logger(__name__)


def piece_set(pair: SphericalPair, piece: ConePiece) -> ConstraintSet:
    return translate(std_cone(pair, piece.body), piece.shift)


def remainder(region: ConstraintSet, removed: Sequence[ConstraintSet]) -> list[ConstraintSet]:
    """
    Disjuncts covering `region` minus the union of `removed`.

    Disjuncts whose integer-rounded bounds contradict, or that have no
    rational point, are dropped after each subtraction; the result only
    over-approximates by sets without integer points.
    """
    survivors = [region]
    for cs in removed:
        next_survivors = []
        for s in survivors:
            for d in difference_formula(s, cs).disjuncts:
                if not (d.is_trivially_empty() or rationally_empty(d)):
                    next_survivors.append(d)
        survivors = next_survivors
        if not survivors:
            break
    return survivors


def verify_partition(lhs: SemilinearFormula, pieces: Sequence[ConePiece], pair: SphericalPair) -> Verdict:
    """
    Check that translated cones partition a semilinear set.

    :param lhs: The set to be partitioned.
    :param pieces: Translated standard cones.
    :param pair: Pair the cones belong to.
    :return: Pass, or the first failure with a witness (disjointness, then
        cover, then containment).
    """
    sets = [piece_set(pair, p) for p in pieces]
    try:
        for i in range(len(sets)):
            for j in range(i + 1, len(sets)):
                both = sets[i].conjoin(sets[j])
                if both.is_trivially_empty():
                    continue
                witness = integer_feasible(both)
                if witness is not None:
                    log.debug(f"pieces {i} and {j} overlap at {witness}")
                    return FailDisjoint(witness, i, j)

        for disjunct in lhs.disjuncts:
            for rest in remainder(disjunct, sets):
                witness = integer_feasible(rest)
                if witness is not None:
                    return FailCover(witness)

        for k, cs in enumerate(sets):
            for rest in remainder(cs, lhs.disjuncts):
                witness = integer_feasible(rest)
                if witness is not None:
                    return FailContainment(witness, k)
    except SearchCapExceeded as err:
        return Inconclusive(err.message)
    return Pass()


__all__ = ["verify_partition", "piece_set", "remainder"]
