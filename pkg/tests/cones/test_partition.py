import pytest

from core.cones.constraints import (
    ConePiece,
    Constraint,
    ConstraintSet,
    Relation,
    Sector,
    SemilinearFormula,
    StdConeId,
    difference_formula,
    std_cone,
    translate,
)
from core.cones.feasibility import enumerate_box
from core.cones.partition import piece_set, remainder, verify_partition
from core.cones.verdicts import FailContainment, FailCover, FailDisjoint, Pass
from core.roots.catalog import build_catalog_pair

ORIGIN = StdConeId(frozenset({"a"}), Sector.NONE)


@pytest.fixture
def triple():
    return build_catalog_pair("triple")


def interval(pair, lo, hi):
    alpha = pair.delta_h[0]
    cs = ConstraintSet(pair.h_lattice, (Constraint(alpha, Relation.GE, lo), Constraint(alpha, Relation.LE, hi)))
    return SemilinearFormula((cs,))


def pieces(*shifts):
    return [ConePiece((s,), ORIGIN) for s in shifts]


def test_partition_passes(triple):
    assert verify_partition(interval(triple, 1, 3), pieces(1, 2, 3), triple) == Pass()


def test_missing_piece(triple):
    verdict = verify_partition(interval(triple, 1, 3), pieces(1, 2), triple)

    assert verdict == FailCover((3,))
    assert verdict.status == "fail"
    assert verdict.to_dict()["witness"] == [3]


def test_duplicate_piece(triple):
    verdict = verify_partition(interval(triple, 1, 3), pieces(1, 1, 2, 3), triple)
    assert verdict == FailDisjoint((1,), 0, 1)


def test_piece_outside_region(triple):
    verdict = verify_partition(interval(triple, 1, 3), pieces(1, 2, 3, 4), triple)
    assert verdict == FailContainment((4,), 3)


def test_triple_difference_partition(triple):
    cone = std_cone(triple, StdConeId(frozenset(), Sector.NONE))
    for n in range(1, 5):
        lhs = difference_formula(cone, translate(cone, (n,)))
        assert verify_partition(lhs, pieces(*range(1, n + 1)), triple) == Pass()


def test_partition_soundness_on_boxes():
    pair = build_catalog_pair("waldspurger")
    minus = StdConeId(frozenset(), Sector.MINUS)
    zero = StdConeId(frozenset(), Sector.ZERO)
    cone = std_cone(pair, minus)
    lhs = difference_formula(cone, translate(cone, (-2,)))
    parts = [ConePiece((-1,), zero), ConePiece((-2,), zero)]

    assert verify_partition(lhs, parts, pair) == Pass()
    for B in (6, 12):
        for x in enumerate_box(cone, B):
            hits = sum(piece_set(pair, p).contains(x) for p in parts)
            assert hits == (1 if lhs.contains(x) else 0)


def test_remainder(triple):
    region = interval(triple, 1, 5).disjuncts[0]
    removed = [piece_set(triple, p) for p in pieces(1, 2, 3)]

    rest = remainder(region, removed)
    points = sorted({x for cs in rest for x in enumerate_box(cs, 10)})
    assert points == [(4,), (5,)]
