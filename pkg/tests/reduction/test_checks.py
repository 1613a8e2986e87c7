from dataclasses import replace

import pytest

from core.cones.constraints import Sector, StdConeId
from core.cones.verdicts import FailCover, FailFinite, FailMembership, FailMinimal, FailTemplate, Pass
from core.reduction.catalog import lookup
from core.reduction.checks import check_entry, check_F1, check_triple_membership, first_failure
from core.reduction.errors import EmptyStructure
from core.reduction.finiteness import box_sizes, check_F2, check_minimality
from core.reduction.structures import F1Template, FixedPiece, ReductionStructure, StructureEntry, Triple
from core.roots.catalog import build_catalog_pair

EMPTY = StdConeId(frozenset(), Sector.NONE)
FULL = StdConeId(frozenset({"a"}), Sector.NONE)


@pytest.fixture
def triple():
    return build_catalog_pair("triple")


@pytest.fixture
def wal():
    return build_catalog_pair("waldspurger")


def test_triple_membership(triple):
    t = Triple(frozenset(), triple.weyl_element("e"), (1,))
    assert check_triple_membership(triple, EMPTY, t) == Pass()


@pytest.mark.parametrize(
    ("w", "s", "condition"),
    [
        ("w", (-1,), None),
        ("e", (-1,), "a"),
        ("w", (1,), "a"),
    ],
)
def test_waldspurger_membership(wal, w, s, condition):
    t = Triple(frozenset(), wal.weyl_element(w), s)
    verdict = check_triple_membership(wal, StdConeId(frozenset(), Sector.MINUS), t)

    if condition is None:
        assert verdict == Pass()
    else:
        assert isinstance(verdict, FailMembership)
        assert verdict.condition == condition


def test_membership_rejects_origin(triple):
    t = Triple(frozenset(), triple.weyl_element("e"), (0,))
    verdict = check_triple_membership(triple, EMPTY, t)

    assert verdict == FailMembership("d", "shift is the origin")


def test_membership_checks_theta_h(triple):
    t = Triple(frozenset(), triple.weyl_element("e"), (1,))
    verdict = check_triple_membership(triple, FULL, t)

    assert isinstance(verdict, FailMembership)
    assert verdict.condition == "c"


def test_membership_unknown_root(triple):
    t = Triple(frozenset({"Z"}), triple.weyl_element("e"), (1,))
    assert check_triple_membership(triple, EMPTY, t).condition == "a"


def test_triple_f1_family():
    structure = lookup("triple/empty")
    for n in (1, 2, 3):
        verdict, count = check_entry(structure.pair, structure.cone, structure.entries[0], n)
        assert verdict == Pass()
        assert count == n


def test_waldspurger_minus_f1_family():
    structure = lookup("wal/minus")
    verdict, count = check_entry(structure.pair, structure.cone, structure.entries[0], 2)

    assert verdict == Pass()
    assert count == 2


def test_step_doubled_family_fails_cover(triple):
    structure = lookup("triple/empty")
    s = structure.entries[0].triple.s
    broken = F1Template.family((0,), tuple(2 * c for c in s), FULL)
    mutated = replace(structure, entries=(StructureEntry(structure.entries[0].triple, broken),))

    results = check_F1(mutated, 3)
    failed = first_failure(results)
    assert failed is not None
    assert isinstance(failed.verdict, FailCover)
    assert mutated.pair.delta_h[0](failed.verdict.witness) == 1


def test_template_shape_is_checked(triple):
    structure = lookup("triple/empty")
    bad = F1Template((FixedPiece((1,), EMPTY),))
    verdict, _ = check_entry(triple, EMPTY, StructureEntry(structure.entries[0].triple, bad), 1)

    assert isinstance(verdict, FailTemplate)


def test_check_f1_stops_early():
    structure = lookup("triple/empty")
    s = structure.entries[0].triple.s
    broken = F1Template.family((0,), tuple(2 * c for c in s), FULL)
    mutated = replace(structure, entries=(StructureEntry(structure.entries[0].triple, broken),) * 2)

    assert len(check_F1(mutated, 3, stop_early=True)) == 1
    assert len(check_F1(mutated, 3, stop_early=False)) == 2


def test_triple_f2():
    assert check_F2(lookup("triple/empty"), [1], [12, 24]) == Pass()


def test_empty_structure_on_infinite_cone(wal):
    structure = ReductionStructure(wal, StdConeId(frozenset(), Sector.PLUS), (), "wal/plus-empty")
    verdict = check_F2(structure, [1], [12, 24])

    assert isinstance(verdict, FailFinite)
    assert wal.c_h[0](verdict.direction) > 0


def test_empty_structure_on_finite_cone():
    assert check_F2(lookup("aniso"), [1, 3], [12, 24]) == Pass()
    with pytest.raises(EmptyStructure):
        check_minimality(lookup("aniso"))


def test_singleton_is_minimal():
    assert check_minimality(lookup("wal/plus"), [1, 3], [12, 24]) == Pass()


@pytest.mark.parametrize(
    ("given", "expected"),
    [
        ([12], [12, 24]),
        ([24, 12, 24], [12, 24]),
        ([5, 10, 20], [5, 10, 20]),
    ],
)
def test_box_sizes(given, expected):
    assert box_sizes(given) == expected


def test_single_box_cross_check():
    assert check_F2(lookup("triple/empty"), [1], [12]) == Pass()
    assert check_minimality(lookup("triple/empty"), [1], [12]) == Pass()
    assert check_minimality(lookup("wal/plus"), [1], [12]) == Pass()


def test_padded_structure_is_not_minimal(triple):
    structure = lookup("triple/empty")
    entry = structure.entries[0]
    extra = StructureEntry(Triple(frozenset(), triple.weyl_element("e"), (2,)), entry.template)
    padded = structure.with_entry(extra)

    assert check_F2(padded, [1], [12, 24]) == Pass()
    verdict = check_minimality(padded, [1], [12, 24])
    assert isinstance(verdict, FailMinimal)
    assert verdict.index == 0
