import pytest

from core.cones.constraints import Sector, StdConeId
from core.reduction.catalog import ALPHA0_NOTE, DERIVED_NOTE, W3142_NOTE, catalog, find_structure, lookup
from core.reduction.errors import UnknownStructure
from core.reduction.templates import derive_pieces, instantiate
from core.roots.catalog import build_catalog_pair


def test_catalog_keys_are_unique():
    keys = [s.key for s in catalog()]
    assert len(keys) == len(set(keys))


@pytest.mark.parametrize(
    "key",
    [
        "triple/empty",
        "triple/full",
        "wal/plus",
        "wal/zero",
        "wal/minus",
        "aniso",
        "gl/n2/empty/minus",
        "gl/n3/full/plus",
        "so/n3/empty",
        "so/n4/a2",
        "table1/full/zero",
        "table2/empty",
        "table3/empty",
        "table3/b1+b2",
    ],
)
def test_lookup(key):
    assert lookup(key).key == key


def test_lookup_unknown():
    with pytest.raises(UnknownStructure):
        lookup("table4/empty")


def test_table1_row():
    structure = lookup("table1/a1/plus")
    labels = [t.label(structure.pair) for t in structure.triples]

    assert len(labels) == 2
    assert any(label.startswith("(Delta_G-{B2}; w1234;") for label in labels)


def test_table3_full_root_row():
    structure = lookup("table3/b1+b2")
    labels = [t.label(structure.pair) for t in structure.triples]

    assert len(labels) == 1
    assert labels[0].startswith("(Delta_G-{G1}; e;")


def test_gl2_minus_sector_row():
    structure = lookup("gl/n2/empty/minus")
    labels = [t.label(structure.pair) for t in structure.triples]

    assert any(label.startswith("(Delta_G-{B1}; w1;") for label in labels)
    assert ALPHA0_NOTE in structure.notes


def test_table3_empty_row_has_nine_triples():
    assert len(lookup("table3/empty").triples) == 9


def test_notes():
    assert W3142_NOTE in lookup("table2/empty").notes
    assert DERIVED_NOTE in lookup("wal/plus").notes
    assert DERIVED_NOTE not in lookup("triple/empty").notes


def test_find_structure():
    pair = build_catalog_pair("waldspurger")

    assert find_structure(pair, frozenset(), Sector.MINUS).key == "wal/minus"
    with pytest.raises(UnknownStructure):
        find_structure(pair, frozenset({"a"}), Sector.MINUS)


@pytest.mark.parametrize("structure", catalog(), ids=lambda s: s.key)
def test_every_cone_has_one_structure(structure):
    pair = structure.pair
    same = [s for s in catalog() if s.pair == pair and s.cone == structure.cone]
    assert same == [structure]


def test_cone_ids_in_catalog_cover_pairs():
    pair = build_catalog_pair("gl", {"n": 2})
    cones = {s.cone for s in catalog() if s.pair == pair}

    assert StdConeId(frozenset(), Sector.ZERO) in cones
    assert StdConeId(frozenset({"a1"}), Sector.MINUS) in cones
    assert len(cones) == 6


@pytest.mark.parametrize("key", ["triple/empty", "wal/minus"])
@pytest.mark.parametrize("n", [1, 2, 4])
def test_stored_templates_agree_with_derived_pieces(key, n):
    structure = lookup(key)
    entry = structure.entries[0]

    assert not entry.template.derived
    stored = instantiate(structure.pair, structure.cone, entry.triple.s, entry.template, n)
    derived = derive_pieces(structure.pair, structure.cone, entry.triple.s, n)
    assert sorted(stored, key=repr) == sorted(derived, key=repr)
