import pytest

from core.roots.catalog import build_catalog_pair, catalog_pairs, parse_pair_id
from core.roots.datum import modulus_exponents, pairing, weyl_apply
from core.roots.errors import DimensionMismatch, UnknownPair, UnsupportedRank


@pytest.mark.parametrize(
    ("text", "expected"),
    [
        ("triple", ("triple", {})),
        ("gl4gl2", ("gl4gl2", {})),
        ("gl2", ("gl", {"n": 2})),
        ("GL(3)", ("gl", {"n": 3})),
        ("so(n=4)", ("so", {"n": 4})),
        (" waldspurger ", ("waldspurger", {})),
    ],
)
def test_parse_pair_id(text, expected):
    assert parse_pair_id(text) == expected


@pytest.mark.parametrize("text", ["gl", "sl2", "triple3", ""])
def test_parse_pair_id_unknown(text):
    with pytest.raises(UnknownPair):
        parse_pair_id(text)


@pytest.mark.parametrize(
    ("name", "params", "error"),
    [
        ("sl", {}, UnknownPair),
        ("gl", {"n": 4}, UnsupportedRank),
        ("gl", {}, UnsupportedRank),
        ("so", {"n": 5}, UnsupportedRank),
        ("triple", {"n": 2}, UnsupportedRank),
    ],
)
def test_build_catalog_pair_errors(name, params, error):
    with pytest.raises(error):
        build_catalog_pair(name, params)


def test_triple_pair():
    pair = build_catalog_pair("triple")

    assert pair.h_lattice.rank == 1
    assert pair.delta_h_names == ("a",)
    assert pair.c_h == ()
    assert pair.n_exp_map == {"a": 1}
    assert not pair.has_sectors


def test_waldspurger_pair():
    pair = build_catalog_pair("waldspurger")

    assert pair.h_lattice.rank == 1
    assert pair.delta_h == ()
    assert [f.name for f in pair.c_h] == ["c"]
    assert pair.c_h[0].coefficients == (1,)
    assert pair.g_lattice.rank == 1
    assert {w.name for w in pair.weyl} == {"e", "w"}


def test_gl2_pair():
    pair = build_catalog_pair("gl", {"n": 2})

    assert pair.key == "gl2"
    assert pair.embed_point((3, 5)) == (3, 5, 0, 3, 5)
    assert pair.delta_h_names == ("a1",)
    assert pair.c_h[0].coefficients == (0, 1)
    assert pair.n_exp_map == {"a1": 1}


def test_gl3_modulus_exponents():
    pair = build_catalog_pair("gl", {"n": 3})
    assert pair.n_exp_map == {"a1": 2, "a2": 2}


@pytest.mark.parametrize("pair", catalog_pairs(), ids=lambda p: p.key)
def test_modulus_exponents_match_stored(pair):
    assert modulus_exponents(pair) == pair.n_exp_map


@pytest.mark.parametrize("pair", catalog_pairs(), ids=lambda p: p.key)
def test_weyl_elements_invert(pair):
    x = tuple(range(1, pair.g_lattice.rank + 1))
    for w in pair.weyl:
        assert weyl_apply(w.inverse(), weyl_apply(w, x)) == x


def test_sp6sp4_w3_rotates_sp6_coordinates():
    pair = build_catalog_pair("sp6sp4")
    w3 = pair.weyl_element("w3")

    assert weyl_apply(w3, (1, 2, 3, 4, 5)) == (2, 3, 1, 4, 5)


def test_identity_weyl_element():
    pair = build_catalog_pair("gl4gl2")
    x = (1, -2, 3, 0, 7)

    assert weyl_apply(pair.weyl_element("e"), x) == x


def test_pairing():
    pair = build_catalog_pair("triple")
    alpha = pair.delta_h[0]

    assert pairing(alpha, (3,)) == 3
    assert alpha((0,)) == 0
    with pytest.raises(DimensionMismatch):
        pairing(alpha, (1, 2))


def test_unknown_names():
    pair = build_catalog_pair("triple")
    with pytest.raises(KeyError):
        pair.weyl_element("w9")
    with pytest.raises(KeyError):
        pair.h_form("b")
