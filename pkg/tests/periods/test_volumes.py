from fractions import Fraction

import pytest

from core.cones.constraints import Sector, StdConeId
from core.periods.errors import InvalidVolume, NotInCone
from core.periods.volumes import (
    VolumeConfig,
    cartan_volume,
    cone_of,
    default_volumes,
    ray_generators,
    temperedness_margin,
)
from core.roots.catalog import build_catalog_pair
from core.series.coefficients import ExpPolyCoefficient, ToyModule
from core.series.rings import FAMILY_RING

EMPTY = frozenset()


@pytest.fixture
def triple():
    return build_catalog_pair("triple")


def test_cartan_volume(triple):
    cfg = VolumeConfig(Fraction(5), {EMPTY: Fraction(6, 5)})
    assert cartan_volume(triple, EMPTY, (2,), cfg) == 30


@pytest.mark.parametrize("q", [2, 3, 5])
@pytest.mark.parametrize("a", [1, 2, 4])
def test_gl2_cell_volumes(triple, q, a):
    cfg = default_volumes(triple, Fraction(q))
    assert cartan_volume(triple, EMPTY, (a,), cfg) == (1 + Fraction(1, q)) * q**a


def test_origin_cell(triple):
    cfg = default_volumes(triple, Fraction(3))

    assert cartan_volume(triple, frozenset({"a"}), (0,), cfg) == 1
    with pytest.raises(NotInCone):
        cartan_volume(triple, EMPTY, (0,), cfg)
    with pytest.raises(NotInCone):
        cartan_volume(triple, EMPTY, (-1,), cfg)


def test_invalid_volume_config():
    with pytest.raises(InvalidVolume):
        VolumeConfig(Fraction(1))
    with pytest.raises(InvalidVolume):
        VolumeConfig(Fraction(3), {EMPTY: Fraction(0)})


def test_default_volumes():
    assert default_volumes(build_catalog_pair("gl", {"n": 2}), Fraction(2)).constant(EMPTY) == Fraction(3, 2)
    assert default_volumes(build_catalog_pair("waldspurger"), Fraction(2)).constant(EMPTY) == 1


def test_cone_of():
    wal = build_catalog_pair("waldspurger")

    assert cone_of(wal, (3,)) == StdConeId(EMPTY, Sector.PLUS)
    assert cone_of(wal, (0,)) == StdConeId(EMPTY, Sector.ZERO)
    assert cone_of(wal, (-2,)) == StdConeId(EMPTY, Sector.MINUS)


def test_ray_generators(triple):
    wal = build_catalog_pair("waldspurger")

    assert ray_generators(triple, StdConeId(EMPTY, Sector.NONE)) == [(1,)]
    assert ray_generators(triple, StdConeId(frozenset({"a"}), Sector.NONE)) == []
    assert ray_generators(wal, StdConeId(EMPTY, Sector.MINUS)) == [(-1,)]


@pytest.mark.parametrize(
    ("lam", "expected"),
    [
        ("1/5", Fraction(2, 5)),
        ("1/2", None),
        ("1", None),
        ("-1/6", Fraction(1, 2)),
    ],
)
def test_temperedness_margin(triple, lam, expected):
    module = ToyModule(triple, ExpPolyCoefficient.exponential([lam]))
    assert temperedness_margin(module, Fraction(3)) == expected


def test_margin_of_point_pair():
    aniso = build_catalog_pair("aniso")
    module = ToyModule(aniso, ExpPolyCoefficient.constant(1, 0))

    assert temperedness_margin(module, Fraction(3)) == 1


def test_margin_needs_rational_module(triple):
    module = ToyModule(triple, ExpPolyCoefficient.exponential(["u/10"], ring=FAMILY_RING))
    with pytest.raises(InvalidVolume):
        temperedness_margin(module, Fraction(3))
