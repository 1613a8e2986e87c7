from fractions import Fraction

import pytest

from core.cones.constraints import Sector
from core.periods.assembly import assemble_period, brute_force_period
from core.periods.errors import PeriodError
from core.periods.evaluation import Pole, Value
from core.periods.volumes import default_volumes
from core.roots.catalog import build_catalog_pair
from core.series.coefficients import ExpPolyCoefficient, ToyModule
from core.series.rings import FAMILY_RING, QQ_RING, EvalPoint


@pytest.fixture
def triple():
    return build_catalog_pair("triple")


@pytest.mark.parametrize(("lam", "q"), [(Fraction(1, 5), 3), (Fraction(1, 7), 5), (Fraction(-1, 3), 2)])
def test_triple_period(triple, lam, q):
    module = ToyModule(triple, ExpPolyCoefficient.exponential([lam]))
    cfg = default_volumes(triple, Fraction(q))
    breakdown = assemble_period(module, cfg)
    expected = 1 + (1 + Fraction(1, q)) * lam * q / (1 - lam * q)

    assert breakdown.result == Value(expected)
    assert [s.label for s in breakdown.summands] == ["a", "empty"]
    assert abs(brute_force_period(module, cfg, 200) - expected) < Fraction(1, 10**6)


def test_triple_pole(triple):
    module = ToyModule(triple, ExpPolyCoefficient.exponential(["1/3"]))
    breakdown = assemble_period(module, default_volumes(triple, Fraction(3)))

    assert breakdown.result == Pole(1, 0, "empty")
    assert [s.label for s in breakdown.poles] == ["empty"]


def test_waldspurger_sectors():
    wal = build_catalog_pair("waldspurger")
    module = ToyModule(
        wal,
        ExpPolyCoefficient.exponential([1]),
        (
            (Sector.PLUS, ExpPolyCoefficient.exponential(["1/2"])),
            (Sector.MINUS, ExpPolyCoefficient.exponential([2])),
        ),
    )
    cfg = default_volumes(wal, Fraction(7))
    breakdown = assemble_period(module, cfg)

    assert breakdown.result == Value(Fraction(3))
    assert len(breakdown.summands) == 3
    assert abs(brute_force_period(module, cfg, 100) - 3) < Fraction(1, 10**6)


@pytest.mark.parametrize("u0", [Fraction(1), Fraction(2), Fraction(3), Fraction(-1), Fraction(1, 2)])
def test_family_period_commutes_with_evaluation(triple, u0):
    module = ToyModule(triple, ExpPolyCoefficient.exponential(["u/10"], ring=FAMILY_RING))
    cfg = default_volumes(triple, Fraction(3))
    x = EvalPoint(FAMILY_RING, u0)

    family = assemble_period(module, cfg, x=x).result
    point = assemble_period(module.evaluated(x, QQ_RING), cfg).result

    assert family == point
    assert abs(brute_force_period(module, cfg, 200, x) - family.value) < Fraction(1, 10**6)


def test_family_brute_force_needs_point(triple):
    module = ToyModule(triple, ExpPolyCoefficient.exponential(["u/10"], ring=FAMILY_RING))
    with pytest.raises(PeriodError):
        brute_force_period(module, default_volumes(triple, Fraction(3)), 10)
