from fractions import Fraction

import pytest
from sympy import Rational

from core.series.errors import SeriesError
from core.series.laurent import LaurentPoly, poly_sum
from core.series.rational import RationalSeries, expand_ratio, inverse_factor, series_sum
from core.series.rings import FAMILY_RING, QQ_RING, EvalPoint, to_fraction
from core.series.errors import DegenerateSpecialization

R = QQ_RING


def poly(coeffs: dict) -> LaurentPoly:
    nvars = len(next(iter(coeffs)))
    return LaurentPoly.from_dict(R, nvars, {e: R(c) for e, c in coeffs.items()})


def as_fractions(p: LaurentPoly) -> dict:
    return {e: to_fraction(c) for e, c in p.terms}


def test_laurent_drops_zero_terms():
    p = poly({(1, 0): 2, (0, 1): 0, (0, 0): 1})

    assert p.terms[0][0] == (0, 0)
    assert as_fractions(p) == {(0, 0): 1, (1, 0): 2}


def test_laurent_arithmetic():
    a = poly({(0,): 1, (1,): -1})
    b = poly({(0,): 1, (1,): 1})

    assert as_fractions(a * b) == {(0,): 1, (2,): -1}
    assert (a - a).is_zero()
    assert as_fractions((a**2).shift((-1,))) == {(-1,): 1, (0,): -2, (1,): 1}
    assert as_fractions(poly_sum(R, 1, [a, b])) == {(0,): 2}


def test_laurent_nvars_mismatch():
    with pytest.raises(ValueError):
        poly({(0,): 1}) + poly({(0, 0): 1})


def test_inverse_factor():
    p = inverse_factor(R, R(Fraction(1, 2)), (1, 1), 2, 5)

    assert as_fractions(p) == {(0, 0): 1, (1, 1): 1, (2, 2): Fraction(3, 4)}


def test_rational_expand():
    lam = R(Fraction(1, 3))
    rs = RationalSeries.polynomial(poly({(1,): Fraction(1, 3)})).divide(lam, (1,))

    assert as_fractions(rs.expand(3)) == {(1,): Fraction(1, 3), (2,): Fraction(1, 9), (3,): Fraction(1, 27)}
    assert rs.expand(0).is_zero()


def test_rational_sum_uses_common_denominator():
    lam = R(2)
    a = RationalSeries.polynomial(poly({(0,): 1})).divide(lam, (1,))
    b = RationalSeries.polynomial(poly({(1,): -2})).divide(lam, (1,))

    total = a + b
    assert as_fractions(total.expand(4)) == {(0,): 1}
    assert len(series_sum(R, 1, [a, b]).factors) == 1


def test_rational_rejects_bad_factors():
    with pytest.raises(SeriesError):
        RationalSeries(R, 1, poly({(0,): 1}), (((R(1), (0,)), 1),))
    with pytest.raises(SeriesError):
        RationalSeries(R, 1, poly({(0,): 1}), (((R(0), (1,)), 1),))
    with pytest.raises(SeriesError):
        RationalSeries.zero(R, 1).expand(-1)


def test_annihilators_group_by_shift():
    rs = RationalSeries.zero(R, 2).divide(R(2), (1, 0)).divide(R(3), (1, 0)).divide(R(5), (0, 1), 2)
    found = {sigma: tuple(to_fraction(a) for a in P.coefficients) for P, sigma in rs.annihilators()}

    assert found == {(1, 0): (6, -5, 1), (0, 1): (25, -10, 1)}


def test_specialize():
    lam = R(Fraction(1, 2))
    rs = RationalSeries.polynomial(poly({(1,): Fraction(1, 2)})).divide(lam, (1,))
    Q, P = rs.specialize(Fraction(3), [1])

    assert Q.as_expr() == Rational(3, 2) * Q.gen
    assert P.as_expr() == 1 - Rational(3, 2) * P.gen


def test_expand_ratio():
    Q, P = RationalSeries.polynomial(poly({(0,): 1})).divide(R(Fraction(1, 2)), (1,)).specialize(Fraction(2), [1])

    assert [to_fraction(c) for c in expand_ratio(Q, P, 4)] == [1, 1, 1, 1, 1]


def test_evaluated_family_series():
    lam = FAMILY_RING("u/10")
    num = LaurentPoly.from_dict(FAMILY_RING, 1, {(1,): lam})
    rs = RationalSeries.polynomial(num).divide(lam, (1,))

    point = rs.evaluated(EvalPoint(FAMILY_RING, Fraction(5)))
    assert point.ring is QQ_RING
    assert {e: to_fraction(c) for e, c in point.expand(2).terms} == {(1,): Fraction(1, 2), (2,): Fraction(1, 4)}

    with pytest.raises(DegenerateSpecialization):
        rs.evaluated(EvalPoint(FAMILY_RING, Fraction(0)))
