import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.cones.constraints import Constraint, ConstraintSet, Relation
from core.cones.errors import RankLimitExceeded, Unbounded
from core.cones.feasibility import (
    bounded_points,
    enumerate_box,
    integer_feasible,
    is_finite,
    rationally_empty,
    recession_direction,
)
from core.roots.datum import CocharLattice, LinearForm

LINE = CocharLattice(("a",))
PLANE = CocharLattice(("x", "y"))
A = LinearForm("a", (1,))
X = LinearForm("x", (1, 0))
Y = LinearForm("y", (0, 1))


def line(*constraints):
    return ConstraintSet(LINE, tuple(constraints))


def plane(*constraints):
    return ConstraintSet(PLANE, tuple(constraints))


def test_contradiction_is_infeasible():
    cs = line(Constraint(A, Relation.GE, 1), Constraint(A, Relation.LE, 0))
    assert integer_feasible(cs) is None


def test_half_line_is_feasible():
    point = integer_feasible(line(Constraint(A, Relation.GE, 1)))
    assert point is not None and point[0] >= 1


def test_parity_obstruction():
    cs = line(Constraint(LinearForm("2a", (2,)), Relation.EQ, 1))

    assert not rationally_empty(cs)
    assert integer_feasible(cs) is None


def test_rounding_is_only_syntactic_pruning():
    half = line(Constraint(LinearForm("2a", (2,)), Relation.EQ, 1))
    gap = line(Constraint(LinearForm("2a", (2,)), Relation.GE, 1), Constraint(A, Relation.LE, 0))

    assert half.is_trivially_empty()
    assert not rationally_empty(half)
    assert rationally_empty(gap)


def test_unbounded_diagonal():
    cs = plane(
        Constraint(LinearForm("x-y", (1, -1)), Relation.EQ, 0),
        Constraint(X, Relation.GE, 1000),
    )
    point = integer_feasible(cs)

    assert point is not None
    assert cs.contains(point)


@pytest.mark.parametrize(
    ("cs", "finite"),
    [
        (line(Constraint(A, Relation.GE, 1), Constraint(A, Relation.LE, 5)), True),
        (line(Constraint(A, Relation.GE, 1)), False),
        (
            plane(
                Constraint(X, Relation.GE, 1),
                Constraint(Y, Relation.GE, 1),
                Constraint(LinearForm("x+y", (1, 1)), Relation.LE, 4),
            ),
            True,
        ),
        (line(Constraint(A, Relation.GE, 1), Constraint(A, Relation.LE, 0)), True),
    ],
)
def test_is_finite(cs, finite):
    assert is_finite(cs) == finite


def test_recession_direction():
    direction = recession_direction(line(Constraint(A, Relation.LE, 3)))
    assert direction is not None and direction[0] < 0
    assert recession_direction(line(Constraint(A, Relation.EQ, 3))) is None


def test_enumerate_box():
    assert enumerate_box(line(Constraint(A, Relation.GE, 1), Constraint(A, Relation.LE, 3)), 10) == [
        (1,),
        (2,),
        (3,),
    ]
    assert enumerate_box(line(Constraint(A, Relation.GE, 1), Constraint(A, Relation.LE, 0)), 10) == []

    diagonal = plane(Constraint(LinearForm("x-y", (1, -1)), Relation.EQ, 0), Constraint(X, Relation.GE, 1))
    assert enumerate_box(diagonal, 2) == [(1, 1), (2, 2)]


def test_bounded_points():
    triangle = plane(
        Constraint(X, Relation.GE, 1),
        Constraint(Y, Relation.GE, 1),
        Constraint(LinearForm("x+y", (1, 1)), Relation.LE, 3),
    )
    assert bounded_points(triangle) == [(1, 1), (1, 2), (2, 1)]

    with pytest.raises(Unbounded):
        bounded_points(line(Constraint(A, Relation.GE, 1)))


def test_rank_guard():
    lattice = CocharLattice(tuple(f"x{i}" for i in range(7)))
    with pytest.raises(RankLimitExceeded):
        integer_feasible(ConstraintSet(lattice, ()))


@settings(max_examples=30, deadline=None)
@given(
    st.lists(
        st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.sampled_from(list(Relation)), st.integers(-6, 6)),
        min_size=1,
        max_size=4,
    )
)
def test_feasibility_agrees_with_enumeration(rows):
    cs = plane(*[Constraint(LinearForm("f", (a, b)), rel, bound) for a, b, rel, bound in rows])
    point = integer_feasible(cs)
    box = enumerate_box(cs, 8)

    if point is not None:
        assert cs.contains(point)
    if box:
        assert point is not None
    if point is None:
        assert box == []
    if is_finite(cs):
        assert len(enumerate_box(cs, 40)) == len(enumerate_box(cs, 80))
