import pytest

from core.roots.errors import InvalidGroup
from core.roots.groups import GL, CentralQuotient, Product, SplitSO, Sp, Torus, mat_mul, mat_vec, unit_vector


@pytest.mark.parametrize(
    ("group", "rank", "simple", "positive"),
    [
        (GL(3), 3, 2, 3),
        (SplitSO(3), 1, 1, 1),
        (SplitSO(4), 2, 2, 2),
        (SplitSO(5), 2, 2, 4),
        (Sp(2), 1, 1, 1),
        (Sp(4), 2, 2, 4),
        (Torus(2), 2, 0, 0),
        (Product((GL(2), GL(2))), 4, 2, 2),
    ],
)
def test_root_counts(group, rank, simple, positive):
    assert group.ambient_rank() == rank
    assert len(group.simple_roots()) == simple
    assert len(group.positive_roots()) == positive


def test_sp2_long_root_pairs_to_two():
    assert Sp(2).simple_roots() == [(2,)]


def test_central_quotient_drops_one_coordinate():
    model = CentralQuotient(GL(2), ((1, 1),)).realize()

    assert model.rank == 1
    assert model.project((1, 0)) == (1,)
    assert model.project((1, 1)) == (0,)
    assert model.simple_roots == ((1,),)


@pytest.mark.parametrize(
    "group",
    [
        lambda: GL(0),
        lambda: SplitSO(2),
        lambda: Sp(3),
        lambda: Torus(-1),
        lambda: CentralQuotient(GL(2), ((1, 0),)).realize(),
        lambda: CentralQuotient(GL(2), ((2, 2),)).realize(),
    ],
)
def test_invalid_groups(group):
    with pytest.raises(InvalidGroup):
        group()


def test_matrix_helpers():
    a = ((1, 2), (0, 1))
    b = ((1, 0), (3, 1))

    assert mat_mul(a, b) == ((7, 2), (3, 1))
    assert mat_vec(a, (1, 1)) == (3, 1)
    assert unit_vector(3, 1) == (0, 1, 0)
