"""
Split group descriptions and their maximal split tori.

Each group type knows its cocharacter lattice in standard coordinates
and its simple/positive roots as integer forms on that lattice.
`CentralQuotient` replaces the lattice by a torsion-free quotient, so all
later arithmetic happens on honest integer lattices.
"""

from dataclasses import dataclass, field
from math import gcd
from typing import Optional

from core.roots.errors import InvalidGroup

Vector = tuple[int, ...]
Matrix = tuple[Vector, ...]


def identity(rank: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank))


def mat_mul(a: Matrix, b: Matrix, inner: Optional[int] = None) -> Matrix:
    """
    Multiply two integer matrices stored as row tuples.

    :param inner: Shared dimension, needed when `a` has no rows.
    """
    if inner is None:
        inner = len(a[0]) if a else len(b)
    cols = len(b[0]) if b else 0
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)) for i in range(len(a)))


def mat_vec(a: Matrix, x: Vector) -> Vector:
    return tuple(sum(c * v for c, v in zip(row, x)) for row in a)


def vec_mat(x: Vector, a: Matrix, cols: int) -> Vector:
    """
    Row vector times matrix (pulls a form back along the matrix).
    """
    return tuple(sum(x[k] * a[k][j] for k in range(len(x))) for j in range(cols))


def unit_vector(rank: int, i: int, value: int = 1) -> Vector:
    return tuple(value if j == i else 0 for j in range(rank))


@dataclass(frozen=True)
class TorusModel:
    """
    A realized maximal split torus: the cocharacter lattice together with
    the maps to and from the ambient coordinates, and the root forms.

    `projection` maps ambient coordinates to lattice coordinates,
    `section` maps lattice coordinates back to chosen ambient representatives.
    """

    rank: int
    ambient_rank: int
    projection: Matrix
    section: Matrix
    simple_roots: tuple[Vector, ...]
    positive_roots: tuple[Vector, ...]

    def project(self, x: Vector) -> Vector:
        return mat_vec(self.projection, x)

    def lift(self, x: Vector) -> Vector:
        return mat_vec(self.section, x)

    def push_form(self, form: Vector) -> Vector:
        """
        Restrict an ambient form to the lattice via the section.
        """
        return vec_mat(form, self.section, self.rank)

    @property
    def roots(self) -> set[Vector]:
        return set(self.positive_roots) | {tuple(-c for c in r) for r in self.positive_roots}


class GroupSpec:
    """
    Base class for split group descriptions.
    """

    def ambient_rank(self) -> int:
        raise NotImplementedError()

    def simple_roots(self) -> list[Vector]:
        raise NotImplementedError()

    def positive_roots(self) -> list[Vector]:
        raise NotImplementedError()

    def realize(self) -> TorusModel:
        rank = self.ambient_rank()
        return TorusModel(
            rank=rank,
            ambient_rank=rank,
            projection=identity(rank),
            section=identity(rank),
            simple_roots=tuple(self.simple_roots()),
            positive_roots=tuple(self.positive_roots()),
        )


def _e(rank: int, *terms: tuple[int, int]) -> Vector:
    v = [0] * rank
    for i, c in terms:
        v[i] += c
    return tuple(v)


@dataclass(frozen=True)
class GL(GroupSpec):
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidGroup(f"GL({self.n}) needs n >= 1")

    def ambient_rank(self) -> int:
        return self.n

    def simple_roots(self) -> list[Vector]:
        return [_e(self.n, (i, 1), (i + 1, -1)) for i in range(self.n - 1)]

    def positive_roots(self) -> list[Vector]:
        return [_e(self.n, (i, 1), (j, -1)) for i in range(self.n) for j in range(i + 1, self.n)]


@dataclass(frozen=True)
class SplitSO(GroupSpec):
    """
    Split special orthogonal group of an n-dimensional quadratic space,
    Witt index n // 2.
    """

    n: int

    def __post_init__(self):
        if self.n < 3:
            raise InvalidGroup(f"SO({self.n}) needs n >= 3")

    def ambient_rank(self) -> int:
        return self.n // 2

    def simple_roots(self) -> list[Vector]:
        r = self.ambient_rank()
        roots = [_e(r, (i, 1), (i + 1, -1)) for i in range(r - 1)]
        if self.n % 2:
            roots.append(_e(r, (r - 1, 1)))
        else:
            roots.append(_e(r, (r - 2, 1), (r - 1, 1)))
        return roots

    def positive_roots(self) -> list[Vector]:
        r = self.ambient_rank()
        roots = []
        for i in range(r):
            for j in range(i + 1, r):
                roots.append(_e(r, (i, 1), (j, -1)))
                roots.append(_e(r, (i, 1), (j, 1)))
            if self.n % 2:
                roots.append(_e(r, (i, 1)))
        return roots


@dataclass(frozen=True)
class Sp(GroupSpec):
    """
    Split symplectic group Sp(2m); `two_m` is the matrix size.
    """

    two_m: int

    def __post_init__(self):
        if self.two_m < 2 or self.two_m % 2:
            raise InvalidGroup(f"Sp({self.two_m}) needs an even size >= 2")

    def ambient_rank(self) -> int:
        return self.two_m // 2

    def simple_roots(self) -> list[Vector]:
        m = self.ambient_rank()
        return [_e(m, (i, 1), (i + 1, -1)) for i in range(m - 1)] + [_e(m, (m - 1, 2))]

    def positive_roots(self) -> list[Vector]:
        m = self.ambient_rank()
        roots = []
        for i in range(m):
            for j in range(i + 1, m):
                roots.append(_e(m, (i, 1), (j, -1)))
                roots.append(_e(m, (i, 1), (j, 1)))
            roots.append(_e(m, (i, 2)))
        return roots


@dataclass(frozen=True)
class Torus(GroupSpec):
    r: int

    def __post_init__(self):
        if self.r < 0:
            raise InvalidGroup(f"Torus({self.r}) needs r >= 0")

    def ambient_rank(self) -> int:
        return self.r

    def simple_roots(self) -> list[Vector]:
        return []

    def positive_roots(self) -> list[Vector]:
        return []


@dataclass(frozen=True)
class Product(GroupSpec):
    factors: tuple[GroupSpec, ...]

    def ambient_rank(self) -> int:
        return sum(f.ambient_rank() for f in self.factors)

    def _embedded(self, attr: str) -> list[Vector]:
        total = self.ambient_rank()
        result = []
        offset = 0
        for factor in self.factors:
            width = factor.ambient_rank()
            for root in getattr(factor, attr)():
                result.append((0,) * offset + root + (0,) * (total - offset - width))
            offset += width
        return result

    def simple_roots(self) -> list[Vector]:
        return self._embedded("simple_roots")

    def positive_roots(self) -> list[Vector]:
        return self._embedded("positive_roots")


@dataclass(frozen=True)
class CentralQuotient(GroupSpec):
    """
    Quotient of `inner` by a split central torus given by a basis of its
    cocharacter sublattice.

    Every basis vector must have a coordinate equal to +-1 after the previous
    vectors are eliminated; that coordinate is dropped and the remaining ones
    become x - (x_p / c_p) * c.
    """

    inner: GroupSpec
    central: tuple[Vector, ...] = field(default_factory=tuple)

    def ambient_rank(self) -> int:
        return self.inner.ambient_rank()

    def simple_roots(self) -> list[Vector]:
        return self.inner.simple_roots()

    def positive_roots(self) -> list[Vector]:
        return self.inner.positive_roots()

    def realize(self) -> TorusModel:
        ambient = self.inner.ambient_rank()
        simple = self.inner.simple_roots()
        for c in self.central:
            if len(c) != ambient:
                raise InvalidGroup(f"central vector {c} does not live on a rank {ambient} lattice")
            if gcd(*c) != 1:
                raise InvalidGroup(f"central vector {c} is not primitive")
            for root in simple:
                if sum(a * b for a, b in zip(root, c)):
                    raise InvalidGroup(f"central vector {c} is not fixed by the simple root {root}")

        projection = identity(ambient)
        section = identity(ambient)
        rank = ambient
        for c in self.central:
            reduced = mat_vec(projection, c)
            pivots = [i for i, v in enumerate(reduced) if abs(v) == 1]
            if not pivots:
                raise InvalidGroup(f"central vector {c} has no unit coordinate after elimination")
            p = pivots[-1]
            step = tuple(
                tuple((1 if i == j else 0) - reduced[i] * reduced[p] * (1 if j == p else 0) for j in range(rank))
                for i in range(rank)
                if i != p
            )
            insert = tuple(
                tuple(0 if i == p else (1 if j == (i if i < p else i - 1) else 0) for j in range(rank - 1))
                for i in range(rank)
            )
            projection = mat_mul(step, projection, rank)
            section = mat_mul(section, insert, rank)
            rank -= 1

        model = TorusModel(
            rank=rank,
            ambient_rank=ambient,
            projection=projection,
            section=section,
            simple_roots=(),
            positive_roots=(),
        )
        return TorusModel(
            rank=rank,
            ambient_rank=ambient,
            projection=projection,
            section=section,
            simple_roots=tuple(model.push_form(r) for r in simple),
            positive_roots=tuple(model.push_form(r) for r in self.inner.positive_roots()),
        )


__all__ = [
    "GroupSpec",
    "GL",
    "SplitSO",
    "Sp",
    "Torus",
    "Product",
    "CentralQuotient",
    "TorusModel",
]
