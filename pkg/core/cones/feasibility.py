"""
Exact integer feasibility, finiteness and enumeration for constraint systems.

Rational reasoning is Fourier-Motzkin elimination over `Fraction`. Integer
feasibility first solves the equalities over Z, then splits the remaining
variables into a bounded part (searched depth first within FM bounds) and
a part along the recession cone, where an interior integer direction turns
any rational point into an integer one.
"""

from fractions import Fraction
from functools import lru_cache
from math import ceil, floor, gcd, lcm
from typing import Iterator, Optional, Sequence

from sympy import Matrix as SympyMatrix

from core.cones.constraints import Constraint, ConstraintSet, Relation, recession
from core.cones.errors import ConeError, RankLimitExceeded, SearchCapExceeded, Unbounded
from core.config import MAX_RANK, get_config
from core.log import get_logger
from core.roots.datum import LinearForm
from core.roots.groups import Vector, unit_vector

log = get_logger(__name__)

# a.x <= b
Row = tuple[tuple[Fraction, ...], Fraction]
IntRow = tuple[Vector, int]


def _rows(cs: ConstraintSet) -> list[IntRow]:
    return [row for c in cs.constraints for row in c.as_rows()]


def _tidy(rows: Sequence[Row]) -> Optional[list[Row]]:
    """
    Drop duplicate and trivially true rows; None on a constant contradiction.
    """
    best: dict[tuple[Fraction, ...], Fraction] = {}
    for a, b in rows:
        pivot = next((abs(c) for c in a if c), None)
        if pivot is None:
            if b < 0:
                return None
            continue
        key = tuple(c / pivot for c in a)
        value = b / pivot
        if key not in best or value < best[key]:
            best[key] = value
    return list(best.items())


def fm_eliminate(rows: Sequence[Row], j: int) -> Optional[list[Row]]:
    """
    Project a system onto the variables other than x_j.

    :return: The projected system (coefficient j is zero), or None if it is infeasible.
    """
    upper, lower, rest = [], [], []
    for a, b in rows:
        if a[j] > 0:
            upper.append((a, b))
        elif a[j] < 0:
            lower.append((a, b))
        else:
            rest.append((a, b))
    for ua, ub in upper:
        for la, lb in lower:
            cu, cl = ua[j], -la[j]
            a = tuple(cl * x + cu * y for x, y in zip(ua, la))
            rest.append((a, cl * ub + cu * lb))
    return _tidy(rest)


def fm_chain(rows: Sequence[Row], n: int) -> Optional[list[list[Row]]]:
    """
    Systems obtained by eliminating x_{n-1}, x_{n-2}, ... in turn.

    `chain[k]` only involves x_0 .. x_{k-1}; `chain[n]` is the input.
    """
    current = _tidy(rows)
    if current is None:
        return None
    chain = [current]
    for j in range(n - 1, -1, -1):
        current = fm_eliminate(current, j)
        if current is None:
            return None
        chain.append(current)
    chain.reverse()
    return chain


def variable_bounds(
    system: Sequence[Row], k: int, prefix: Sequence[Fraction]
) -> Optional[tuple[Optional[Fraction], Optional[Fraction]]]:
    """
    Bounds for x_k in a system on x_0 .. x_k once x_0 .. x_{k-1} are fixed.

    :return: (lower, upper) with None for a missing side, or None if the prefix is infeasible.
    """
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    for a, b in system:
        rem = b - sum(a[i] * prefix[i] for i in range(k))
        c = a[k]
        if c > 0:
            v = rem / c
            hi = v if hi is None or v < hi else hi
        elif c < 0:
            v = rem / c
            lo = v if lo is None or v > lo else lo
        elif rem < 0:
            return None
    if lo is not None and hi is not None and lo > hi:
        return None
    return lo, hi


def rational_point(rows: Sequence[Row], n: int) -> Optional[tuple[Fraction, ...]]:
    """
    Some rational solution of a.x <= b, or None if there is none.
    """
    chain = fm_chain(rows, n)
    if chain is None:
        return None
    point: list[Fraction] = []
    for k in range(n):
        bounds = variable_bounds(chain[k + 1], k, point)
        if bounds is None:
            raise ConeError(f"Fourier-Motzkin back substitution failed at x{k}")
        lo, hi = bounds
        point.append(lo if lo is not None else (hi if hi is not None else Fraction(0)))
    return tuple(point)


def _as_fraction_rows(rows: Sequence[IntRow]) -> list[Row]:
    return [(tuple(Fraction(c) for c in a), Fraction(b)) for a, b in rows]


def rationally_empty(cs: ConstraintSet) -> bool:
    """
    Whether a system has no rational solution (hence no integer one either).

    Bounds are not rounded, so {2a = 1} is rationally nonempty.
    """
    return rational_point(_as_fraction_rows(_rows(cs)), cs.rank) is None


def column_reduce(rows: Sequence[Sequence[int]], n: int) -> tuple[list[list[int]], list[list[int]], list[int]]:
    """
    Unimodular column operations bringing an integer matrix to lower echelon form.

    :param rows: Matrix rows.
    :param n: Number of columns.
    :return: (A, U, pivot_rows) with A = rows * U, U unimodular; column k of A
        is the pivot of row pivot_rows[k] and vanishes on earlier rows.
    """
    A = [list(r) for r in rows]
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def add(target: int, source: int, factor: int):
        for M in (A, U):
            for r in M:
                r[target] += factor * r[source]

    def swap(i: int, j: int):
        for M in (A, U):
            for r in M:
                r[i], r[j] = r[j], r[i]

    col = 0
    pivot_rows = []
    for i, row in enumerate(A):
        if col == n:
            break
        for j in range(col + 1, n):
            while row[j]:
                add(col, j, -(row[col] // row[j]))
                swap(col, j)
        if row[col]:
            if row[col] < 0:
                for M in (A, U):
                    for r in M:
                        r[col] = -r[col]
            pivot_rows.append(i)
            col += 1
    return A, U, pivot_rows


def solve_equalities(rows: Sequence[IntRow], n: int) -> Optional[tuple[Vector, list[Vector]]]:
    """
    All integer solutions of a.x = b, as x0 + K z.

    :return: (x0, columns of K), or None if there is no integer solution.
    """
    if not rows:
        return (0,) * n, [unit_vector(n, i) for i in range(n)]
    A, U, pivot_rows = column_reduce([a for a, _ in rows], n)
    r = len(pivot_rows)
    y = [0] * n
    pivot_of = {row: k for k, row in enumerate(pivot_rows)}
    for i, (_, b) in enumerate(rows):
        k = pivot_of.get(i)
        partial = sum(A[i][m] * y[m] for m in range(r if k is None else k))
        if k is None:
            if partial != b:
                return None
            continue
        if (b - partial) % A[i][k]:
            return None
        y[k] = (b - partial) // A[i][k]
    x0 = tuple(sum(U[i][m] * y[m] for m in range(r)) for i in range(n))
    kernel = [tuple(U[i][m] for i in range(n)) for m in range(r, n)]
    return x0, kernel


def _tighten(rows: Sequence[IntRow]) -> Optional[list[IntRow]]:
    result = []
    for a, b in rows:
        g = 0
        for c in a:
            g = gcd(g, c)
        if g == 0:
            if b < 0:
                return None
            continue
        result.append((tuple(c // g for c in a), b // g))
    return result


def _dot(a: Sequence, x: Sequence):
    return sum(p * q for p, q in zip(a, x))


class _Search:
    """
    Integer search for A z <= b in dimension m (no equalities).
    """

    def __init__(self, rows: list[IntRow], m: int, node_budget: int):
        self.rows = rows
        self.m = m
        self.node_budget = node_budget
        self.nodes = 0

    def _interior_direction(self) -> tuple[list[Vector], Vector]:
        """
        Rows that are implicit equalities of the recession cone, and an integer
        recession direction strictly decreasing every other row.
        """
        homogeneous = [(a, Fraction(0)) for a, _ in _as_fraction_rows(self.rows)]
        implicit = []
        total = [Fraction(0)] * self.m
        for a, _ in self.rows:
            tilted = homogeneous + [(tuple(Fraction(c) for c in a), Fraction(-1))]
            d = rational_point(tilted, self.m)
            if d is None:
                implicit.append(a)
            else:
                total = [t + v for t, v in zip(total, d)]
        scale = lcm(1, *[t.denominator for t in total])
        return implicit, tuple(int(t * scale) for t in total)

    def run(self) -> Optional[Vector]:
        m = self.m
        if rational_point(_as_fraction_rows(self.rows), m) is None:
            return None
        implicit, direction = self._interior_direction()
        if implicit:
            _, U, pivots = column_reduce(implicit, m)
        else:
            U, pivots = [[1 if i == j else 0 for j in range(m)] for i in range(m)], []
        r = len(pivots)
        u_inv = SympyMatrix(U).inv() if m else SympyMatrix([])
        d_y = tuple(int(sum(u_inv[i, j] * direction[j] for j in range(m))) for i in range(m))
        if any(d_y[:r]):
            raise ConeError("recession direction leaves the implicit equality subspace")

        y_rows = [(tuple(_dot(a, [U[i][j] for i in range(m)]) for j in range(m)), b) for a, b in self.rows]
        chain = fm_chain(_as_fraction_rows(y_rows), m)
        if chain is None:
            return None
        self.y_rows = y_rows
        self.chain = chain
        self.r = r
        self.d_w = d_y[r:]
        found = self._dfs([])
        if found is None:
            return None
        return tuple(sum(U[i][j] * found[j] for j in range(m)) for i in range(m))

    def _dfs(self, prefix: list[int]) -> Optional[Vector]:
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise SearchCapExceeded(f"integer search exceeded {self.node_budget} nodes")
        k = len(prefix)
        if k == self.r:
            return self._leaf(prefix)
        bounds = variable_bounds(self.chain[k + 1], k, [Fraction(v) for v in prefix])
        if bounds is None:
            return None
        lo, hi = bounds
        if lo is None or hi is None:
            raise SearchCapExceeded(f"no finite bound for bounded coordinate u{k}")
        for value in range(ceil(lo), floor(hi) + 1):
            found = self._dfs(prefix + [value])
            if found is not None:
                return found
        return None

    def _leaf(self, u: list[int]) -> Optional[Vector]:
        r, m = self.r, self.m
        residual = []
        for a, b in self.y_rows:
            rest = b - _dot(a[:r], u)
            if not any(a[r:]):
                if rest < 0:
                    return None
                continue
            residual.append((a[r:], rest))
        p = rational_point(_as_fraction_rows(residual), m - r)
        if p is None:
            return None
        rounded = [floor(v + Fraction(1, 2)) for v in p]
        steps = 0
        for a, b in residual:
            excess = _dot(a, rounded) - b
            if excess > 0:
                slope = -_dot(a, self.d_w)
                if slope <= 0:
                    raise ConeError("recession direction does not decrease a non-implicit row")
                steps = max(steps, -(-excess // slope))
        w = tuple(v + steps * d for v, d in zip(rounded, self.d_w))
        return tuple(u) + w


@lru_cache(maxsize=8192)
def _integer_feasible(cs: ConstraintSet, node_budget: int) -> Optional[Vector]:
    n = cs.rank
    equalities = [(c.form.coefficients, c.bound) for c in cs.constraints if c.relation == Relation.EQ]
    inequalities = [row for c in cs.constraints if c.relation != Relation.EQ for row in c.as_rows()]
    solved = solve_equalities(equalities, n)
    if solved is None:
        return None
    x0, kernel = solved
    m = len(kernel)
    z_rows = []
    for a, b in inequalities:
        z_rows.append((tuple(_dot(a, k) for k in kernel), b - _dot(a, x0)))
    z_rows = _tighten(z_rows)
    if z_rows is None:
        return None
    if m == 0:
        z: Optional[Vector] = ()
    else:
        z = _Search(z_rows, m, node_budget).run()
    if z is None:
        return None
    x = tuple(x0[i] + sum(k[i] * zj for k, zj in zip(kernel, z)) for i in range(n))
    if not cs.contains(x):
        raise ConeError(f"integer search returned {x}, which violates {cs}")
    return x


def _check_rank(cs: ConstraintSet):
    if cs.rank > MAX_RANK:
        raise RankLimitExceeded(f"constraint systems are limited to rank {MAX_RANK}, got {cs.rank}")


def integer_feasible(cs: ConstraintSet, node_budget: Optional[int] = None) -> Optional[Vector]:
    """
    Find an integer point of a constraint system.

    :param cs: Constraint system.
    :param node_budget: Search node limit (defaults to the configured one).
    :return: A verified member of `cs`, or None if it has no integer points.
    :raises SearchCapExceeded: If the search could not decide.
    """
    _check_rank(cs)
    budget = node_budget or get_config().verify.node_budget
    return _integer_feasible(cs, budget)


def _axis_form(rank: int, i: int) -> LinearForm:
    return LinearForm(f"e{i + 1}", unit_vector(rank, i))


def recession_direction(cs: ConstraintSet) -> Optional[Vector]:
    """
    A nonzero integer point of the recession cone, if there is one.
    """
    homogeneous = recession(cs)
    for i in range(cs.rank):
        form = _axis_form(cs.rank, i)
        for relation, bound in ((Relation.GE, 1), (Relation.LE, -1)):
            d = integer_feasible(homogeneous.extended([Constraint(form, relation, bound)]))
            if d is not None:
                return d
    return None


def is_finite(cs: ConstraintSet) -> bool:
    """
    Whether a constraint system has finitely many integer points.

    A set with a nonzero integer recession direction is infinite as soon as it
    has one integer point.
    """
    if recession_direction(cs) is None:
        return True
    return integer_feasible(cs) is None


def _walk(cs: ConstraintSet, rows: Sequence[IntRow]) -> Iterator[Vector]:
    n = cs.rank
    chain = fm_chain(_as_fraction_rows(rows), n)
    if chain is None:
        return

    def dfs(prefix: list[int]) -> Iterator[Vector]:
        k = len(prefix)
        if k == n:
            if cs.contains(prefix):
                yield tuple(prefix)
            return
        bounds = variable_bounds(chain[k + 1], k, [Fraction(v) for v in prefix])
        if bounds is None:
            return
        lo, hi = bounds
        if lo is None or hi is None:
            raise Unbounded(f"coordinate x{k + 1} is unbounded on {cs}")
        for value in range(ceil(lo), floor(hi) + 1):
            yield from dfs(prefix + [value])

    yield from dfs([])


def enumerate_box(cs: ConstraintSet, B: int) -> list[Vector]:
    """
    All integer points of `cs` with every coordinate in [-B, B], in lexicographic order.
    """
    _check_rank(cs)
    if B < 0:
        return []
    box = []
    for i in range(cs.rank):
        e = unit_vector(cs.rank, i)
        box.append((e, B))
        box.append((tuple(-c for c in e), B))
    return list(_walk(cs, _rows(cs) + box))


def bounded_points(cs: ConstraintSet) -> list[Vector]:
    """
    All integer points of a finite constraint system, in lexicographic order.

    :raises Unbounded: If the system has infinitely many integer points.
    """
    _check_rank(cs)
    if integer_feasible(cs) is None:
        return []
    direction = recession_direction(cs)
    if direction is not None:
        raise Unbounded(f"{cs} is unbounded along {direction}")
    return list(_walk(cs, _rows(cs)))


__all__ = [
    "fm_eliminate",
    "fm_chain",
    "rational_point",
    "rationally_empty",
    "column_reduce",
    "solve_equalities",
    "integer_feasible",
    "recession_direction",
    "is_finite",
    "enumerate_box",
    "bounded_points",
]
