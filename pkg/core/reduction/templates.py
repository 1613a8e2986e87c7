"""
(F1) decompositions: the cone minus its translate by s^n as translated cones.

Derived pieces work in valuation coordinates v = (v_alpha)_alpha, v_beta of
the cone. With sigma = v(s), the set difference is split in order:

  * if the complement coordinate moves (sector +/-), the slabs v_beta = m
    for m strictly between 0 and n*sigma_beta (inclusive of n*sigma_beta),
    each a translate of the zero-sector cone with the same Theta_H;
  * then for each root alpha_j with sigma_j > 0, in Delta_H order, the
    slabs v_j = m for 1 <= m <= n*sigma_j where every earlier root already
    satisfies the translated bound, each a translate of the cone with
    alpha_j added to Theta_H.

When a slab's corner is not a lattice point (valuation charts of index
> 1), the slab is split at its minimal lattice points instead.
"""

from itertools import product
from typing import Optional, Sequence

from core.cones.chart import ValuationChart
from core.cones.constraints import ConePiece, Sector, StdConeId, shift_in_semigroup
from core.log import get_logger
from core.reduction.errors import TemplateError
from core.reduction.structures import F1Template, FamilyPiece, FixedPiece
from core.roots.datum import SphericalPair
from core.roots.groups import Vector

log = get_logger(__name__)


def _scale(v: Sequence[int], k: int) -> Vector:
    return tuple(k * a for a in v)


def _add(a: Sequence[int], b: Sequence[int]) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


class _Slab:
    """
    Region {v_fixed = given, v_L >= lower_L for free L} in valuation
    coordinates. Complement bounds are stored as magnitudes with a sign.
    """

    def __init__(self, chart: ValuationChart, fixed: dict[int, int], lower: dict[int, int], signs: dict[int, int]):
        self.chart = chart
        self.fixed = fixed
        self.lower = lower
        self.signs = signs

    def corner(self, offsets: Optional[dict[int, int]] = None) -> list[int]:
        offsets = offsets or {}
        values = [0] * self.chart.rank
        for k, v in self.fixed.items():
            values[k] = v
        for k, b in self.lower.items():
            values[k] = self.signs.get(k, 1) * (b + offsets.get(k, 0))
        return values

    def pieces(self, theta: frozenset[str], sector: Sector) -> list[ConePiece]:
        """
        Translates of strict cones partitioning the slab; `theta` and
        `sector` describe the strict cone of the free coordinates.
        """
        names = self.chart.names
        corner = self.corner({k: -1 for k in self.lower})
        t = self.chart.point(corner)
        if t is not None:
            return [ConePiece(t, StdConeId(theta, sector))]

        free = sorted(self.lower)
        index = self.chart.index
        minimal: list[tuple[dict[int, int], Vector]] = []
        for offs in product(range(index), repeat=len(free)):
            offsets = dict(zip(free, offs))
            g = self.chart.point(self.corner(offsets))
            if g is not None:
                minimal.append((offsets, g))
        minimal = [
            (o, g)
            for o, g in minimal
            if not any(o2 != o and all(o2[k] <= o[k] for k in free) and self._congruent(g, g2) for o2, g2 in minimal)
        ]
        if not minimal:
            log.debug(f"slab {self.fixed} has no lattice points")
            return []

        result = []
        for _, g in minimal:
            for mask in range(1 << len(free)):
                tight = [free[i] for i in range(len(free)) if mask >> i & 1]
                body_theta = set(theta)
                body_sector = sector
                for k in tight:
                    if k in self.signs:
                        body_sector = Sector.ZERO
                    else:
                        body_theta.add(names[k])
                result.append(ConePiece(g, StdConeId(frozenset(body_theta), body_sector)))
        return result

    def _congruent(self, g: Vector, h: Vector) -> bool:
        # g - h lies in the closed cone of the free coordinates
        diff = tuple(a - b for a, b in zip(g, h))
        values = self.chart.values(diff)
        return all(self.signs.get(k, 1) * values[k] >= 0 for k in self.lower) and all(
            values[k] == 0 for k in self.fixed
        )


def derive_pieces(pair: SphericalPair, cone: StdConeId, s: Sequence[int], n: int) -> list[ConePiece]:
    """
    Pieces of the cone minus its translate by n*s, from valuation coordinates.

    :param pair: Spherical pair.
    :param cone: Strict cone being reduced.
    :param s: Shift of the triple (a point of T^-_{Theta_H}).
    :param n: Power of the shift, at least 1.
    :return: Translated strict cones, slab by slab.
    """
    chart = ValuationChart.of(pair)
    names = chart.names
    sigma = chart.values(s)
    roots = [k for k, name in enumerate(names) if name in pair.delta_h_names and name not in cone.theta_h]
    theta_idx = {k: 0 for k, name in enumerate(names) if name in cone.theta_h}
    beta = len(pair.delta_h) if pair.has_sectors else None

    lower = {k: 1 for k in roots}
    fixed = dict(theta_idx)
    signs: dict[int, int] = {}
    if beta is not None:
        if cone.sector == Sector.ZERO:
            fixed[beta] = 0
        else:
            signs[beta] = 1 if cone.sector == Sector.PLUS else -1
            lower[beta] = 1

    pieces: list[ConePiece] = []
    if beta is not None and beta in signs and sigma[beta] != 0:
        reach = n * sigma[beta] * signs[beta]
        for m in range(1, reach + 1):
            slab_fixed = {**fixed, beta: signs[beta] * m}
            slab_lower = {k: b for k, b in lower.items() if k != beta}
            slab = _Slab(chart, slab_fixed, slab_lower, {})
            pieces.extend(slab.pieces(cone.theta_h, Sector.ZERO))
        lower[beta] = 1 + max(reach, 0)

    for j in roots:
        if sigma[j] <= 0:
            continue
        for m in range(1, n * sigma[j] + 1):
            slab_fixed = {**fixed, j: m}
            slab_lower = {k: b for k, b in lower.items() if k != j}
            slab = _Slab(chart, slab_fixed, slab_lower, signs)
            pieces.extend(slab.pieces(cone.theta_h | {names[j]}, cone.sector))
        lower[j] = 1 + n * sigma[j]
    return pieces


def instantiate(
    pair: SphericalPair, cone: StdConeId, s: Sequence[int], template: F1Template, n: int
) -> list[ConePiece]:
    """
    Pieces of a template for one power n of the shift.
    """
    if n < 1:
        raise TemplateError(f"shift power must be at least 1, got {n}")
    if template.derived:
        return derive_pieces(pair, cone, s, n)
    pieces = []
    for p in template.pieces:
        if isinstance(p, FixedPiece):
            pieces.append(ConePiece(tuple(p.shift), p.body))
        elif isinstance(p, FamilyPiece):
            for i in range(1, n + 1):
                pieces.append(ConePiece(_add(p.base, _scale(p.step, i)), p.body))
        else:
            raise TemplateError(f"unknown template piece {p!r}")
    return pieces


def check_piece_shape(pair: SphericalPair, cone: StdConeId, piece: ConePiece) -> Optional[str]:
    """
    Shape condition of an (F1) piece, or None when it holds.

    A piece is a translate by t in T^-_{Theta_H} (complement sign zero or
    that of the sector) of a strict cone with a strictly larger Theta_H, or
    of the zero-sector cone when the sector is + or -.
    """
    body = piece.body
    if not body.theta_h >= cone.theta_h:
        return f"piece cone {body.label(pair)} does not contain Theta_H={cone.label(pair)}"
    if body.sector == cone.sector:
        if body.theta_h == cone.theta_h:
            return f"piece cone {body.label(pair)} does not enlarge Theta_H"
    elif not (body.sector == Sector.ZERO and cone.sector in (Sector.PLUS, Sector.MINUS)):
        return f"piece cone {body.label(pair)} has sector {body.sector.value} inside a {cone.sector.value} cone"
    if not shift_in_semigroup(pair, cone, piece.shift):
        return f"shift {piece.shift} is not in T^-_{{{cone.label(pair)}}}"
    return None


__all__ = ["derive_pieces", "instantiate", "check_piece_shape"]
