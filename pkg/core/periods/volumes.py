"""
Cartan cell volumes C_Theta * delta^-1(t) and the temperedness margin of
toy modules.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from core.cones.chart import ValuationChart
from core.cones.constraints import Sector, StdConeId, cone_variables, std_cone
from core.log import get_logger
from core.periods.errors import InvalidVolume, NotInCone
from core.roots.datum import SphericalPair, pairing
from core.roots.groups import Vector
from core.series.coefficients import ToyModule, character_value
from core.series.engine import cone_ids
from core.series.rings import QQ_RING, to_fraction

log = get_logger(__name__)

# Pairs whose H is GL(2) up to center: C_empty = 1 + 1/q
GL2_PAIRS = ("triple", "gl2")


@dataclass(frozen=True)
class VolumeConfig:
    """
    Residue field size and the constants C_Theta_H of the Cartan cells.

    Constants are keyed by Theta_H; a missing Theta_H has constant 1.
    """

    q: Fraction
    constants: Mapping[frozenset, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.q <= 1:
            raise InvalidVolume(f"q must be a rational number > 1, got {self.q}")
        for theta, c in self.constants.items():
            if c <= 0:
                raise InvalidVolume(f"volume constant of {sorted(theta)} must be positive, got {c}")

    def constant(self, theta: frozenset) -> Fraction:
        return Fraction(self.constants.get(frozenset(theta), Fraction(1)))


def default_volumes(pair: SphericalPair, q: Fraction) -> VolumeConfig:
    """
    Catalog volume constants: 1 everywhere except C_empty = 1 + 1/q on the GL(2) pairs.
    """
    q = Fraction(q)
    constants = {}
    if pair.key in GL2_PAIRS:
        constants[frozenset()] = 1 + 1 / q
    return VolumeConfig(q, constants)


def modulus_exponent(pair: SphericalPair, t: Sequence[int]) -> int:
    """
    sum_alpha N_alpha <alpha, t> over Delta_H.
    """
    n_exp = pair.n_exp_map
    return sum(n_exp.get(alpha.name, 0) * pairing(alpha, t) for alpha in pair.delta_h)


def delta_inverse(pair: SphericalPair, t: Sequence[int], q: Fraction) -> Fraction:
    return Fraction(q) ** modulus_exponent(pair, t)


def cone_of(pair: SphericalPair, t: Sequence[int]) -> StdConeId:
    """
    The strict cone containing a point of the closed dominant cone.

    :raises NotInCone: If some simple root of H is negative on t.
    """
    theta = set()
    for alpha in pair.delta_h:
        value = pairing(alpha, t)
        if value < 0:
            raise NotInCone(f"<{alpha.name}, t> = {value} is negative at {tuple(t)}")
        if value == 0:
            theta.add(alpha.name)
    sector = Sector.NONE
    for beta in pair.c_h:
        value = pairing(beta, t)
        sector = Sector.PLUS if value > 0 else Sector.MINUS if value < 0 else Sector.ZERO
    return StdConeId(frozenset(theta), sector)


def cartan_volume(pair: SphericalPair, theta: frozenset, t: Sequence[int], cfg: VolumeConfig) -> Fraction:
    """
    Volume C_Theta_H * prod q^(N_alpha <alpha, t>) of the Cartan cell of t.

    :raises NotInCone: If t is not in a strict cone with this Theta_H.
    """
    if len(t) != pair.h_lattice.rank:
        raise NotInCone(f"{tuple(t)} is not a point of the H-lattice of {pair.key}")
    cone = cone_of(pair, t)
    if cone.theta_h != frozenset(theta) or not std_cone(pair, cone).contains(t):
        raise NotInCone(f"{tuple(t)} is not in the strict cone of Theta_H={sorted(theta)}")
    return cfg.constant(theta) * delta_inverse(pair, t, cfg.q)


def ray_generators(pair: SphericalPair, cone: StdConeId) -> list[Vector]:
    """
    Smallest lattice points on the rays of a strict cone (one per free coordinate).
    """
    chart = ValuationChart.of(pair)
    names = chart.names
    result = []
    for form in cone_variables(pair, cone):
        k_axis = names.index(form.name)
        sign = -1 if cone.sector == Sector.MINUS and form in pair.c_h else 1
        for k in range(1, chart.index + 1):
            values = [0] * chart.rank
            values[k_axis] = sign * k
            g = chart.point(values)
            if g is not None:
                result.append(g)
                break
    return result


def temperedness_margin(module: ToyModule, q: Fraction) -> Optional[Fraction]:
    """
    Smallest gap 1 - |chi_j(g)| q^(sum N_alpha <alpha, g>) over every term and
    every ray generator g of every cone, or None when some ratio reaches 1.

    :param module: Toy module over the rationals.
    :param q: Residue field size.
    """
    if module.ring is not QQ_RING:
        raise InvalidVolume("temperedness needs a module over QQ; evaluate the family first")
    pair = module.pair
    margin: Optional[Fraction] = None
    for cone in cone_ids(pair):
        c = module.coefficient_for(cone.sector)
        for g in ray_generators(pair, cone):
            scale = delta_inverse(pair, g, q)
            for term in c.terms:
                if QQ_RING.is_zero(term.scalar):
                    continue
                ratio = abs(to_fraction(character_value(QQ_RING, term.character, g))) * scale
                if ratio >= 1:
                    log.debug(f"ratio {ratio} at generator {g} of {cone.label(pair)}")
                    return None
                gap = 1 - ratio
                margin = gap if margin is None or gap < margin else margin
    # no rays at all: every cone is a single point
    return Fraction(1) if margin is None else margin


__all__ = [
    "VolumeConfig",
    "default_volumes",
    "cartan_volume",
    "delta_inverse",
    "modulus_exponent",
    "cone_of",
    "ray_generators",
    "temperedness_margin",
]
