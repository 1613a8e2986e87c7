from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from sympy import Poly

from core.cones.constraints import StdConeId
from core.log import get_logger
from core.periods.errors import PeriodError
from core.periods.evaluation import PeriodResult, Pole, Value, eval_at_one
from core.periods.volumes import VolumeConfig, delta_inverse
from core.reduction.structures import ReductionStructure
from core.series.coefficients import ToyModule
from core.series.engine import SeriesEngine, cone_ids, cone_points
from core.series.rational import RationalSeries, specialization_weights
from core.series.rings import QQ_RING, EvalPoint, to_fraction

log = get_logger(__name__)


@dataclass(frozen=True)
class PeriodSummand:
    cone: StdConeId
    label: str
    constant: Fraction
    series: RationalSeries
    numerator: Poly
    denominator: Poly
    result: PeriodResult


@dataclass
class PeriodBreakdown:
    """
    Per-cone summands C_Theta_H * F(1) and their total.
    """

    summands: list[PeriodSummand] = field(default_factory=list)

    @property
    def result(self) -> PeriodResult:
        total = Fraction(0)
        for s in self.summands:
            if isinstance(s.result, Pole):
                return s.result
            total += s.constant * s.result.value
        return Value(total)

    @property
    def poles(self) -> list[PeriodSummand]:
        return [s for s in self.summands if isinstance(s.result, Pole)]


def assemble_period(
    module: ToyModule,
    cfg: VolumeConfig,
    structures: Optional[Iterable[ReductionStructure]] = None,
    x: Optional[EvalPoint] = None,
) -> PeriodBreakdown:
    """
    Toy canonical period: sum over cones of C_Theta_H * (Q/P)(1), with
    (Q, P) the specialization of the cone's reduced series.

    :param module: Toy module on its pair.
    :param cfg: Residue field size and volume constants.
    :param structures: Reduction structures (catalog by default).
    :param x: Evaluation point for family modules (identity over QQ).
    :return: Breakdown in cone order; its result is the first pole, if any.
    :raises MissingStructure: If a cone cannot be reduced.
    """
    pair = module.pair
    x = x or EvalPoint(module.ring)
    engine = SeriesEngine(pair, module.ring, structures)
    weights = specialization_weights(engine.chart.names, pair.n_exp_map)
    breakdown = PeriodBreakdown()
    for cone in cone_ids(pair):
        series = engine.series(module.coefficient_for(cone.sector), cone)
        Q, P = series.specialize(cfg.q, weights)
        result = eval_at_one(Q, P, x)
        label = cone.label(pair)
        if isinstance(result, Pole):
            result = Pole(result.ord_p, result.ord_q, label)
            log.warning(f"{pair.key}: {result.describe()}")
        breakdown.summands.append(PeriodSummand(cone, label, cfg.constant(cone.theta_h), series, Q, P, result))
    return breakdown


def brute_force_period(module: ToyModule, cfg: VolumeConfig, order: int, x: Optional[EvalPoint] = None) -> Fraction:
    """
    Partial sum of c(t) * C_Theta_H * delta^-1(t) over the cone points with
    sum |v(t)| <= order.
    """
    pair = module.pair
    if module.ring is not QQ_RING:
        if x is None:
            raise PeriodError("a family module needs an evaluation point")
        module = module.evaluated(x, QQ_RING)
    total = Fraction(0)
    for cone in cone_ids(pair):
        c = module.coefficient_for(cone.sector)
        constant = cfg.constant(cone.theta_h)
        for t in cone_points(pair, cone, order):
            total += to_fraction(c(t)) * constant * delta_inverse(pair, t, cfg.q)
    return total


__all__ = ["PeriodSummand", "PeriodBreakdown", "assemble_period", "brute_force_period"]
