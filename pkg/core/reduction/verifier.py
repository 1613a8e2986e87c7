from dataclasses import dataclass, field
from time import perf_counter
from typing import Optional, Sequence

from core.cones.errors import SearchCapExceeded
from core.cones.verdicts import Inconclusive, Pass, Verdict, combine
from core.config import get_config
from core.log import get_logger
from core.reduction.checks import F1Result, check_F1, check_triple_membership, first_failure
from core.reduction.finiteness import F2Analysis, F2Enumeration, box_sizes, check_F2, check_minimality
from core.reduction.structures import ReductionStructure

log = get_logger(__name__)


@dataclass
class StructureReport:
    """
    Outcome of verifying one reduction structure.
    """

    key: str
    pair: str
    cone: str
    triples: list[str]
    membership: list[Verdict]
    f1: list[F1Result]
    f2: Verdict
    minimality: Verdict
    notes: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def verdicts(self) -> list[Verdict]:
        return self.membership + [r.verdict for r in self.f1] + [self.f2, self.minimality]

    @property
    def overall(self) -> Verdict:
        return combine(self.verdicts)

    @property
    def status(self) -> str:
        return self.overall.status

    def to_dict(self) -> dict:
        failed = first_failure(self.f1)
        return {
            "key": self.key,
            "pair": self.pair,
            "cone": self.cone,
            "status": self.status,
            "triples": list(self.triples),
            "membership": [v.to_dict() for v in self.membership],
            "f1": {
                "checked": len(self.f1),
                "status": combine(r.verdict for r in self.f1).status,
                "failure": None
                if failed is None
                else {"triple": failed.index, "n": failed.n, **failed.verdict.to_dict()},
            },
            "f2": self.f2.to_dict(),
            "minimality": self.minimality.to_dict(),
            "notes": list(self.notes),
        }


def verify(
    structure: ReductionStructure,
    n_max: Optional[int] = None,
    M_list: Optional[Sequence[int]] = None,
    B_list: Optional[Sequence[int]] = None,
) -> StructureReport:
    """
    Run membership, (F1), (F2) and minimality checks on a structure.

    :param structure: Reduction structure.
    :param n_max: Largest shift power for (F1), default from the configuration.
    :param M_list: Bounds for the (F2) cross-check, default from the configuration.
    :param B_list: Box sizes for the (F2) cross-check, default from the configuration.
    :return: Report with one verdict per check.
    """
    config = get_config().verify
    n_max = n_max or config.n_max
    M_list = list(M_list or config.m_list)
    B_list = list(B_list if B_list is not None else config.b_list)
    pair, cone = structure.pair, structure.cone
    timings: dict[str, float] = {}

    start = perf_counter()
    membership = [check_triple_membership(pair, cone, t) for t in structure.triples]
    timings["membership"] = perf_counter() - start

    start = perf_counter()
    f1 = check_F1(structure, n_max, stop_early=False)
    timings["f1"] = perf_counter() - start

    start = perf_counter()
    analysis: Optional[F2Analysis] = None
    enumeration: Optional[F2Enumeration] = None
    if structure.entries:
        try:
            analysis = F2Analysis(structure)
            enumeration = F2Enumeration(analysis, max(box_sizes(B_list))) if B_list else None
        except SearchCapExceeded as err:
            f2: Verdict = Inconclusive(err.message)
            minimality: Verdict = Inconclusive(err.message)
            analysis = None
    if analysis is not None or not structure.entries:
        f2 = check_F2(structure, M_list, B_list, analysis, enumeration)
    timings["f2"] = perf_counter() - start

    start = perf_counter()
    if not structure.entries:
        minimality = Pass()
    elif analysis is not None:
        minimality = check_minimality(structure, M_list, B_list, analysis, enumeration)
    timings["minimality"] = perf_counter() - start

    report = StructureReport(
        key=structure.key,
        pair=pair.key,
        cone=cone.label(pair),
        triples=[t.label(pair) for t in structure.triples],
        membership=membership,
        f1=f1,
        f2=f2,
        minimality=minimality,
        notes=list(structure.notes),
        timings=timings,
    )
    log.info(f"{structure.key}: {report.status} ({sum(timings.values()):.2f}s)")
    return report


__all__ = ["verify", "StructureReport"]
