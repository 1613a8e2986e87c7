import sys
from argparse import Namespace
from typing import Callable, Optional

from core.cli.helpers import load_config, parse_arguments, read_input, show_config
from core.cli.input_format import InputDocument, ParseError
from core.cli.report import ReportDocument, exit_code, fraction_text, input_digest, render_text, worst_status
from core.cones.constraints import Sector, StdConeId
from core.cones.errors import ConeError
from core.config import Config, ReportFormat
from core.log import get_logger, setup
from core.periods.assembly import assemble_period, brute_force_period
from core.periods.errors import PeriodError
from core.periods.evaluation import FamilyEvaluation, Pole
from core.periods.volumes import VolumeConfig, default_volumes, temperedness_margin
from core.reduction.catalog import catalog, structures_for
from core.reduction.errors import ReductionError
from core.reduction.structures import ReductionStructure
from core.reduction.verifier import verify
from core.roots.catalog import build_catalog_pair, parse_pair_id
from core.roots.datum import SphericalPair
from core.roots.errors import RootDatumError
from core.series.engine import SeriesEngine, cone_ids, truncate
from core.series.errors import SeriesError
from core.series.rational import specialization_weights
from core.series.rings import QQ_RING, EvalPoint

log = get_logger(__name__)


class UsageError(Exception):
    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def __str__(self):
        return self.message


def _pair(args: Namespace, doc: Optional[InputDocument]) -> Optional[SphericalPair]:
    if doc is not None and doc.pair is not None:
        return doc.pair
    if args.pair:
        name, params = parse_pair_id(args.pair)
        return build_catalog_pair(name, params)
    return None


def _theta(args: Namespace, pair: SphericalPair) -> Optional[frozenset[str]]:
    if args.theta is None:
        return None
    text = args.theta.strip()
    if text == "empty":
        return frozenset()
    if text == "full":
        return frozenset(pair.delta_h_names)
    names = frozenset(n.strip() for n in text.replace("+", ",").split(","))
    unknown = names - set(pair.delta_h_names)
    if unknown:
        raise UsageError(f"{', '.join(sorted(unknown))} not in Delta_H of {pair.key}")
    return names


def _matches(args: Namespace, pair: SphericalPair, cone: StdConeId) -> bool:
    theta = _theta(args, pair)
    if theta is not None and cone.theta_h != theta:
        return False
    return args.sector is None or cone.sector == Sector(args.sector)


def select_structures(args: Namespace, doc: Optional[InputDocument]) -> list[ReductionStructure]:
    """
    Structures named on the command line or in the input file.
    """
    if doc is not None and doc.structures:
        return [s for s in doc.structures if _matches(args, s.pair, s.cone)]
    if args.catalog and args.catalog != "all":
        key = args.catalog.rstrip("/")
        selected = [s for s in catalog() if s.key == key or s.key.startswith(key + "/")]
        if not selected:
            raise UsageError(f"no catalog structure matches {args.catalog!r}")
        return selected
    pair = _pair(args, doc)
    if pair is not None:
        return [s for s in structures_for(pair) if _matches(args, pair, s.cone)]
    return catalog()


def _options(args: Namespace, config: Config) -> dict:
    return {
        "catalog": args.catalog,
        "pair": args.pair,
        "theta": args.theta,
        "sector": args.sector,
        "verify": config.verify.model_dump(),
        "series": config.series.model_dump(),
        "period": config.period.model_dump(),
    }


def cmd_catalog(args: Namespace, config: Config, text: str, doc: Optional[InputDocument]) -> ReportDocument:
    items = []
    for s in select_structures(args, doc):
        items.append(
            {
                "key": s.key,
                "pair": s.pair.key,
                "cone": s.cone.label(s.pair),
                "triples": [t.label(s.pair) for t in s.triples],
                "notes": list(s.notes),
                "status": "pass",
            }
        )
    return ReportDocument(command="catalog", digest=input_digest("catalog", _options(args, config), text), items=items)


def cmd_verify(args: Namespace, config: Config, text: str, doc: Optional[InputDocument]) -> ReportDocument:
    """
    Verify the selected reduction structures.

    :return: Report with one item per structure; status pass only if every check passed.
    """
    items = []
    for structure in select_structures(args, doc):
        report = verify(structure, config.verify.n_max, config.verify.m_list, config.verify.b_list)
        data = report.to_dict()
        membership_status = worst_status(v["status"] for v in data["membership"])
        item = {
            "key": data["key"],
            "pair": data["pair"],
            "cone": data["cone"],
            "status": data["status"],
            "triples": data["triples"],
            "checks": {
                "membership": membership_status,
                "f1": data["f1"]["status"],
                "f2": data["f2"]["status"],
                "minimality": data["minimality"]["status"],
            },
            "witnesses": {
                "membership": [v for v in data["membership"] if v["status"] != "pass"],
                "f1": data["f1"]["failure"],
                "f2": data["f2"],
                "minimality": data["minimality"],
            },
            "notes": data["notes"],
        }
        # null unless report.timings is set
        item["timings"] = {k: round(v, 4) for k, v in report.timings.items()} if config.report.timings else None
        items.append(item)
    return ReportDocument(
        command="verify",
        digest=input_digest("verify", _options(args, config), text),
        items=items,
        status=worst_status(i["status"] for i in items),
    )


def _module(doc: Optional[InputDocument]):
    if doc is None or doc.module is None:
        raise UsageError("this command needs an --input file with a [module] section")
    return doc.module


def _cones(args: Namespace, pair: SphericalPair) -> list[StdConeId]:
    return [c for c in cone_ids(pair) if _matches(args, pair, c)]


def cmd_series(args: Namespace, config: Config, text: str, doc: Optional[InputDocument]) -> ReportDocument:
    """
    Reduce the module's series on each selected cone, specialize it and compare with the truncation.
    """
    module = _module(doc)
    pair = module.pair
    ring = module.ring
    order = config.series.order
    q = config.period.q_value
    engine = SeriesEngine(pair, ring, doc.structures or None)
    weights = specialization_weights(engine.chart.names, pair.n_exp_map)
    items = []
    for cone in _cones(args, pair):
        item: dict = {"key": f"{pair.key}/{cone.label(pair)}", "cone": cone.label(pair)}
        try:
            rs = engine.series(module.coefficient_for(cone.sector), cone)
        except (SeriesError, ConeError, PeriodError) as err:
            log.warning(f"{item['key']}: {err}")
            item.update(status="inconclusive", error=str(err))
            items.append(item)
            continue
        match = rs.expand(order) == truncate(module, cone, order)
        Q, P = rs.specialize(q, weights)
        item.update(
            numerator=str(rs.numerator),
            factors=[{"annihilator": str(a), "shift": list(sigma)} for a, sigma in rs.annihilators()],
            specialization={"q": str(q), "Q": str(Q.as_expr()), "P": str(P.as_expr())},
            oracle={"order": order, "match": match, "label": f"{'match' if match else 'MISMATCH'} @{order}"},
            status="pass" if match else "fail",
        )
        if ring is not QQ_RING:
            family = FamilyEvaluation(Q, P, ring)
            evaluations = []
            for u0 in args.eval_u:
                try:
                    result = family.at(u0)
                    evaluations.append({"u": str(u0), "status": result.status, "result": result.describe()})
                except (SeriesError, PeriodError) as err:
                    evaluations.append({"u": str(u0), "status": "degenerate", "result": str(err)})
            item["evaluations"] = evaluations
        items.append(item)
    return ReportDocument(
        command="series",
        digest=input_digest("series", _options(args, config), text),
        items=items,
        status=worst_status(i["status"] for i in items),
    )


def _eval_points(args: Namespace, module) -> list[EvalPoint]:
    if module.ring is QQ_RING:
        return [EvalPoint(QQ_RING)]
    if not args.eval_u:
        raise UsageError("a family module needs at least one --eval-u point")
    return [EvalPoint(module.ring, u0) for u0 in args.eval_u]


def cmd_period(args: Namespace, config: Config, text: str, doc: Optional[InputDocument]) -> ReportDocument:
    """
    Temperedness margin, assembled period and brute-force partial sum of the module.
    """
    module = _module(doc)
    pair = module.pair
    decimals = config.report.decimals
    volume = doc.volume if doc.volume is not None else default_volumes(pair, config.period.q_value)
    if args.q is not None:
        volume = VolumeConfig(args.q, volume.constants)
    order = config.period.brute_order
    items = []
    for x in _eval_points(args, module):
        item: dict = {"key": f"{pair.key} [{x.label()}]", "q": str(volume.q)}
        try:
            point = module if module.ring is QQ_RING else module.evaluated(x, QQ_RING)
            margin = temperedness_margin(point, volume.q)
            item["margin"] = None if margin is None else fraction_text(margin, decimals)
            if margin is None and not config.period.skip_margin_check:
                item.update(status="inconclusive", error="margin violated")
                items.append(item)
                continue
            breakdown = assemble_period(module, volume, doc.structures or None, x)
        except (SeriesError, ConeError, PeriodError) as err:
            log.warning(f"{item['key']}: {err}")
            item.update(status="inconclusive", error=str(err))
            items.append(item)
            continue

        item["summands"] = [
            {
                "cone": s.label,
                "constant": fraction_text(s.constant, decimals),
                "status": s.result.status,
                "value": s.result.describe() if isinstance(s.result, Pole) else fraction_text(s.result.value, decimals),
            }
            for s in breakdown.summands
        ]
        result = breakdown.result
        if isinstance(result, Pole):
            item.update(status="fail", result={"status": "pole", "location": result.where, "detail": result.describe()})
            items.append(item)
            continue
        brute = brute_force_period(module, volume, order, x)
        item.update(
            status="pass",
            result={"status": "value", "value": fraction_text(result.value, decimals)},
            brute_force={
                "order": order,
                "value": fraction_text(brute, decimals),
                "difference": fraction_text(abs(result.value - brute), decimals),
            },
        )
        items.append(item)
    return ReportDocument(
        command="period",
        digest=input_digest("period", _options(args, config), text),
        items=items,
        status=worst_status(i["status"] for i in items),
    )


COMMAND_HANDLERS: dict[str, Callable[..., ReportDocument]] = {
    "verify": cmd_verify,
    "catalog": cmd_catalog,
    "series": cmd_series,
    "period": cmd_period,
}


def write_report(doc: ReportDocument, config: Config, args: Namespace):
    if config.report.format == ReportFormat.JSON:
        output = doc.to_json(timestamp=args.timestamp)
    else:
        output = render_text(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(output)
    else:
        sys.stdout.write(output)


def run_reduction(argv: Optional[list[str]] = None) -> int:
    """
    Command-line entry point.

    :return: 0 if every item passed, 1 on any failure, 2 on inconclusive
        results and input or usage errors.
    """
    args = parse_arguments(argv)
    config = load_config(args)
    if not config:
        return 2

    setup(config.log, force=True)
    if args.show_config:
        show_config()
        return 0

    try:
        text, doc = read_input(args.input)
        report = COMMAND_HANDLERS[args.command](args, config, text, doc)
    except ParseError as err:
        print(f"Input error: {err.message}", file=sys.stderr)
        return 2
    except (UsageError, RootDatumError, ReductionError, ConeError, PeriodError) as err:
        print(f"Error: {err}", file=sys.stderr)
        return 2

    if args.timestamp:
        report.stamp()
    write_report(report, config, args)
    log.info(f"{args.command}: {report.status} ({len(report.items)} item(s))")
    return exit_code(report.status)


__all__ = ["run_reduction", "cmd_verify", "cmd_catalog", "cmd_series", "cmd_period", "select_structures"]


if __name__ == "__main__":
    sys.exit(run_reduction())
