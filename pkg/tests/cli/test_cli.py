import json
from argparse import ArgumentTypeError
from fractions import Fraction
from unittest.mock import patch

import pytest

from core.cli.helpers import load_config, parse_arguments, parse_fraction, show_config
from core.cli.input_format import InputDocument, ParseError, parse_input, serialize
from core.cli.main import run_reduction
from core.cli.report import ReportDocument, exit_code, fraction_text, input_digest, render_text, worst_status
from core.cones.constraints import Sector
from core.config import Config, ReportFormat, loader
from core.reduction.catalog import catalog
from core.series.coefficients import ExpPolyCoefficient, ToyModule
from core.series.rings import FAMILY_RING

TRIPLE_MODULE = """
# triple product toy module
[pair]
name = triple

[module]
term = 1; chi = {lam}
"""


def write_input(tmp_path, text, name="input.txt"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


@patch("core.cli.helpers.ArgumentParser")
def test_parse_arguments(mock_ArgumentParser):
    parser = mock_ArgumentParser.return_value

    parse_arguments()

    flags = set(call[0][0] for call in parser.add_argument.call_args_list)
    assert flags == {
        "command",
        "--config",
        "--show-config",
        "--level",
        "--version",
        "--input",
        "--catalog",
        "--pair",
        "--theta",
        "--sector",
        "--nmax",
        "--q",
        "--order",
        "--eval-u",
        "--format",
        "--out",
        "--float",
        "--skip-margin",
        "--timestamp",
    }

    parser.parse_args.assert_called_once_with(None)


def test_parse_arguments_defaults():
    args = parse_arguments([])

    assert args.command == "verify"
    assert args.eval_u == []
    assert args.q is None


@pytest.mark.parametrize(
    ("value", "expected"),
    [
        ("3", Fraction(3)),
        ("-1", Fraction(-1)),
        ("1/2", Fraction(1, 2)),
    ],
)
def test_parse_fraction(value, expected):
    assert parse_fraction(value) == expected


@pytest.mark.parametrize("value", ["abc", "1/0", ""])
def test_parse_fraction_invalid(value):
    with pytest.raises(ArgumentTypeError):
        parse_fraction(value)


def test_load_config_not_found(tmp_path, capsys):
    config_file = tmp_path / "config.json"
    config = load_config(parse_arguments(["--config", str(config_file)]))

    assert config is None
    assert f"Configuration file not found: {config_file}" in capsys.readouterr().err


def test_load_config_not_json(tmp_path, capsys):
    config_file = tmp_path / "config.json"
    config_file.write_text("not really a JSON file", encoding="utf-8")

    config = load_config(parse_arguments(["--config", str(config_file)]))

    assert config is None
    assert f"Error parsing config file {config_file}" in capsys.readouterr().err


def test_load_config_defaults(tmp_path):
    config_file = tmp_path / "config.json"
    config_file.write_text("{}", encoding="utf-8")

    config = load_config(parse_arguments(["--config", str(config_file)]))

    assert config == Config()
    assert loader.config is config


def test_load_config_overridden(tmp_path):
    args = parse_arguments(
        ["period", "--level", "info", "--nmax", "3", "--q", "5/2", "--order", "50", "--format", "json", "--float"]
    )
    config = load_config(args)

    assert config.log.level == "INFO"
    assert config.verify.n_max == 3
    assert config.period.q_value == Fraction(5, 2)
    assert config.period.brute_order == 50
    assert config.series.order == Config().series.order
    assert config.report.format == ReportFormat.JSON
    assert config.report.decimals is True


@pytest.mark.parametrize(
    "argv",
    [
        ["--nmax", "0"],
        ["--nmax", "99"],
        ["--q", "1"],
        ["series", "--order", "500"],
    ],
)
def test_load_config_out_of_range(argv, capsys):
    assert load_config(parse_arguments(argv)) is None
    assert "Configuration error" in capsys.readouterr().err


def test_show_default_config(capsys):
    loader.config = Config()
    show_config()
    assert json.loads(capsys.readouterr().out) == Config().model_dump(mode="json")


@pytest.mark.parametrize(
    ("text", "line", "fragment"),
    [
        ("", 1, "no sections"),
        ("# only a comment\n", 1, "no sections"),
        ("[pair]\nname = e8\n", 2, "e8"),
        ("[pair\n", 1, "unterminated"),
        ("[module]\nterm = 1; chi = 2\n", 1, "after the [pair]"),
        ("[pair]\nname = triple\ncolour = red\n", 3, "unknown key"),
        ("[pair]\nname = waldspurger\n[structure]\ntheta = empty\nsector = up\n", 5, "unknown sector"),
        ("[pair]\nname = triple\n[module]\nterm = 1; chi = 1,2\n", 4, "needs 1 values"),
        ("[pair]\nname = triple\n[module]\nterm = 1; chi = 0\n", 3, "not a unit"),
        ("[pair]\nname = triple\n[structure]\ntheta = empty\ntriple = (empty; w9; 1)\n", 5, "Weyl element"),
    ],
)
def test_parse_errors(text, line, fragment):
    with pytest.raises(ParseError) as exc:
        parse_input(text)

    assert exc.value.line == line
    assert fragment in exc.value.message


def test_parse_error_column():
    with pytest.raises(ParseError) as exc:
        parse_input("[pair]\nname = waldspurger\n[structure]\ntheta = empty\nsector = up\n")

    assert exc.value.col == 10
    assert "plus" in exc.value.expected


def test_parse_module():
    doc = parse_input(
        "[pair]\nname = waldspurger\n"
        "[module]\nring = family\nterm = 2; chi = u/10; x1 + 1\n"
        "[module]\nsector = minus\nterm = 1; chi = 3\n"
        "[volume]\nq = 5\nconstant = empty; 4/3\n"
    )

    assert doc.module.ring is FAMILY_RING
    assert len(doc.module.coefficient.terms[0].polynomial) == 2
    assert [s for s, _ in doc.module.sectors] == [Sector.MINUS]
    assert doc.volume.q == 5
    assert doc.volume.constant(frozenset()) == Fraction(4, 3)


@pytest.mark.parametrize("structure", [s for s in catalog() if s.entries], ids=lambda s: s.key)
def test_structures_survive_serialization(structure):
    doc = InputDocument(pair=structure.pair, structures=[structure])
    parsed = parse_input(serialize(doc))

    assert parsed.pair == structure.pair
    assert parsed.structures == [structure]


def test_module_survives_serialization():
    pair = catalog()[0].pair
    module = ToyModule(pair, ExpPolyCoefficient.build(FAMILY_RING, 1, [("u/10", ["1/u"], {(1,): 2, (0,): 1})]))
    doc = InputDocument(pair=pair, module=module)

    assert parse_input(serialize(doc)).module == module


def test_report_digest_is_deterministic():
    a = input_digest("verify", {"n": 1, "pair": "gl2"}, "text")
    b = input_digest("verify", {"pair": "gl2", "n": 1}, "text")

    assert a == b
    assert a != input_digest("verify", {"n": 2, "pair": "gl2"}, "text")


@pytest.mark.parametrize(
    ("statuses", "worst", "code"),
    [
        ([], "pass", 0),
        (["pass", "pass"], "pass", 0),
        (["pass", "inconclusive"], "inconclusive", 2),
        (["inconclusive", "fail", "pass"], "fail", 1),
        (["weird"], "fail", 1),
    ],
)
def test_worst_status(statuses, worst, code):
    assert worst_status(statuses) == worst
    assert exit_code(worst) == code


def test_fraction_text():
    assert fraction_text(Fraction(3)) == "3"
    assert fraction_text(Fraction(1, 3)) == "1/3"
    assert fraction_text(Fraction(1, 4), decimals=True) == "1/4 (~0.25)"


def test_report_json_omits_timestamp():
    doc = ReportDocument(command="catalog", digest="abc").stamp()

    assert "generated_at" not in json.loads(doc.to_json())
    assert json.loads(doc.to_json(timestamp=True))["generated_at"] == doc.generated_at


def test_render_text_report():
    doc = ReportDocument(
        command="catalog",
        digest="abc",
        items=[{"key": "wal/plus", "pair": "waldspurger", "cone": "empty/plus", "triples": [], "notes": []}],
    )
    text = render_text(doc)

    assert "wal/plus" in text
    assert "1 structure(s)" in text


def test_run_catalog(capsys):
    assert run_reduction(["catalog", "--catalog", "triple", "--format", "json"]) == 0

    data = json.loads(capsys.readouterr().out)
    assert data["command"] == "catalog"
    assert [i["key"] for i in data["items"]] == ["triple/empty", "triple/full"]


def test_run_catalog_by_pair(capsys):
    assert run_reduction(["catalog", "--pair", "waldspurger", "--sector", "minus", "--format", "json"]) == 0
    assert [i["key"] for i in json.loads(capsys.readouterr().out)["items"]] == ["wal/minus"]


def test_run_verify(capsys):
    assert run_reduction(["verify", "--catalog", "triple", "--nmax", "2", "--format", "json"]) == 0

    data = json.loads(capsys.readouterr().out)
    assert data["status"] == "pass"
    assert data["items"][0]["checks"] == {"membership": "pass", "f1": "pass", "f2": "pass", "minimality": "pass"}
    assert data["items"][0]["timings"] is None


def test_run_verify_with_timings(tmp_path, capsys):
    config_file = tmp_path / "config.json"
    config_file.write_text('{"report": {"format": "json", "timings": true}}', encoding="utf-8")

    assert run_reduction(["verify", "--catalog", "triple/empty", "--nmax", "2", "--config", str(config_file)]) == 0

    timings = json.loads(capsys.readouterr().out)["items"][0]["timings"]
    assert set(timings) == {"membership", "f1", "f2", "minimality"}
    assert all(v >= 0 for v in timings.values())


def test_run_verify_text_to_file(tmp_path):
    out = tmp_path / "report.txt"
    assert run_reduction(["verify", "--catalog", "wal", "--nmax", "2", "--out", str(out)]) == 0
    assert "overall PASS" in out.read_text(encoding="utf-8")


def test_run_verify_broken_structure(tmp_path, capsys):
    path = write_input(
        tmp_path, "[pair]\nname = waldspurger\n[structure]\ntheta = empty\nsector = plus\ntriple = (empty; w; 1)\n"
    )

    assert run_reduction(["verify", "--input", path, "--nmax", "2", "--format", "json"]) == 1
    item = json.loads(capsys.readouterr().out)["items"][0]
    assert item["checks"]["membership"] == "fail"
    assert item["witnesses"]["membership"][0]["condition"] == "a"


def test_run_series(tmp_path, capsys):
    path = write_input(tmp_path, TRIPLE_MODULE.format(lam="1/2"))

    assert run_reduction(["series", "--input", path, "--order", "20", "--q", "3", "--format", "json"]) == 0
    items = json.loads(capsys.readouterr().out)["items"]
    empty = next(i for i in items if i["cone"] == "empty")
    assert empty["oracle"]["label"] == "match @20"
    assert empty["specialization"]["P"] == "1 - 3*S/2"


def test_run_period(tmp_path, capsys):
    path = write_input(tmp_path, TRIPLE_MODULE.format(lam="1/5"))

    assert run_reduction(["period", "--input", path, "--q", "3", "--order", "100", "--format", "json"]) == 0
    item = json.loads(capsys.readouterr().out)["items"][0]
    assert item["margin"] == "2/5"
    assert item["result"] == {"status": "value", "value": "3"}


def test_run_period_margin_violated(tmp_path, capsys):
    path = write_input(tmp_path, TRIPLE_MODULE.format(lam="1/2"))

    assert run_reduction(["period", "--input", path, "--q", "3", "--format", "json"]) == 2
    item = json.loads(capsys.readouterr().out)["items"][0]
    assert item["status"] == "inconclusive"
    assert item["error"] == "margin violated"


def test_run_period_pole(tmp_path, capsys):
    path = write_input(tmp_path, TRIPLE_MODULE.format(lam="1/3"))

    assert run_reduction(["period", "--input", path, "--q", "3", "--skip-margin", "--format", "json"]) == 1
    item = json.loads(capsys.readouterr().out)["items"][0]
    assert item["result"]["status"] == "pole"
    assert item["result"]["location"] == "empty"


def test_run_missing_input(tmp_path, capsys):
    assert run_reduction(["period", "--input", str(tmp_path / "missing.txt")]) == 2
    assert "Input error" in capsys.readouterr().err


def test_run_period_without_module(capsys):
    assert run_reduction(["period"]) == 2
    assert "[module]" in capsys.readouterr().err


def test_run_unknown_catalog_key(capsys):
    assert run_reduction(["verify", "--catalog", "table9"]) == 2
    assert "table9" in capsys.readouterr().err


def test_run_is_deterministic(capsys):
    run_reduction(["catalog", "--format", "json"])
    first = capsys.readouterr().out
    run_reduction(["catalog", "--format", "json"])
    assert capsys.readouterr().out == first


@pytest.mark.parametrize("command", ["series", "period"])
def test_run_text_reports(command, tmp_path, capsys):
    path = write_input(tmp_path, TRIPLE_MODULE.format(lam="1/5"))

    assert run_reduction([command, "--input", path, "--q", "3", "--order", "20", "--float"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("reduction-core")
    assert "overall PASS" in out
