import codecs
import json
from fractions import Fraction
from os.path import dirname, join

import pytest
from pydantic import ValidationError

from core.config import MAX_N, MAX_ORDER, Config, ConfigLoader, ReportFormat, get_config, loader

test_config_data = {
    "log": {"level": "DEBUG"},
    "verify": {"n_max": 3, "m_list": [1], "b_list": [8, 16]},
    "series": {"order": 25},
    "period": {"q": "7/2", "brute_order": 50},
    "report": {"format": "json", "decimals": True},
}


def test_parse_config():
    config = ConfigLoader.from_json(json.dumps(test_config_data))

    assert config.log.level == "DEBUG"
    assert config.verify.n_max == 3
    assert config.verify.b_list == [8, 16]
    assert config.series.order == 25
    assert config.period.q_value == Fraction(7, 2)
    assert config.period.brute_order == 50
    assert config.report.format == ReportFormat.JSON
    assert config.report.decimals is True


def test_builtin_defaults():
    config = ConfigLoader.from_json("{}")

    assert config.log.level == "WARNING"
    assert config.log.output is None
    assert config.verify.n_max == 4
    assert config.verify.m_list == [1, 3]
    assert config.verify.b_list == [12, 24]
    assert config.series.order == 40
    assert config.period.q_value == 3
    assert config.period.brute_order == 200
    assert config.period.skip_margin_check is False
    assert config.report.format == ReportFormat.TEXT


@pytest.mark.parametrize(
    ("data", "location"),
    [
        ({"verify": {"n_max": MAX_N + 1}}, "verify.n_max"),
        ({"verify": {"n_max": 0}}, "verify.n_max"),
        ({"series": {"order": MAX_ORDER + 1}}, "series.order"),
        ({"period": {"q": "1"}}, "period.q"),
        ({"period": {"q": "three"}}, "period.q"),
        ({"verify": {"m_list": [0, 1]}}, "verify.m_list"),
        ({"verify": {"b_list": []}}, "verify.b_list"),
        ({"report": {"format": "html"}}, "report.format"),
        ({"log": {"level": "VERBOSE"}}, "log.level"),
        ({"solver": {}}, "solver"),
    ],
)
def test_invalid_config(data, location):
    with pytest.raises(ValidationError) as einfo:
        ConfigLoader.from_json(json.dumps(data))

    assert location in str(einfo.value)


def test_bounds_are_sorted_and_deduplicated():
    config = ConfigLoader.from_json(json.dumps({"verify": {"m_list": [3, 1, 3]}}))
    assert config.verify.m_list == [1, 3]


def test_single_box_size_is_accepted():
    config = ConfigLoader.from_json(json.dumps({"verify": {"b_list": [12, 12]}}))
    assert config.verify.b_list == [12]


def test_load_from_file_with_comments():
    config_path = join(dirname(__file__), "testconfig.json")

    config = ConfigLoader().load(config_path)
    assert config.log.level == "INFO"
    assert config.verify.n_max == 2
    assert config.verify.m_list == [1, 3]
    assert config.period.q_value == 5


def test_default_config():
    loader.config = Config()
    config = get_config()
    assert config.verify.n_max == 4
    assert config.log.level == "WARNING"


@pytest.mark.parametrize(
    ("encoding", "bom"),
    [
        ("utf-8", None),
        ("utf-16", None),
        ("utf-16-le", codecs.BOM_UTF16_LE),
        ("utf-16-be", codecs.BOM_UTF16_BE),
    ],
)
def test_encodings(encoding, bom, tmp_path):
    config_json = json.dumps(test_config_data)
    config_path = tmp_path / "config.json"

    with open(config_path, "wb") as f:
        if bom:
            f.write(bom)
        f.write(config_json.encode(encoding))

    config = ConfigLoader().load(config_path)
    assert config.series.order == 25
