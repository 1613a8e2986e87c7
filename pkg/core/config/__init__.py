from enum import Enum
from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

# Guard ranges for batch runs
MAX_N = 8
MAX_RANK = 6
MAX_ORDER = 200

FRACTION_PATTERN = r"^-?\d+(/\d+)?$"


class _StrictModel(BaseModel):
    """
    Pydantic parser configuration options.
    """

    model_config = ConfigDict(
        extra="forbid",
    )


class ReportFormat(str, Enum):
    """
    Supported report output formats.
    """

    TEXT = "text"
    JSON = "json"


class LogConfig(_StrictModel):
    """
    Configuration for logging.
    """

    level: str = Field(
        "WARNING",
        description="Logging level",
        pattern=r"^(DEBUG|INFO|WARNING|ERROR|CRITICAL)$",
    )
    format: str = Field(
        "%(asctime)s %(levelname)s [%(name)s] %(message)s",
        description="Logging format",
    )
    output: Optional[str] = Field(
        None,
        description="Output file for logs (if not specified, logs are printed to stderr)",
    )


class VerifyConfig(_StrictModel):
    """
    Bounds used when machine-checking reduction structures.
    """

    n_max: int = Field(4, description="Largest n for which (F1) decompositions are checked", ge=1, le=MAX_N)
    m_list: list[int] = Field([1, 3], description="Root bounds M used by the enumeration cross-check", min_length=1)
    b_list: list[int] = Field([12, 24], description="Box sizes used by the enumeration cross-check", min_length=1)
    node_budget: int = Field(200_000, description="Upper limit on integer search nodes per query", ge=1)

    @field_validator("m_list", "b_list")
    @classmethod
    def validate_positive(cls, v: list[int]) -> list[int]:
        if any(x < 1 for x in v):
            raise ValueError("all bounds must be positive integers")
        return sorted(set(v))


class SeriesConfig(_StrictModel):
    """
    Configuration for series reduction and oracle comparison.
    """

    order: int = Field(40, description="Total degree used for truncation and expansion", ge=0, le=MAX_ORDER)


class PeriodConfig(_StrictModel):
    """
    Configuration for period assembly.
    """

    q: str = Field("3", description="Residue field size (exact rational > 1)", pattern=FRACTION_PATTERN)
    brute_order: int = Field(200, description="Truncation used by the brute-force period", ge=0, le=MAX_ORDER)
    skip_margin_check: bool = Field(False, description="Assemble periods even when the temperedness margin fails")

    @field_validator("q")
    @classmethod
    def validate_q(cls, v: str) -> str:
        if Fraction(v) <= 1:
            raise ValueError("q must be greater than 1")
        return v

    @property
    def q_value(self) -> Fraction:
        return Fraction(self.q)


class ReportConfig(_StrictModel):
    """
    Configuration for report output.
    """

    format: ReportFormat = Field(ReportFormat.TEXT, description="Report format")
    decimals: bool = Field(False, description="Print decimal approximations next to exact fractions")
    timings: bool = Field(False, description="Record per-check timings (makes JSON output run-dependent)")


class Config(_StrictModel):
    """
    Reduction Core configuration
    """

    log: LogConfig = LogConfig()
    verify: VerifyConfig = VerifyConfig()
    series: SeriesConfig = SeriesConfig()
    period: PeriodConfig = PeriodConfig()
    report: ReportConfig = ReportConfig()


class ConfigLoader:
    """
    Configuration loader takes care of loading and parsing configuration files.

    The default loader is already initialized as `core.config.loader`. To
    load the configuration from a file, use `core.config.loader.load(path)`.

    To get the current configuration, use `core.config.get_config()`.
    """

    config: Config
    config_path: Optional[str]

    def __init__(self):
        self.config_path = None
        self.config = Config()

    @staticmethod
    def _remove_json_comments(json_str: str) -> str:
        """
        Remove comments from a JSON string.

        Removes all lines that start with "//" from the JSON string.

        :param json_str: JSON string with comments.
        :return: JSON string without comments.
        """
        return "\n".join([line for line in json_str.splitlines() if not line.strip().startswith("//")])

    @classmethod
    def from_json(cls: "ConfigLoader", config: str) -> Config:
        """
        Parse JSON Into a Config object.

        :param config: JSON string to parse.
        :return: Config object.
        """
        return Config.model_validate_json(cls._remove_json_comments(config), strict=True)

    def load(self, path: str) -> Config:
        """
        Load a configuration from a file.

        :param path: Path to the configuration file.
        :return: Config object.
        """
        with open(path, "rb") as f:
            raw_config = f.read()

        if b"\x00" in raw_config:
            encoding = "utf-16"
        else:
            encoding = "utf-8"

        text_config = raw_config.decode(encoding)
        self.config = self.from_json(text_config)
        self.config_path = path
        return self.config


loader = ConfigLoader()


def get_config() -> Config:
    """
    Return current configuration.

    :return: Current configuration object.
    """
    return loader.config


__all__ = ["loader", "get_config"]
