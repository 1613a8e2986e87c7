import os.path
import sys
from argparse import ArgumentParser, ArgumentTypeError, Namespace
from fractions import Fraction
from typing import Optional

from pydantic import ValidationError

from core.cli.input_format import InputDocument, ParseError, parse_input
from core.config import Config, ReportFormat, get_config, loader
from core.config.version import get_version

COMMANDS = ("verify", "catalog", "series", "period")


def parse_fraction(value: str) -> Fraction:
    """
    Parse an exact rational command-line value such as "3", "-1" or "1/2".

    :param value: Argument value.
    :return: The value as a Fraction.
    """
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise ArgumentTypeError(f"Invalid rational number: {value}")


def parse_arguments(argv: Optional[list[str]] = None) -> Namespace:
    """
    Parse command-line arguments.

    Available arguments:
        command: One of verify, catalog, series, period
        --help: Show the help message
        --config: Path to the configuration file
        --show-config: Output the configuration to stdout
        --level: Log level (debug,info,warning,error,critical)
        --version: Show the version and exit
        --input: Input file with a pair, structures, a module and volumes
        --catalog: Catalog key (or key prefix, or "all") to select structures
        --pair: Catalog pair identifier (e.g. gl2, gl4gl2)
        --theta: Theta_H as root names separated by "," or "+" ("empty", "full")
        --sector: Sector (plus, zero, minus, none)
        --nmax: Largest n for (F1) checks
        --q: Residue field size
        --order: Truncation order (series) or brute-force order (period)
        --eval-u: Evaluation point u0 for family modules (repeatable)
        --format: Report format (text, json)
        --out: Write the report to a file instead of stdout
        --float: Add decimal approximations to exact fractions
        --skip-margin: Assemble periods even when the temperedness margin fails
        --timestamp: Include the generation time in JSON reports
    :return: Parsed arguments object.
    """
    version = get_version()

    parser = ArgumentParser(prog="reduction-core")
    parser.add_argument("command", choices=COMMANDS, nargs="?", default="verify", help="Command to run")
    parser.add_argument("--config", help="Path to the configuration file", required=False)
    parser.add_argument("--show-config", help="Output the configuration to stdout", action="store_true")
    parser.add_argument("--level", help="Log level (debug,info,warning,error,critical)", required=False)
    parser.add_argument("--version", action="version", version=version)
    parser.add_argument("--input", help="Input file", required=False)
    parser.add_argument("--catalog", help="Catalog key, key prefix or 'all'", required=False)
    parser.add_argument("--pair", help="Catalog pair identifier", required=False)
    parser.add_argument("--theta", help="Theta_H (root names, 'empty' or 'full')", required=False)
    parser.add_argument("--sector", help="Sector", choices=["plus", "zero", "minus", "none"], required=False)
    parser.add_argument("--nmax", help="Largest n for (F1) checks", type=int, required=False)
    parser.add_argument("--q", help="Residue field size", type=parse_fraction, required=False)
    parser.add_argument("--order", help="Truncation order", type=int, required=False)
    parser.add_argument("--eval-u", help="Evaluation point u0", type=parse_fraction, action="append", default=[])
    parser.add_argument("--format", help="Report format", choices=[f.value for f in ReportFormat], required=False)
    parser.add_argument("--out", help="Write the report to this file", required=False)
    parser.add_argument("--float", help="Add decimal approximations", action="store_true")
    parser.add_argument("--skip-margin", help="Ignore a failed temperedness margin", action="store_true")
    parser.add_argument("--timestamp", help="Include the generation time in JSON reports", action="store_true")
    return parser.parse_args(argv)


def load_config(args: Namespace) -> Optional[Config]:
    """
    Load the JSON configuration file and apply command-line arguments.

    Guard ranges (n_max, truncation order) are enforced by re-validating
    the combined configuration.

    :param args: Command-line arguments.
    :return: Configuration object, or None if config couldn't be loaded.
    """
    config = get_config()
    if args.config:
        if not os.path.isfile(args.config):
            print(f"Configuration file not found: {args.config}", file=sys.stderr)
            return None
        try:
            config = loader.load(args.config)
        except ValueError as err:
            print(f"Error parsing config file {args.config}: {err}", file=sys.stderr)
            return None

    data = config.model_dump(mode="json")
    if args.level:
        data["log"]["level"] = args.level.upper()
    if args.nmax is not None:
        data["verify"]["n_max"] = args.nmax
    if args.q is not None:
        data["period"]["q"] = str(args.q)
    if args.order is not None:
        if args.command == "period":
            data["period"]["brute_order"] = args.order
        else:
            data["series"]["order"] = args.order
    if args.format:
        data["report"]["format"] = args.format
    if args.float:
        data["report"]["decimals"] = True
    if args.skip_margin:
        data["period"]["skip_margin_check"] = True

    try:
        config = Config.model_validate(data)
    except ValidationError as err:
        print(f"Configuration error: {err}", file=sys.stderr)
        return None

    loader.config = config
    return config


def read_input(path: Optional[str]) -> tuple[str, Optional[InputDocument]]:
    """
    Read and parse the input file, if one was given.

    :raises ParseError: If the file can't be read or parsed.
    """
    if not path:
        return "", None
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as err:
        raise ParseError(f"cannot read {path}: {err.strerror}")
    return text, parse_input(text)


def show_config():
    """
    Print the current configuration to stdout.
    """
    cfg = get_config()
    print(cfg.model_dump_json(indent=2))


__all__ = ["parse_arguments", "load_config", "read_input", "show_config", "parse_fraction", "COMMANDS"]
