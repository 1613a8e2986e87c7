"""
Report documents: pydantic models with a digest over the inputs, rendered
as JSON or through the text templates.
"""

import hashlib
import json
from datetime import datetime, timezone
from fractions import Fraction
from os.path import dirname, join
from typing import Any, Optional

from pydantic import BaseModel, Field

from core.config.version import get_version
from core.templates.render import Renderer

TEMPLATE_DIR = join(dirname(dirname(__file__)), "templates", "report")

STATUS_ORDER = ("pass", "inconclusive", "fail")


class ReportDocument(BaseModel):
    """
    Output of one command run.

    `generated_at` is the only run-dependent field and is left out of the
    digest and of the JSON output unless requested.
    """

    command: str
    version: str = Field(default_factory=get_version)
    digest: str
    items: list[dict[str, Any]] = Field(default_factory=list)
    status: str = "pass"
    generated_at: Optional[str] = None

    def to_json(self, timestamp: bool = False) -> str:
        exclude = None if timestamp else {"generated_at"}
        return self.model_dump_json(indent=2, exclude=exclude) + "\n"

    def stamp(self) -> "ReportDocument":
        self.generated_at = datetime.now(timezone.utc).isoformat()
        return self


def input_digest(command: str, options: dict[str, Any], text: str = "") -> str:
    """
    SHA-256 over the command, its options and the input file contents.
    """
    canonical = json.dumps({"command": command, "options": options, "input": text}, sort_keys=True, default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def worst_status(statuses) -> str:
    worst = "pass"
    for s in statuses:
        if s not in STATUS_ORDER:
            s = "fail"
        if STATUS_ORDER.index(s) > STATUS_ORDER.index(worst):
            worst = s
    return worst


def exit_code(status: str) -> int:
    return {"pass": 0, "fail": 1}.get(status, 2)


def fraction_text(value: Fraction, decimals: bool = False) -> str:
    text = str(value)
    if decimals and value.denominator != 1:
        text += f" (~{float(value):.10g})"
    return text


def render_text(doc: ReportDocument) -> str:
    renderer = Renderer(TEMPLATE_DIR)
    return renderer.render_template(f"{doc.command}.txt", {"doc": doc})


__all__ = [
    "ReportDocument",
    "input_digest",
    "worst_status",
    "exit_code",
    "fraction_text",
    "render_text",
]
