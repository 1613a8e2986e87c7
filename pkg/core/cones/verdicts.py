"""
Outcomes of exact checks.

Failure verdicts carry a witness that can be re-checked by plain membership
tests; `Inconclusive` is only produced when a search budget ran out.
"""

from dataclasses import dataclass
from typing import Iterable, Optional

from core.roots.groups import Vector


@dataclass(frozen=True)
class Verdict:
    @property
    def status(self) -> str:
        return "fail"

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def kind(self) -> str:
        return "fail"

    def describe(self) -> str:
        return self.kind

    def to_dict(self) -> dict:
        return {"status": self.status, "kind": self.kind, "detail": self.describe()}


@dataclass(frozen=True)
class Pass(Verdict):
    @property
    def status(self) -> str:
        return "pass"

    @property
    def kind(self) -> str:
        return "pass"


@dataclass(frozen=True)
class Inconclusive(Verdict):
    reason: str

    @property
    def status(self) -> str:
        return "inconclusive"

    @property
    def kind(self) -> str:
        return "inconclusive"

    def describe(self) -> str:
        return self.reason


@dataclass(frozen=True)
class FailCover(Verdict):
    witness: Vector

    @property
    def kind(self) -> str:
        return "cover"

    def describe(self) -> str:
        return f"{self.witness} lies in the region but in none of the pieces"

    def to_dict(self) -> dict:
        return {**super().to_dict(), "witness": list(self.witness)}


@dataclass(frozen=True)
class FailDisjoint(Verdict):
    witness: Vector
    first: int
    second: int

    @property
    def kind(self) -> str:
        return "disjoint"

    def describe(self) -> str:
        return f"{self.witness} lies in pieces {self.first} and {self.second}"

    def to_dict(self) -> dict:
        return {**super().to_dict(), "witness": list(self.witness), "pieces": [self.first, self.second]}


@dataclass(frozen=True)
class FailContainment(Verdict):
    witness: Vector
    piece: int

    @property
    def kind(self) -> str:
        return "containment"

    def describe(self) -> str:
        return f"{self.witness} lies in piece {self.piece} but outside the region"

    def to_dict(self) -> dict:
        return {**super().to_dict(), "witness": list(self.witness), "pieces": [self.piece]}


@dataclass(frozen=True)
class FailFinite(Verdict):
    """
    The region is infinite: `base + k * direction` stays inside for all k >= 0.
    """

    direction: Vector
    base: Optional[Vector] = None

    @property
    def kind(self) -> str:
        return "finite"

    def describe(self) -> str:
        start = f" from {self.base}" if self.base is not None else ""
        return f"region is infinite along {self.direction}{start}"

    def to_dict(self) -> dict:
        d = {**super().to_dict(), "witness": list(self.direction)}
        if self.base is not None:
            d["base"] = list(self.base)
        return d


@dataclass(frozen=True)
class FailMinimal(Verdict):
    index: int
    label: str = ""

    @property
    def kind(self) -> str:
        return "minimality"

    def describe(self) -> str:
        return f"region stays finite without triple {self.index} {self.label}".rstrip()

    def to_dict(self) -> dict:
        return {**super().to_dict(), "triple": self.index}


@dataclass(frozen=True)
class FailMembership(Verdict):
    condition: str
    detail: str

    @property
    def kind(self) -> str:
        return "membership"

    def describe(self) -> str:
        return f"condition ({self.condition}): {self.detail}"

    def to_dict(self) -> dict:
        return {**super().to_dict(), "condition": self.condition}


@dataclass(frozen=True)
class FailTemplate(Verdict):
    reason: str

    @property
    def kind(self) -> str:
        return "template"

    def describe(self) -> str:
        return self.reason


def combine(verdicts: Iterable[Verdict]) -> Verdict:
    """
    Pass iff every verdict passes; otherwise the first failure, else the first inconclusive one.
    """
    pending: Optional[Verdict] = None
    for v in verdicts:
        if v.status == "fail":
            return v
        if v.status == "inconclusive" and pending is None:
            pending = v
    return pending or Pass()


__all__ = [
    "Verdict",
    "Pass",
    "Inconclusive",
    "FailCover",
    "FailDisjoint",
    "FailContainment",
    "FailFinite",
    "FailMinimal",
    "FailMembership",
    "FailTemplate",
    "combine",
]
