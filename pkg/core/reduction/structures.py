from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Union

from core.cones.constraints import StdConeId
from core.roots.datum import SphericalPair, WeylElement
from core.roots.groups import Vector


@dataclass(frozen=True)
class Triple:
    """
    A member (Theta, w, s) of a reduction structure.

    `theta` holds G root names, `s` is a point of the H-lattice.
    """

    theta: frozenset[str]
    w: WeylElement
    s: Vector

    def label(self, pair: Optional[SphericalPair] = None) -> str:
        if pair is not None:
            missing = [a.name for a in pair.delta_g if a.name not in self.theta]
            theta = "Delta_G" + (f"-{{{','.join(missing)}}}" if missing else "")
        else:
            theta = "{" + ",".join(sorted(self.theta)) + "}"
        return f"({theta}; {self.w.name}; {','.join(str(v) for v in self.s)})"


@dataclass(frozen=True)
class FixedPiece:
    shift: Vector
    body: StdConeId


@dataclass(frozen=True)
class FamilyPiece:
    """
    Pieces T_{base + i*step}(body) for i = 1..n.
    """

    base: Vector
    step: Vector
    body: StdConeId


TemplatePiece = Union[FixedPiece, FamilyPiece]


@dataclass(frozen=True)
class F1Template:
    """
    Decomposition of the cone minus its n-fold translate.

    A derived template computes its pieces from the valuation coordinates of
    the cone and the shift; otherwise `pieces` lists them explicitly.
    """

    pieces: tuple[TemplatePiece, ...] = ()
    derived: bool = False

    @classmethod
    def derive(cls) -> "F1Template":
        return cls(derived=True)

    @classmethod
    def family(cls, base: Sequence[int], step: Sequence[int], body: StdConeId) -> "F1Template":
        return cls((FamilyPiece(tuple(base), tuple(step), body),))


@dataclass(frozen=True)
class StructureEntry:
    triple: Triple
    template: F1Template


@dataclass(frozen=True)
class ReductionStructure:
    """
    Reduction structure S(Theta_H, sector) of a pair, with its (F1) templates.
    """

    pair: SphericalPair
    cone: StdConeId
    entries: tuple[StructureEntry, ...]
    key: str = ""
    notes: tuple[str, ...] = field(default=(), compare=False)

    @property
    def triples(self) -> list[Triple]:
        return [e.triple for e in self.entries]

    def without(self, indices: Sequence[int]) -> "ReductionStructure":
        drop = set(indices)
        entries = tuple(e for i, e in enumerate(self.entries) if i not in drop)
        return replace(self, entries=entries, key=f"{self.key}-{'-'.join(str(i) for i in sorted(drop))}")

    def with_entry(self, entry: StructureEntry) -> "ReductionStructure":
        return replace(self, entries=self.entries + (entry,), key=f"{self.key}+")

    def replace_triple(self, index: int, triple: Triple) -> "ReductionStructure":
        entries = list(self.entries)
        entries[index] = replace(entries[index], triple=triple)
        return replace(self, entries=tuple(entries), key=f"{self.key}~{index}")

    def describe(self) -> str:
        return f"{self.pair.key} {self.cone.label(self.pair)}: {len(self.entries)} triple(s)"


__all__ = [
    "Triple",
    "FixedPiece",
    "FamilyPiece",
    "F1Template",
    "StructureEntry",
    "ReductionStructure",
]
