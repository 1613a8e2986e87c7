"""
Line-oriented input files describing a pair, reduction structures, a toy
module and volume constants.

    # comment
    [pair]
    name = gl2

    [structure]
    key = gl/n2/empty/plus
    theta = empty
    sector = plus
    triple = (B1,B2,A1; w3; 1,0)
    template = derived

    [module]
    ring = QQ
    term = 1/5; chi = 1/5,1/7; 1
    term = 2; chi = 1/3,1; x1 + 1

    [module]
    sector = minus
    term = 1; chi = 1/5,5

    [volume]
    q = 3
    constant = empty; 4/3

Vectors are comma lists, root subsets are comma or "+" separated names
(or "empty"), cones are written "<theta>/<sector>".
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from sympy import Poly, Symbol, SympifyError, sympify

from core.cones.constraints import Sector, StdConeId, check_cone_id
from core.cones.errors import ConeError
from core.periods.errors import PeriodError
from core.periods.volumes import VolumeConfig
from core.reduction.structures import F1Template, FamilyPiece, FixedPiece, ReductionStructure, StructureEntry, Triple
from core.roots.catalog import build_catalog_pair, parse_pair_id
from core.roots.datum import SphericalPair
from core.roots.errors import RootDatumError
from core.roots.groups import Vector
from core.series.coefficients import ExpPolyCoefficient, ExpPolyTerm, ToyModule
from core.series.errors import SeriesError
from core.series.rings import FAMILY_RING, U, CoefficientRing, ring_by_name

SECTION_KEYS = {
    "pair": {"name"},
    "structure": {"key", "theta", "sector", "triple", "template"},
    "module": {"ring", "sector", "term"},
    "volume": {"q", "constant"},
}
REPEATED_KEYS = {"triple", "template", "term", "constant"}
SECTOR_TOKENS = tuple(s.value for s in Sector)


class ParseError(Exception):
    """
    Input file error at a given line and column (both 1-based).
    """

    def __init__(self, message: str, line: int = 0, col: int = 0, expected: tuple[str, ...] = ()):
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        where = f"line {line}, column {col}: " if line else ""
        hint = f" (expected one of: {', '.join(expected)})" if expected else ""
        self.message = f"{where}{message}{hint}"
        super().__init__(self.message)

    def __str__(self):
        return self.message


@dataclass
class _Item:
    key: str
    value: str
    line: int
    col: int

    def error(self, message: str, expected: tuple[str, ...] = ()) -> ParseError:
        return ParseError(message, self.line, self.col, expected)


@dataclass
class _Section:
    name: str
    line: int
    items: list[_Item] = field(default_factory=list)

    def get(self, key: str) -> Optional[_Item]:
        for item in self.items:
            if item.key == key:
                return item
        return None

    def require(self, key: str) -> _Item:
        item = self.get(key)
        if item is None:
            raise ParseError(f"[{self.name}] section needs a {key!r} entry", self.line, 1)
        return item


@dataclass
class InputDocument:
    pair: Optional[SphericalPair] = None
    structures: list[ReductionStructure] = field(default_factory=list)
    module: Optional[ToyModule] = None
    volume: Optional[VolumeConfig] = None


def _tokenize(text: str) -> list[_Section]:
    sections: list[_Section] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        indent = len(line) - len(line.lstrip())
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ParseError("unterminated section header", lineno, indent + 1)
            name = stripped[1:-1].strip()
            if name not in SECTION_KEYS:
                raise ParseError(f"unknown section [{name}]", lineno, indent + 1, tuple(SECTION_KEYS))
            sections.append(_Section(name, lineno))
            continue
        if "=" not in stripped:
            raise ParseError("expected 'key = value'", lineno, indent + 1)
        if not sections:
            raise ParseError("entry outside of a section", lineno, indent + 1, tuple(f"[{s}]" for s in SECTION_KEYS))
        key, value = stripped.split("=", 1)
        key = key.strip()
        section = sections[-1]
        if key not in SECTION_KEYS[section.name]:
            expected = tuple(sorted(SECTION_KEYS[section.name]))
            raise ParseError(f"unknown key {key!r} in [{section.name}]", lineno, indent + 1, expected)
        if key not in REPEATED_KEYS and section.get(key) is not None:
            raise ParseError(f"duplicate key {key!r} in [{section.name}]", lineno, indent + 1)
        col = line.index("=") + 2 + (len(value) - len(value.lstrip()))
        section.items.append(_Item(key, value.strip(), lineno, col))
    if not sections:
        raise ParseError("no sections", 1, 1, tuple(f"[{s}]" for s in SECTION_KEYS))
    return sections


def _vector(item: _Item, text: str) -> Vector:
    text = text.strip()
    if text in ("", "()"):
        return ()
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise item.error(f"{text!r} is not a comma-separated list of integers")


def _names(item: _Item, text: str, allowed: tuple[str, ...]) -> frozenset[str]:
    text = text.strip()
    if text in ("empty", "", "-"):
        return frozenset()
    if text == "full":
        return frozenset(allowed)
    names = [n.strip() for n in text.replace("+", ",").split(",")]
    unknown = [n for n in names if n not in allowed]
    if unknown:
        raise item.error(f"unknown root {unknown[0]!r}", allowed)
    return frozenset(names)


def _sector(item: _Item, text: str) -> Sector:
    try:
        return Sector(text.strip())
    except ValueError:
        raise item.error(f"unknown sector {text.strip()!r}", SECTOR_TOKENS)


def _cone(item: _Item, pair: SphericalPair, text: str) -> StdConeId:
    theta, _, sector = text.strip().partition("/")
    cone = StdConeId(_names(item, theta, pair.delta_h_names), _sector(item, sector or "none"))
    try:
        check_cone_id(pair, cone)
    except ConeError as err:
        raise item.error(err.message)
    return cone


def _fraction(item: _Item, text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise item.error(f"{text.strip()!r} is not an exact rational number")


def _pair(section: _Section) -> SphericalPair:
    item = section.require("name")
    try:
        name, params = parse_pair_id(item.value)
        return build_catalog_pair(name, params)
    except RootDatumError as err:
        raise item.error(err.message)


def _triple(item: _Item, pair: SphericalPair) -> Triple:
    text = item.value.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise item.error("a triple is written (theta; w; s)")
    parts = text[1:-1].split(";")
    if len(parts) != 3:
        raise item.error(f"a triple has 3 parts separated by ';', got {len(parts)}")
    g_names = tuple(a.name for a in pair.delta_g)
    theta_text = parts[0].strip()
    if theta_text.startswith("Delta_G"):
        rest = theta_text[len("Delta_G") :].strip()
        dropped = _names(item, rest.lstrip("-").strip("{}"), g_names) if rest else frozenset()
        theta = frozenset(g_names) - dropped
    else:
        theta = _names(item, theta_text, g_names)
    w_name = parts[1].strip()
    try:
        w = pair.weyl_element(w_name)
    except KeyError:
        raise item.error(f"unknown Weyl element {w_name!r}", tuple(w.name for w in pair.weyl))
    s = _vector(item, parts[2])
    if len(s) != pair.h_lattice.rank:
        raise item.error(f"shift {s} is not a point of the rank {pair.h_lattice.rank} H-lattice")
    return Triple(theta, w, s)


def _template_piece(item: _Item, pair: SphericalPair):
    kind, _, rest = item.value.strip().partition(" ")
    parts = rest.split(";")
    if kind == "family" and len(parts) == 3:
        return FamilyPiece(_vector(item, parts[0]), _vector(item, parts[1]), _cone(item, pair, parts[2]))
    if kind == "fixed" and len(parts) == 2:
        return FixedPiece(_vector(item, parts[0]), _cone(item, pair, parts[1]))
    raise item.error(f"malformed template {item.value!r}", ("derived", "family base; step; cone", "fixed shift; cone"))


def _structure(section: _Section, pair: SphericalPair) -> ReductionStructure:
    theta_item = section.require("theta")
    theta = _names(theta_item, theta_item.value, pair.delta_h_names)
    sector_item = section.get("sector")
    sector = _sector(sector_item, sector_item.value) if sector_item else Sector.NONE
    cone = StdConeId(theta, sector)
    try:
        check_cone_id(pair, cone)
    except ConeError as err:
        raise (sector_item or theta_item).error(err.message)

    triples: list[Triple] = []
    templates: list[Optional[list]] = []
    for item in section.items:
        if item.key == "triple":
            triples.append(_triple(item, pair))
            templates.append(None)
        elif item.key == "template":
            if not triples:
                raise item.error("a template must follow the triple it belongs to")
            if item.value.strip() == "derived":
                if templates[-1]:
                    raise item.error("a derived template cannot be combined with explicit pieces")
                templates[-1] = []
                continue
            if templates[-1] is None:
                templates[-1] = []
            templates[-1].append(_template_piece(item, pair))

    entries = []
    for triple, pieces in zip(triples, templates):
        template = F1Template(tuple(pieces)) if pieces else F1Template.derive()
        entries.append(StructureEntry(triple, template))
    key_item = section.get("key")
    key = key_item.value if key_item else f"{pair.key}/{cone.label(pair)}"
    return ReductionStructure(pair, cone, tuple(entries), key)


def _poly(item: _Item, text: str, rank: int, ring: CoefficientRing) -> tuple[tuple[Vector, object], ...]:
    xs = [Symbol(f"x{i + 1}") for i in range(rank)]
    try:
        expr = sympify(text, locals={**{str(x): x for x in xs}, "u": U})
    except (SympifyError, SyntaxError, TypeError):
        raise item.error(f"cannot parse polynomial {text!r}")
    allowed = set(xs) | ring.symbols
    if expr.free_symbols - allowed:
        names = sorted(str(s) for s in expr.free_symbols - allowed)
        raise item.error(f"polynomial {text!r} uses unknown variables {', '.join(names)}", tuple(str(x) for x in xs))
    try:
        if not xs:
            monomials = [((), expr)]
        else:
            monomials = Poly(expr, *xs).terms()
        return tuple(sorted((tuple(m), ring.domain.from_sympy(c)) for m, c in monomials))
    except Exception as err:
        raise item.error(f"polynomial {text!r} is not a polynomial over {ring.name}: {err}")


def _term(item: _Item, rank: int, ring: CoefficientRing) -> ExpPolyTerm:
    parts = [p.strip() for p in item.value.split(";")]
    if len(parts) not in (2, 3):
        raise item.error("a term is written 'scalar; chi = v1,...; polynomial'")
    key, eq, values = parts[1].partition("=")
    if key.strip() != "chi" or not eq:
        raise item.error("second part of a term must be 'chi = v1,...'")
    try:
        scalar = ring(parts[0])
        character = tuple(ring(v.strip()) for v in values.split(",")) if values.strip() else ()
    except SeriesError as err:
        raise item.error(err.message)
    if len(character) != rank:
        raise item.error(f"character needs {rank} values, got {len(character)}")
    polynomial = _poly(item, parts[2], rank, ring) if len(parts) == 3 and parts[2] else (((0,) * rank, ring.one),)
    return ExpPolyTerm(scalar, character, polynomial)


def _module(sections: list[_Section], pair: SphericalPair) -> ToyModule:
    ring_item = sections[0].get("ring")
    try:
        ring = ring_by_name(ring_item.value) if ring_item else ring_by_name("QQ")
    except SeriesError as err:
        raise ring_item.error(err.message, ("QQ", "family"))
    rank = pair.h_lattice.rank
    default: Optional[ExpPolyCoefficient] = None
    overrides = []
    for section in sections:
        terms = tuple(_term(item, rank, ring) for item in section.items if item.key == "term")
        try:
            coefficient = ExpPolyCoefficient(ring, rank, terms)
        except SeriesError as err:
            raise ParseError(err.message, section.line, 1)
        sector_item = section.get("sector")
        if sector_item is None:
            if default is not None:
                raise ParseError("only one [module] section may omit the sector", section.line, 1)
            default = coefficient
        else:
            overrides.append((_sector(sector_item, sector_item.value), coefficient))
    if default is None:
        default = ExpPolyCoefficient(ring, rank, ())
    return ToyModule(pair, default, tuple(overrides))


def _volume(section: _Section, pair: SphericalPair) -> VolumeConfig:
    q_item = section.require("q")
    q = _fraction(q_item, q_item.value)
    constants = {}
    for item in section.items:
        if item.key == "constant":
            theta, sep, value = item.value.partition(";")
            if not sep:
                raise item.error("a constant is written '<theta>; <fraction>'")
            constants[_names(item, theta, pair.delta_h_names)] = _fraction(item, value)
    try:
        return VolumeConfig(q, constants)
    except PeriodError as err:
        raise q_item.error(err.message)


def parse_input(text: str) -> InputDocument:
    """
    Parse an input file.

    :param text: File contents.
    :return: Parsed pair, structures, module and volume constants.
    :raises ParseError: With the line and column of the first problem.
    """
    sections = _tokenize(text)
    doc = InputDocument()
    modules = []
    for section in sections:
        if section.name == "pair":
            if doc.pair is not None:
                raise ParseError("only one [pair] section is allowed", section.line, 1)
            doc.pair = _pair(section)
            continue
        if doc.pair is None:
            raise ParseError(f"[{section.name}] must come after the [pair] section", section.line, 1, ("[pair]",))
        if section.name == "structure":
            doc.structures.append(_structure(section, doc.pair))
        elif section.name == "module":
            modules.append(section)
        elif section.name == "volume":
            doc.volume = _volume(section, doc.pair)
    if modules:
        doc.module = _module(modules, doc.pair)
    return doc


def _format_names(names) -> str:
    return ",".join(names) if names else "empty"


def _format_vector(v: Vector) -> str:
    return ",".join(str(x) for x in v)


def _format_cone(pair: SphericalPair, cone: StdConeId) -> str:
    theta = "+".join(n for n in pair.delta_h_names if n in cone.theta_h) or "empty"
    return f"{theta}/{cone.sector.value}"


def _format_poly(ring: CoefficientRing, rank: int, polynomial) -> str:
    xs = [Symbol(f"x{i + 1}") for i in range(rank)]
    expr = 0
    for m, c in polynomial:
        mono = ring.domain.to_sympy(c)
        for x, k in zip(xs, m):
            mono = mono * x**k
        expr = expr + mono
    return str(expr)


def serialize_structure(structure: ReductionStructure) -> str:
    pair = structure.pair
    g_names = [a.name for a in pair.delta_g]
    lines = [
        "[structure]",
        f"key = {structure.key}",
        f"theta = {_format_cone(pair, structure.cone).split('/')[0]}",
        f"sector = {structure.cone.sector.value}",
    ]
    for entry in structure.entries:
        t = entry.triple
        theta = _format_names([n for n in g_names if n in t.theta])
        lines.append(f"triple = ({theta}; {t.w.name}; {_format_vector(t.s)})")
        if entry.template.derived or not entry.template.pieces:
            lines.append("template = derived")
            continue
        for p in entry.template.pieces:
            if isinstance(p, FamilyPiece):
                body = _format_cone(pair, p.body)
                lines.append(f"template = family {_format_vector(p.base)}; {_format_vector(p.step)}; {body}")
            else:
                lines.append(f"template = fixed {_format_vector(p.shift)}; {_format_cone(pair, p.body)}")
    return "\n".join(lines) + "\n"


def _serialize_coefficient(ring: CoefficientRing, c: ExpPolyCoefficient, sector: Optional[Sector]) -> str:
    lines = ["[module]"]
    if sector is None:
        lines.append(f"ring = {'family' if ring is FAMILY_RING else 'QQ'}")
    else:
        lines.append(f"sector = {sector.value}")
    for term in c.terms:
        chi = ",".join(ring.format(x) for x in term.character)
        poly = _format_poly(ring, c.rank, term.polynomial)
        lines.append(f"term = {ring.format(term.scalar)}; chi = {chi}; {poly}")
    return "\n".join(lines) + "\n"


def serialize(doc: InputDocument) -> str:
    """
    Text form of a document; parse_input(serialize(doc)) gives an equal document.
    """
    if doc.pair is None:
        raise ValueError("a document without a pair cannot be serialized")
    parts = [f"[pair]\nname = {doc.pair.key}\n"]
    parts.extend(serialize_structure(s) for s in doc.structures)
    if doc.module is not None:
        ring = doc.module.ring
        parts.append(_serialize_coefficient(ring, doc.module.coefficient, None))
        for sector, c in doc.module.sectors:
            parts.append(_serialize_coefficient(ring, c, sector))
    if doc.volume is not None:
        lines = ["[volume]", f"q = {doc.volume.q}"]
        for theta, c in sorted(doc.volume.constants.items(), key=lambda kv: sorted(kv[0])):
            names = "+".join(n for n in doc.pair.delta_h_names if n in theta) or "empty"
            lines.append(f"constant = {names}; {c}")
        parts.append("\n".join(lines) + "\n")
    return "\n".join(parts)


__all__ = ["ParseError", "InputDocument", "parse_input", "serialize", "serialize_structure"]
