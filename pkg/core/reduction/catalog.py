"""
Compiled-in reduction structures.

Keys:

  triple/<theta>, wal/<sector>, aniso
  gl/n<n>/<theta>/<sector>, so/n<n>/<theta>
  table1/<theta>/<sector> (gl4gl2, sectors zero and plus)
  table2/<theta> (gl4gl2, sector minus)
  table3/<theta> (sp6sp4)

<theta> is "empty", "full" or the names of Theta_H joined by "+".
Shifts are written in ambient H coordinates and projected to the lattice.
"""

from functools import lru_cache
from typing import Optional, Sequence

from core.cones.constraints import Sector, StdConeId
from core.reduction.errors import UnknownStructure
from core.reduction.structures import F1Template, ReductionStructure, StructureEntry, Triple
from core.roots.catalog import build_catalog_pair
from core.roots.datum import SphericalPair

DERIVED_NOTE = "(F1) pieces derived from valuation coordinates"
ALPHA0_NOTE = "minus sector: alpha_0 is never in Theta_H and |a_0| is bounded by 1 (transcribed as stated)"
W3142_NOTE = "w3142 row: third triple uses w3142 (printed as w3124, which is not dominant there)"


def theta_key(pair: SphericalPair, theta: frozenset[str]) -> str:
    if not theta:
        return "empty"
    if len(theta) == len(pair.delta_h) and pair.delta_h:
        return "full"
    return "+".join(n for n in pair.delta_h_names if n in theta)


def _thetas(pair: SphericalPair) -> list[frozenset[str]]:
    names = pair.delta_h_names
    result = []
    for mask in range(1 << len(names)):
        result.append(frozenset(names[i] for i in range(len(names)) if mask >> i & 1))
    return result


class _Builder:
    """
    Shorthand for writing triples of one pair.
    """

    def __init__(self, pair: SphericalPair):
        self.pair = pair
        self.all_roots = frozenset(a.name for a in pair.delta_g)

    def drop(self, *names: str) -> frozenset[str]:
        missing = set(names) - self.all_roots
        if missing:
            raise UnknownStructure(f"{', '.join(sorted(missing))} not in Delta_G of {self.pair.key}")
        return self.all_roots - set(names)

    def triple(self, theta: frozenset[str], w: str, ambient: Sequence[int]) -> Triple:
        return Triple(theta, self.pair.weyl_element(w), self.pair.h_project(tuple(ambient)))

    def structure(
        self,
        key: str,
        theta: frozenset[str],
        sector: Sector,
        triples: Sequence[Triple],
        template: Optional[F1Template] = None,
        notes: Sequence[str] = (),
    ) -> ReductionStructure:
        template = template or F1Template.derive()
        entries = tuple(StructureEntry(t, template) for t in triples)
        if template.derived and entries:
            notes = (DERIVED_NOTE,) + tuple(notes)
        return ReductionStructure(self.pair, StdConeId(theta, sector), entries, key, tuple(notes))


def _triple() -> list[ReductionStructure]:
    pair = build_catalog_pair("triple")
    b = _Builder(pair)
    s = b.triple(frozenset(), "e", (1, 0))
    full = frozenset(pair.delta_h_names)
    family = F1Template.family((0,) * len(s.s), s.s, StdConeId(full, Sector.NONE))
    return [
        b.structure("triple/empty", frozenset(), Sector.NONE, [s], family),
        b.structure("triple/full", full, Sector.NONE, []),
    ]


def _waldspurger() -> list[ReductionStructure]:
    pair = build_catalog_pair("waldspurger")
    b = _Builder(pair)
    minus = b.triple(frozenset(), "w", (-1,))
    family = F1Template.family((0,), minus.s, StdConeId(frozenset(), Sector.ZERO))
    return [
        b.structure("wal/plus", frozenset(), Sector.PLUS, [b.triple(frozenset(), "e", (1,))]),
        b.structure("wal/zero", frozenset(), Sector.ZERO, []),
        b.structure("wal/minus", frozenset(), Sector.MINUS, [minus], family),
    ]


def _aniso() -> list[ReductionStructure]:
    pair = build_catalog_pair("aniso")
    return [_Builder(pair).structure("aniso", frozenset(), Sector.NONE, [])]


def _gl(n: int) -> list[ReductionStructure]:
    pair = build_catalog_pair("gl", {"n": n})
    b = _Builder(pair)
    e = f"w{n + 1}"

    def T(i: int, shift: int = 0) -> tuple[int, ...]:
        return tuple((1 if k < i else 0) + shift for k in range(n))

    structures = []
    for theta in _thetas(pair):
        free = [i for i in range(1, n) if f"a{i}" not in theta]
        zero = [b.triple(b.drop(f"B{i}", f"A{i}"), e, T(i)) for i in free]
        plus = zero + [b.triple(b.drop(f"B{n}"), e, T(n))]
        minus = []
        for j in range(2, n + 1):
            if f"a{j - 1}" in theta:
                continue
            minus += [b.triple(b.drop(f"B{i}", f"A{i}"), f"w{j}", T(i)) for i in free if i + 1 <= j]
            minus += [b.triple(b.drop(f"B{i + 1}", f"A{i}"), f"w{j}", T(i, -1)) for i in free if j <= i + 1]
        minus += [b.triple(b.drop(f"B{i + 1}", f"A{i}"), "w1", T(i, -1)) for i in free]
        minus.append(b.triple(b.drop("B1"), "w1", T(0, -1)))

        key = f"gl/n{n}/{theta_key(pair, theta)}"
        structures += [
            b.structure(f"{key}/zero", theta, Sector.ZERO, zero),
            b.structure(f"{key}/plus", theta, Sector.PLUS, plus),
            b.structure(f"{key}/minus", theta, Sector.MINUS, minus, notes=[ALPHA0_NOTE]),
        ]
    return structures


def _so3() -> list[ReductionStructure]:
    pair = build_catalog_pair("so", {"n": 3})
    b = _Builder(pair)
    full = frozenset(pair.delta_h_names)
    return [
        b.structure("so/n3/empty", frozenset(), Sector.NONE, [b.triple(frozenset(), "e", (1,))]),
        b.structure("so/n3/full", full, Sector.NONE, []),
    ]


def _so4() -> list[ReductionStructure]:
    pair = build_catalog_pair("so", {"n": 4})
    b = _Builder(pair)
    t11 = b.triple(b.drop("B2", "A2"), "e", (1, 1))
    t1m = b.triple(b.drop("B2", "A1"), "w", (1, -1))
    empty = [
        b.triple(b.drop("B1", "A1", "A2"), "e", (1, 0)),
        b.triple(b.drop("B1", "A1", "A2"), "w", (1, 0)),
        t11,
        t1m,
    ]
    return [
        b.structure("so/n4/empty", frozenset(), Sector.NONE, empty),
        b.structure("so/n4/a1", frozenset({"a1"}), Sector.NONE, [t11]),
        b.structure("so/n4/a2", frozenset({"a2"}), Sector.NONE, [t1m]),
        b.structure("so/n4/full", frozenset({"a1", "a2"}), Sector.NONE, []),
    ]


_A = {0: (0, 0), 1: (1, 0), 2: (1, 1)}


def _s(i: int, j: int) -> tuple[int, ...]:
    return _A[i] + _A[j]


def _gl4gl2() -> list[ReductionStructure]:
    pair = build_catalog_pair("gl4gl2")
    b = _Builder(pair)
    e = "w1234"
    t20 = b.triple(b.drop("B2"), e, _s(2, 0))
    t21 = b.triple(b.drop("B3", "A"), e, _s(2, 1))
    t10 = b.triple(b.drop("B1"), e, _s(1, 0))
    a1, a2 = frozenset({"a1"}), frozenset({"a2"})
    full, empty = a1 | a2, frozenset()

    table1 = {
        full: ([], [t20]),
        a1: ([t21], [t20, t21]),
        a2: ([t10], [t20, t10]),
        empty: ([t10, t21], [t20, t10, t21]),
    }

    def m(drop: Sequence[str], w: str, i: int, j: int) -> Triple:
        return b.triple(b.drop(*drop), w, _s(i, j))

    table2 = {
        full: [m(["B2"], "w3412", 0, 2)],
        a1: [
            m(["B1", "A"], "w3124", 0, 1),
            m(["B3", "A"], "w3124", 2, 1),
            m(["B1", "A"], "w3412", 0, 1),
            m(["B2"], "w3412", 0, 2),
        ],
        a2: [
            m(["B1"], "w1342", 1, 0),
            m(["B3"], "w1342", 1, 2),
            m(["B3"], "w3412", 1, 2),
            m(["B2"], "w3412", 0, 2),
        ],
        empty: [
            m(["B1"], "w1324", 1, 0),
            m(["B2", "A"], "w1324", 1, 1),
            m(["B3", "A"], "w1324", 2, 1),
            m(["B1"], "w1342", 1, 0),
            m(["B3"], "w1342", 1, 2),
            m(["B2", "A"], "w1342", 1, 1),
            m(["B1", "A"], "w3124", 0, 1),
            m(["B2", "A"], "w3124", 1, 1),
            m(["B3", "A"], "w3124", 2, 1),
            m(["B1", "A"], "w3142", 0, 1),
            m(["B2", "A"], "w3142", 1, 1),
            m(["B3"], "w3142", 1, 2),
            m(["B1", "A"], "w3412", 0, 1),
            m(["B3"], "w3412", 1, 2),
            m(["B2"], "w3412", 0, 2),
        ],
    }

    structures = []
    for theta in (full, a1, a2, empty):
        key = theta_key(pair, theta)
        zero, plus = table1[theta]
        structures.append(b.structure(f"table1/{key}/zero", theta, Sector.ZERO, zero))
        structures.append(b.structure(f"table1/{key}/plus", theta, Sector.PLUS, plus))
    for theta in (full, a1, a2, empty):
        notes = [W3142_NOTE] if not theta else []
        key = f"table2/{theta_key(pair, theta)}"
        structures.append(b.structure(key, theta, Sector.MINUS, table2[theta], notes=notes))
    return structures


def _sp6sp4() -> list[ReductionStructure]:
    pair = build_catalog_pair("sp6sp4")
    b = _Builder(pair)

    def m(drop: Sequence[str], w: str, i: int, j: int) -> Triple:
        return b.triple(b.drop(*drop), w, _A[i] + (j,))

    rows: dict[frozenset[str], list[Triple]] = {
        frozenset({"b1", "b2"}): [m(["G1"], "e", 0, 1)],
        frozenset({"b1"}): [
            m(["G1"], "e", 0, 1),
            m(["G3", "B2"], "e", 2, 1),
            m(["G2", "B2"], "w3", 2, 0),
            m(["G3", "B2"], "w3", 2, 1),
        ],
        frozenset({"b2"}): [
            m(["G1"], "e", 0, 1),
            m(["G2", "B1"], "e", 1, 1),
            m(["G1", "B1"], "w2", 1, 0),
            m(["G2", "B1"], "w2", 1, 1),
        ],
        frozenset(): [
            m(["G1"], "e", 0, 1),
            m(["G2", "B1"], "e", 1, 1),
            m(["G3", "B2"], "e", 2, 1),
            m(["G1", "B1"], "w2", 1, 0),
            m(["G2", "B1"], "w2", 1, 1),
            m(["G3", "B2"], "w2", 2, 1),
            m(["G1", "B1"], "w3", 1, 0),
            m(["G2", "B2"], "w3", 2, 0),
            m(["G3", "B2"], "w3", 2, 1),
        ],
    }
    for theta in _thetas(pair):
        if "a1" in theta:
            rows[theta] = [m([f"G{i}", f"B{i}"], "w3", i, 0) for i in (1, 2) if f"b{i}" not in theta]

    return [
        b.structure(f"table3/{theta_key(pair, theta)}", theta, Sector.NONE, rows[theta]) for theta in _thetas(pair)
    ]


@lru_cache(maxsize=None)
def _catalog() -> tuple[ReductionStructure, ...]:
    structures = _triple() + _waldspurger() + _aniso()
    for n in (2, 3):
        structures += _gl(n)
    structures += _so3() + _so4() + _gl4gl2() + _sp6sp4()
    return tuple(structures)


def catalog() -> list[ReductionStructure]:
    """
    Every compiled-in reduction structure, in a fixed order.
    """
    return list(_catalog())


def lookup(key: str) -> ReductionStructure:
    """
    Find a structure by catalog key.

    :raises UnknownStructure: If no structure has this key.
    """
    for s in _catalog():
        if s.key == key:
            return s
    raise UnknownStructure(f"no catalog structure with key {key!r}")


def find_structure(pair: SphericalPair, theta: frozenset[str], sector: Sector) -> ReductionStructure:
    """
    The catalog structure of a pair for given Theta_H and sector.

    :raises UnknownStructure: If the pair has no such structure.
    """
    for s in _catalog():
        if s.pair == pair and s.cone == StdConeId(frozenset(theta), sector):
            return s
    cone = StdConeId(frozenset(theta), sector)
    raise UnknownStructure(f"{pair.key} has no catalog structure for {cone.label(pair)}")


def structures_for(pair: SphericalPair) -> list[ReductionStructure]:
    return [s for s in _catalog() if s.pair == pair]


__all__ = ["catalog", "lookup", "find_structure", "structures_for", "theta_key"]
