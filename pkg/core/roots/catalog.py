"""
Compiled-in spherical pairs.

Coordinates are additive valuations. Ambient data (embeddings, complement
forms, Weyl elements) is written in standard torus coordinates and pushed
to the quotient lattices by `build_pair`.
"""

import re
from functools import lru_cache
from typing import Optional, Sequence

from core.roots.datum import SphericalPair, build_pair
from core.roots.errors import UnknownPair, UnsupportedRank
from core.roots.groups import GL, CentralQuotient, Product, Sp, SplitSO, Torus, identity

PAIR_NAMES = ("triple", "waldspurger", "gl", "so", "gl4gl2", "sp6sp4", "aniso")
RANKED_PAIRS = {"gl": (2, 3), "so": (3, 4)}


def coordinate_map(rank: int, images: Sequence[int], signs: Optional[Sequence[int]] = None) -> tuple:
    """
    Matrix of the map x -> (s_0 x_{images[0]}, s_1 x_{images[1]}, ...),
    extended by the identity on the remaining coordinates.

    :param rank: Ambient rank.
    :param images: Source coordinate for each leading output coordinate (0-based).
    :param signs: Optional signs, default all +1.
    """
    signs = signs or [1] * len(images)
    rows = []
    for i in range(rank):
        if i < len(images):
            rows.append(tuple(signs[i] if j == images[i] else 0 for j in range(rank)))
        else:
            rows.append(tuple(1 if j == i else 0 for j in range(rank)))
    return tuple(rows)


def _stack(blocks: Sequence[Sequence[Sequence[int]]]) -> list[list[int]]:
    return [list(row) for block in blocks for row in block]


def _triple() -> SphericalPair:
    G = CentralQuotient(Product((GL(2), GL(2), GL(2))), ((1,) * 6,))
    H = CentralQuotient(GL(2), ((1, 1),))
    embed = _stack([identity(2)] * 3)
    return build_pair("triple", G, H, embed, ["B1", "B2", "B3"], ["a"], h_labels=["t"])


def _waldspurger() -> SphericalPair:
    G = CentralQuotient(GL(2), ((1, 1),))
    H = Torus(1)
    return build_pair(
        "waldspurger",
        G,
        H,
        [[1], [0]],
        ["B"],
        [],
        c_h={"c": (1,)},
        weyl={"e": identity(2), "w": coordinate_map(2, [1, 0])},
        g_labels=["y"],
        h_labels=["t"],
    )


def _aniso() -> SphericalPair:
    G = CentralQuotient(GL(2), ((1, 1),))
    return build_pair("aniso", G, Torus(0), [[], []], ["B"], [], g_labels=["y"], h_labels=[])


def _gl(n: int) -> SphericalPair:
    """
    GL(n) inside GL(n+1) x GL(n), g -> (diag(g, 1), g).

    Weyl element w_j moves the last GL(n+1) coordinate to position j; w_{n+1} = e.
    """
    G = Product((GL(n + 1), GL(n)))
    H = GL(n)
    embed = _stack([identity(n), [[0] * n], identity(n)])
    rank = 2 * n + 1
    weyl = {"e": identity(rank)}
    for j in range(1, n + 2):
        order = list(range(j - 1)) + [n] + list(range(j - 1, n))
        weyl[f"w{j}"] = coordinate_map(rank, order)
    return build_pair(
        "gl",
        G,
        H,
        embed,
        [f"B{i}" for i in range(1, n + 1)] + [f"A{i}" for i in range(1, n)],
        [f"a{i}" for i in range(1, n)],
        c_h={"c": tuple(1 if i == n - 1 else 0 for i in range(n))},
        weyl=weyl,
        params={"n": n},
    )


def _so(n: int) -> SphericalPair:
    """
    SO(n) inside SO(n+1) x SO(n), diagonally.

    For even n the element `w` inverts the last coordinate of SO(n+1).
    """
    G = Product((SplitSO(n + 1), SplitSO(n)))
    H = SplitSO(n)
    r_big, r_small = (n + 1) // 2, n // 2
    pad = [[0] * r_small for _ in range(r_big - r_small)]
    embed = _stack([identity(r_small), pad, identity(r_small)])
    rank = r_big + r_small
    weyl = {"e": identity(rank)}
    if r_big == r_small:
        signs = [1] * (r_big - 1) + [-1]
        weyl["w"] = coordinate_map(rank, list(range(r_big)), signs)
    return build_pair(
        "so",
        G,
        H,
        embed,
        [f"B{i}" for i in range(1, r_big + 1)] + [f"A{i}" for i in range(1, r_small + 1)],
        [f"a{i}" for i in range(1, r_small + 1)],
        weyl=weyl,
        params={"n": n},
    )


def _gl4gl2() -> SphericalPair:
    """
    Delta(G_m)\\GL(2)xGL(2) inside Delta(G_m)\\GL(4)xGL(2), (g1, g2) -> (diag(g1, g2), g2).

    Weyl elements w_abcd permute the GL(4) coordinates as (t_a, t_b, t_c, t_d).
    """
    G = CentralQuotient(Product((GL(4), GL(2))), ((1,) * 6,))
    H = CentralQuotient(Product((GL(2), GL(2))), ((1,) * 4,))
    embed = _stack([identity(4), [[0, 0, 1, 0], [0, 0, 0, 1]]])
    weyl = {"e": identity(6)}
    for word in ("1234", "3412", "3124", "1342", "1324", "3142"):
        weyl[f"w{word}"] = coordinate_map(6, [int(c) - 1 for c in word])
    return build_pair(
        "gl4gl2",
        G,
        H,
        embed,
        ["B1", "B2", "B3", "A"],
        ["a1", "a2"],
        c_h={"c": (0, 1, -1, 0)},
        weyl=weyl,
    )


def _sp6sp4() -> SphericalPair:
    """
    Sp(4) x Sp(2) inside Sp(6) x Sp(4); the Sp(2) torus coordinate goes first in Sp(6).

    H coordinates are (x1, x2 | x3) with x3 on Sp(2).
    """
    G = Product((Sp(6), Sp(4)))
    H = Product((Sp(4), Sp(2)))
    embed = [
        [0, 0, 1],
        [1, 0, 0],
        [0, 1, 0],
        [1, 0, 0],
        [0, 1, 0],
    ]
    weyl = {
        "e": identity(5),
        "w2": coordinate_map(5, [1, 0, 2]),
        "w3": coordinate_map(5, [1, 2, 0]),
    }
    return build_pair("sp6sp4", G, H, embed, ["G1", "G2", "G3", "B1", "B2"], ["b1", "b2", "a1"], weyl=weyl)


def parse_pair_id(text: str) -> tuple[str, dict[str, int]]:
    """
    Parse a pair identifier such as "gl4gl2", "gl2", "gl(3)" or "so(n=4)".

    :param text: Identifier.
    :return: Tuple (name, params).
    """
    text = text.strip().lower()
    if text in PAIR_NAMES and text not in RANKED_PAIRS:
        return text, {}
    m = re.fullmatch(r"(gl|so)(?:\(\s*(?:n\s*=\s*)?(\d+)\s*\)|(\d+))", text)
    if not m:
        raise UnknownPair(f"Unknown pair {text!r}; expected one of {', '.join(PAIR_NAMES)}")
    return m.group(1), {"n": int(m.group(2) or m.group(3))}


@lru_cache(maxsize=None)
def _cached(name: str, n: Optional[int]) -> SphericalPair:
    if name == "triple":
        return _triple()
    if name == "waldspurger":
        return _waldspurger()
    if name == "aniso":
        return _aniso()
    if name == "gl4gl2":
        return _gl4gl2()
    if name == "sp6sp4":
        return _sp6sp4()
    if name == "gl":
        return _gl(n)
    return _so(n)


def build_catalog_pair(name: str, params: Optional[dict[str, int]] = None) -> SphericalPair:
    """
    Build one of the compiled-in pairs.

    :param name: Pair identifier (see PAIR_NAMES).
    :param params: Rank parameters; `gl` and `so` need `n`.
    :return: The validated pair (cached, pairs are immutable).
    """
    params = params or {}
    if name not in PAIR_NAMES:
        raise UnknownPair(f"Unknown pair {name!r}; expected one of {', '.join(PAIR_NAMES)}")
    if name in RANKED_PAIRS:
        n = params.get("n")
        if n not in RANKED_PAIRS[name]:
            allowed = ", ".join(str(v) for v in RANKED_PAIRS[name])
            raise UnsupportedRank(f"{name} is only catalogued for n in {{{allowed}}}, got {n}")
        return _cached(name, n)
    if params:
        raise UnsupportedRank(f"{name} takes no rank parameters")
    return _cached(name, None)


def catalog_pairs() -> list[SphericalPair]:
    pairs = []
    for name in PAIR_NAMES:
        if name in RANKED_PAIRS:
            pairs.extend(build_catalog_pair(name, {"n": n}) for n in RANKED_PAIRS[name])
        else:
            pairs.append(build_catalog_pair(name))
    return pairs


__all__ = ["build_catalog_pair", "catalog_pairs", "parse_pair_id", "coordinate_map", "PAIR_NAMES"]
