from dataclasses import dataclass, field, replace
from math import lcm
from typing import Iterable, Optional, Sequence

from sympy import Matrix as SympyMatrix
from sympy import Rational

from core.log import get_logger
from core.roots.errors import DimensionMismatch, InternalInconsistency, InvalidPair
from core.roots.groups import GroupSpec, Matrix, TorusModel, Vector, identity, mat_mul, mat_vec, vec_mat

log = get_logger(__name__)


@dataclass(frozen=True)
class CocharLattice:
    """
    Cocharacter lattice of a split torus, in named coordinates.
    """

    labels: tuple[str, ...]

    @property
    def rank(self) -> int:
        return len(self.labels)

    def point(self, coords: Iterable[int]) -> Vector:
        x = tuple(int(c) for c in coords)
        if len(x) != self.rank:
            raise DimensionMismatch(f"point {x} does not live on a rank {self.rank} lattice")
        return x

    @property
    def origin(self) -> Vector:
        return (0,) * self.rank


@dataclass(frozen=True)
class LinearForm:
    name: str
    coefficients: Vector

    @property
    def rank(self) -> int:
        return len(self.coefficients)

    def __call__(self, x: Sequence[int]) -> int:
        return pairing(self, x)

    def __neg__(self) -> "LinearForm":
        return LinearForm(f"-{self.name}", tuple(-c for c in self.coefficients))


def pairing(f: LinearForm, x: Sequence[int]) -> int:
    """
    Pair a form with a lattice point.

    :param f: Linear form.
    :param x: Lattice point of the same rank.
    :return: The integer <f, x>.
    """
    if len(f.coefficients) != len(x):
        raise DimensionMismatch(f"form {f.name} has rank {len(f.coefficients)}, point {tuple(x)} has rank {len(x)}")
    return sum(a * b for a, b in zip(f.coefficients, x))


@dataclass(frozen=True)
class WeylElement:
    name: str
    matrix: Matrix

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def inverse(self) -> "WeylElement":
        if not self.matrix:
            return WeylElement(f"{self.name}^-1", self.matrix)
        inv = SympyMatrix(self.matrix).inv()
        if any(not v.is_integer for v in inv):
            raise InternalInconsistency(f"Weyl element {self.name} is not invertible over the integers")
        rows = tuple(tuple(int(inv[i, j]) for j in range(inv.cols)) for i in range(inv.rows))
        return WeylElement(f"{self.name}^-1", rows)

    def compose(self, other: "WeylElement") -> "WeylElement":
        """
        The element acting as `self` after `other`.
        """
        return WeylElement(f"{self.name}*{other.name}", mat_mul(self.matrix, other.matrix, self.rank))


def weyl_apply(w: WeylElement, x: Sequence[int]) -> Vector:
    """
    Apply a Weyl element to a G-lattice point.

    :param w: Weyl element.
    :param x: Point on the G-lattice.
    :return: The image w(x).
    """
    if w.rank != len(x):
        raise DimensionMismatch(f"Weyl element {w.name} has rank {w.rank}, point {tuple(x)} has rank {len(x)}")
    return mat_vec(w.matrix, x)


@dataclass(frozen=True)
class SphericalPair:
    """
    A spherical pair H inside G, reduced to split torus data.

    Lattices are the (possibly quotient) cocharacter lattices of the maximal
    split tori; `embed` is the G-rank x H-rank integer matrix of the
    restricted embedding. All forms are expressed in lattice coordinates.
    """

    name: str
    G: GroupSpec
    H: GroupSpec
    g_lattice: CocharLattice
    h_lattice: CocharLattice
    embed: Matrix
    delta_g: tuple[LinearForm, ...]
    delta_h: tuple[LinearForm, ...]
    c_h: tuple[LinearForm, ...]
    n_exp: tuple[tuple[str, int], ...]
    weyl: tuple[WeylElement, ...]
    params: tuple[tuple[str, int], ...] = ()
    g_model: Optional[TorusModel] = field(default=None, compare=False, repr=False)
    h_model: Optional[TorusModel] = field(default=None, compare=False, repr=False)

    @property
    def key(self) -> str:
        return self.name + "".join(str(v) for _, v in self.params)

    @property
    def has_sectors(self) -> bool:
        return bool(self.c_h)

    @property
    def basis_forms(self) -> tuple[LinearForm, ...]:
        return self.delta_h + self.c_h

    @property
    def n_exp_map(self) -> dict[str, int]:
        return dict(self.n_exp)

    @property
    def delta_h_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.delta_h)

    def _lookup(self, forms: Iterable[LinearForm], name: str, what: str) -> LinearForm:
        for f in forms:
            if f.name == name:
                return f
        raise KeyError(f"{self.key} has no {what} named {name!r}")

    def g_root(self, name: str) -> LinearForm:
        return self._lookup(self.delta_g, name, "G root")

    def h_form(self, name: str) -> LinearForm:
        return self._lookup(self.basis_forms, name, "H form")

    def weyl_element(self, name: str) -> WeylElement:
        for w in self.weyl:
            if w.name == name:
                return w
        raise KeyError(f"{self.key} has no Weyl element named {name!r}")

    def embed_point(self, x: Sequence[int]) -> Vector:
        if len(x) != self.h_lattice.rank:
            raise DimensionMismatch(f"point {tuple(x)} is not on the H-lattice of {self.key}")
        return mat_vec(self.embed, x)

    def pullback(self, form: LinearForm, w: Optional[WeylElement] = None) -> LinearForm:
        """
        Pull a G-form back to the H-lattice, optionally through a Weyl element:
        x -> <form, w(embed(x))>.
        """
        coeffs = form.coefficients
        if w is not None:
            coeffs = vec_mat(coeffs, w.matrix, self.g_lattice.rank)
        return LinearForm(form.name, vec_mat(coeffs, self.embed, self.h_lattice.rank))

    def h_project(self, ambient: Sequence[int]) -> Vector:
        """
        Map a point given in the ambient H coordinates to the H-lattice.
        """
        return self.h_model.project(tuple(ambient)) if self.h_model else tuple(ambient)

    def g_project(self, ambient: Sequence[int]) -> Vector:
        return self.g_model.project(tuple(ambient)) if self.g_model else tuple(ambient)


def _solve_in_basis(basis: Sequence[Vector], target: Vector) -> list[Rational]:
    """
    Coefficients c with sum(c_i * basis_i) = target, over the rationals.
    """
    if not basis:
        if any(target):
            raise InternalInconsistency(f"{target} is not in the span of an empty basis")
        return []
    m = SympyMatrix([list(b) for b in basis]).T
    solution = m.solve(SympyMatrix(list(target)))
    return [Rational(v) for v in solution]


def modulus_exponents(pair: SphericalPair) -> dict[str, int]:
    """
    Recompute the exponents N_alpha of the modulus character of H.

    The sum of positive H-roots is written in the basis Delta_H + C_H;
    the C_H coefficients must vanish and the Delta_H ones must be positive
    integers.

    :param pair: Spherical pair.
    :return: Map from Delta_H root names to N_alpha.
    """
    model = pair.h_model or pair.H.realize()
    rank = pair.h_lattice.rank
    rho2 = tuple(sum(r[i] for r in model.positive_roots) for i in range(rank))
    coefficients = _solve_in_basis([f.coefficients for f in pair.basis_forms], rho2)

    result = {}
    for f, c in zip(pair.basis_forms, coefficients):
        if f in pair.c_h:
            if c != 0:
                raise InternalInconsistency(f"sum of positive roots of {pair.key} has C_H coefficient {c}")
            continue
        if not c.is_integer or c <= 0:
            raise InternalInconsistency(f"modulus exponent of {f.name} in {pair.key} is {c}")
        result[f.name] = int(c)
    return result


def _check_weyl(w: WeylElement, model: TorusModel, delta_g: Sequence[LinearForm]):
    if w.rank != model.rank or any(len(row) != model.rank for row in w.matrix):
        raise InvalidPair(f"Weyl element {w.name} is not a square matrix of size {model.rank}")
    if model.rank:
        det = SympyMatrix(w.matrix).det()
        if abs(det) != 1:
            raise InvalidPair(f"Weyl element {w.name} has determinant {det}")
    roots = model.roots
    for alpha in delta_g:
        image = vec_mat(alpha.coefficients, w.matrix, model.rank)
        if image not in roots:
            raise InvalidPair(f"Weyl element {w.name} maps {alpha.name} to {image}, which is not a root")


def build_pair(
    name: str,
    G: GroupSpec,
    H: GroupSpec,
    embed: Sequence[Sequence[int]],
    g_root_names: Sequence[str],
    h_root_names: Sequence[str],
    c_h: Optional[dict[str, Sequence[int]]] = None,
    weyl: Optional[dict[str, Sequence[Sequence[int]]]] = None,
    params: Optional[dict[str, int]] = None,
    g_labels: Optional[Sequence[str]] = None,
    h_labels: Optional[Sequence[str]] = None,
) -> SphericalPair:
    """
    Assemble and validate a spherical pair from ambient data.

    Embedding, C_H forms and Weyl matrices are given in the ambient
    coordinates of the groups (before central quotients); they are pushed to
    the quotient lattices here.

    :param name: Pair identifier.
    :param G: The bigger group.
    :param H: The subgroup.
    :param embed: Ambient embedding matrix, one row per ambient G coordinate.
    :param g_root_names: Names for the simple roots of G, in group order.
    :param h_root_names: Names for the simple roots of H, in group order.
    :param c_h: Complement forms on the ambient H lattice, by name.
    :param weyl: Weyl elements as ambient G matrices, by name.
    :param params: Rank parameters the pair was built with.
    :return: Validated spherical pair.
    """
    g_model = G.realize()
    h_model = H.realize()
    c_h = c_h or {}
    weyl = weyl or {"e": identity(g_model.ambient_rank)}

    ambient_embed = tuple(tuple(int(v) for v in row) for row in embed)
    if len(ambient_embed) != g_model.ambient_rank or any(len(r) != h_model.ambient_rank for r in ambient_embed):
        raise InvalidPair(
            f"embedding of {name} must be {g_model.ambient_rank} x {h_model.ambient_rank}, "
            f"got {len(ambient_embed)} rows"
        )
    quotient_embed = mat_mul(
        mat_mul(g_model.projection, ambient_embed, g_model.ambient_rank),
        h_model.section,
        h_model.ambient_rank,
    )
    # The H-central directions must land in the G-central ones
    for ambient_vec in _kernel_directions(h_model):
        image = mat_vec(g_model.projection, mat_vec(ambient_embed, ambient_vec))
        if any(image):
            raise InvalidPair(f"embedding of {name} does not descend to the central quotients")

    if len(g_root_names) != len(g_model.simple_roots):
        raise InvalidPair(f"{name}: expected {len(g_model.simple_roots)} G root names, got {len(g_root_names)}")
    if len(h_root_names) != len(h_model.simple_roots):
        raise InvalidPair(f"{name}: expected {len(h_model.simple_roots)} H root names, got {len(h_root_names)}")
    delta_g = tuple(LinearForm(n, r) for n, r in zip(g_root_names, g_model.simple_roots))
    delta_h = tuple(LinearForm(n, r) for n, r in zip(h_root_names, h_model.simple_roots))

    complements = []
    for form_name, ambient_form in c_h.items():
        ambient_form = tuple(int(v) for v in ambient_form)
        if len(ambient_form) != h_model.ambient_rank:
            raise InvalidPair(f"C_H form {form_name} of {name} has the wrong rank")
        for ambient_vec in _kernel_directions(h_model):
            if sum(a * b for a, b in zip(ambient_form, ambient_vec)):
                raise InvalidPair(f"C_H form {form_name} of {name} does not vanish on the center")
        complements.append(LinearForm(form_name, h_model.push_form(ambient_form)))

    elements = []
    for w_name, ambient_w in weyl.items():
        ambient_w = tuple(tuple(int(v) for v in row) for row in ambient_w)
        for ambient_vec in _kernel_directions(g_model):
            if any(mat_vec(g_model.projection, mat_vec(ambient_w, ambient_vec))):
                raise InvalidPair(f"Weyl element {w_name} of {name} does not preserve the center")
        matrix = mat_mul(mat_mul(g_model.projection, ambient_w, g_model.ambient_rank), g_model.section)
        elements.append(WeylElement(w_name, matrix))

    h_rank = h_model.rank
    pair = SphericalPair(
        name=name,
        G=G,
        H=H,
        g_lattice=CocharLattice(tuple(g_labels) if g_labels else tuple(f"y{i + 1}" for i in range(g_model.rank))),
        h_lattice=CocharLattice(tuple(h_labels) if h_labels else tuple(f"x{i + 1}" for i in range(h_rank))),
        embed=quotient_embed,
        delta_g=delta_g,
        delta_h=delta_h,
        c_h=tuple(complements),
        n_exp=(),
        weyl=tuple(elements),
        params=tuple(sorted((params or {}).items())),
        g_model=g_model,
        h_model=h_model,
    )
    _validate(pair)
    n_exp = modulus_exponents(pair)
    log.debug(f"Built pair {pair.key}: G rank {g_model.rank}, H rank {h_rank}, N = {n_exp}")
    return replace(pair, n_exp=tuple((f.name, n_exp[f.name]) for f in delta_h))


def _kernel_directions(model: TorusModel) -> list[Vector]:
    """
    Ambient vectors spanning the kernel of the projection (the central directions).
    """
    if model.rank == model.ambient_rank:
        return []
    kernel = SympyMatrix(model.projection).nullspace() if model.rank else None
    if kernel is None:
        return [tuple(1 if i == j else 0 for j in range(model.ambient_rank)) for i in range(model.ambient_rank)]
    result = []
    for v in kernel:
        scale = lcm(*[Rational(x).q for x in v])
        result.append(tuple(int(Rational(x) * scale) for x in v))
    return result


def _validate(pair: SphericalPair):
    h_rank = pair.h_lattice.rank
    g_rank = pair.g_lattice.rank

    if h_rank > 0 and SympyMatrix(pair.embed).rank() != h_rank:
        raise InvalidPair(f"embedding of {pair.key} is not injective")

    names = [f.name for f in pair.delta_h]
    if set(names) & {f.name for f in pair.c_h}:
        raise InvalidPair(f"Delta_H and C_H of {pair.key} share names")
    if len(pair.c_h) > 1:
        raise InvalidPair(f"{pair.key} has {len(pair.c_h)} complement forms; at most one is supported")

    basis = pair.basis_forms
    if len(basis) != h_rank:
        raise InvalidPair(f"Delta_H + C_H of {pair.key} has {len(basis)} forms on a rank {h_rank} lattice")
    if h_rank and SympyMatrix([list(f.coefficients) for f in basis]).rank() != h_rank:
        raise InvalidPair(f"Delta_H + C_H of {pair.key} is not linearly independent")

    for alpha in pair.delta_g:
        if alpha.rank != g_rank:
            raise InvalidPair(f"G root {alpha.name} of {pair.key} has the wrong rank")
    for w in pair.weyl:
        _check_weyl(w, pair.g_model, pair.delta_g)


__all__ = [
    "CocharLattice",
    "LinearForm",
    "WeylElement",
    "SphericalPair",
    "pairing",
    "weyl_apply",
    "modulus_exponents",
    "build_pair",
]
