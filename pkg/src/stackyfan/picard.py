"""Orbifold line bundles on a weighted fan and their invariants.

A bundle is integer data l_rho, one per ray; equivalently a compatible
family of vertex characters m_sigma (one rational covector per maximal
cone, integral against that cone's cover lattice) with
<m_sigma, w_rho * nu_rho> = l_rho. Section counts are lattice point
counts of the Newton polytope {x : <x, w_rho nu_rho> >= l_rho}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import Incompatible, NotIntegral, StackyFanError
from .fan import WeightedFan
from .kernels import DEFAULT_CAP
from .lattice import (
    FiniteAbelianGroup,
    Lattice,
    RatVec,
    affine_meets_lattice,
    dot,
    dual_lattice,
    lattice_from_generators,
    lattice_from_rational_rows,
    quotient,
    reduce_mod_lattice,
    solve_integer_row,
    solve_rational,
    transpose,
    vec_sub,
)
from .orbifold import weighted_ray_lattice
from .polytope import Facet, HPolytope, lattice_points


@dataclass(frozen=True)
class Bundle:
    """Ray data l_rho of an orbifold line bundle."""

    fan: WeightedFan
    l: tuple[int, ...]

    def __post_init__(self):
        if len(self.l) != len(self.fan.rays):
            raise StackyFanError("need one integer per ray")
        if not all(isinstance(a, int) for a in self.l):
            raise StackyFanError("ray data must be integers")


@dataclass(frozen=True)
class VertexCharacters:
    """One character per maximal cone, in the fan's cone order."""

    fan: WeightedFan
    m: tuple[RatVec, ...]

    def __post_init__(self):
        if len(self.m) != len(self.fan.max_cones):
            raise StackyFanError("need one character per maximal cone")


def to_vertex_characters(bundle: Bundle) -> VertexCharacters:
    """Solve <m_sigma, w nu> = l on each maximal cone.

    Always succeeds for integer ray data; the inverse of to_ray_data."""
    fan = bundle.fan
    chars = []
    for cone in fan.max_cones:
        mat = fan.weighted_generators(cone)
        rhs = tuple(bundle.l[i] for i in cone)
        m = solve_rational(mat, rhs)
        if m is None:
            raise StackyFanError("cone generators are dependent; fan is not simplicial")
        chars.append(m)
    return VertexCharacters(fan, tuple(chars))


def to_ray_data(vc: VertexCharacters) -> Bundle:
    """Recover l_rho = <m_sigma, w nu> from compatible vertex characters.

    Raises Incompatible when two cones sharing a ray disagree on its
    pairing, or when a pairing is not an integer (character outside the
    cone's dual cover lattice).
    """
    fan = vc.fan
    values: dict[int, int] = {}
    for cone, m in zip(fan.max_cones, vc.m):
        for i in cone:
            pairing = dot(m, fan.rays[i].weighted_generator)
            f = Fraction(pairing)
            if f.denominator != 1:
                raise Incompatible(f"character pairs fractionally against ray {i}")
            v = int(f)
            if values.setdefault(i, v) != v:
                raise Incompatible(f"cones disagree on ray {i}")
    if len(values) != len(fan.rays):
        raise Incompatible("some ray lies in no maximal cone")
    return Bundle(fan, tuple(values[i] for i in range(len(fan.rays))))


def newton_polytope(bundle: Bundle) -> HPolytope:
    """{x : <x, w_rho nu_rho> >= l_rho}, facet weights = ray weights."""
    fan = bundle.fan
    facets = tuple(
        Facet(ray.generator, Fraction(l, ray.weight), ray.weight)
        for ray, l in zip(fan.rays, bundle.l)
    )
    return HPolytope(fan.rank, facets)


def h0(bundle: Bundle, cap: int = DEFAULT_CAP, engine: str | None = None) -> tuple[int, tuple]:
    """Dimension of the space of sections and the character list."""
    chars = lattice_points(newton_polytope(bundle), cap=cap, engine=engine)
    return len(chars), chars


def _shift_lattice(fan: WeightedFan, weighted: bool) -> Lattice:
    """Lattice of shift vectors (<u, g_rho>)_rho.

    weighted=False: g = nu, u over the dual of the global sublattice
    (chern classes). weighted=True: g = w nu, u over the standard dual
    lattice (bundle equivalence)."""
    m = len(fan.rays)
    if weighted:
        gens = transpose(tuple(r.weighted_generator for r in fan.rays))
        return lattice_from_generators(gens, m)
    dual = dual_lattice(weighted_ray_lattice(fan))
    rows = []
    for basis_row in dual.vectors():
        rows.append(tuple(dot(basis_row, r.generator) for r in fan.rays))
    return lattice_from_rational_rows(rows, m)


@dataclass(frozen=True)
class RationalClass:
    """First Chern class data: the vector (l_rho / w_rho)_rho reduced to a
    canonical representative modulo the dual-lattice shifts."""

    fan: WeightedFan
    rep: RatVec


@dataclass(frozen=True)
class BundleClass:
    """Isomorphism class of a bundle: l reduced modulo integral shifts."""

    fan: WeightedFan
    rep: tuple[int, ...]


def chern_class(bundle: Bundle) -> RationalClass:
    fan = bundle.fan
    h = tuple(Fraction(l, r.weight) for l, r in zip(bundle.l, fan.rays))
    rep = reduce_mod_lattice(h, _shift_lattice(fan, weighted=False))
    return RationalClass(fan, rep)


def rational_class(fan: WeightedFan, h) -> RationalClass:
    """Class of an arbitrary rational vector (h_rho)_rho."""
    h = tuple(Fraction(a) for a in h)
    if len(h) != len(fan.rays):
        raise StackyFanError("need one rational per ray")
    return RationalClass(fan, reduce_mod_lattice(h, _shift_lattice(fan, weighted=False)))


def bundle_class(bundle: Bundle) -> BundleClass:
    rep = reduce_mod_lattice(bundle.l, _shift_lattice(bundle.fan, weighted=True))
    assert all(a.denominator == 1 for a in rep)
    return BundleClass(bundle.fan, tuple(int(a) for a in rep))


def bundles_equivalent(a: Bundle, b: Bundle) -> bool:
    """Isomorphic as equivariant bundles: l's differ by an integral character."""
    if a.fan != b.fan:
        raise StackyFanError("bundles live on different fans")
    delta = vec_sub(b.l, a.l)
    mat = transpose(tuple(r.weighted_generator for r in a.fan.rays))
    return solve_integer_row(mat, delta) is not None


def is_orbi_integral(fan: WeightedFan, h) -> Bundle | None:
    """Does the rational class (h_rho)_rho contain integral bundle data?

    Searches (h + row space of the evaluation map) for a point of the
    product lattice of (1/w_rho) Z; scaling coordinate rho by w_rho turns
    that into a standard affine-meets-lattice problem. Returns a witness
    bundle or None.
    """
    h = tuple(Fraction(a) for a in h)
    m = len(fan.rays)
    if len(h) != m:
        raise StackyFanError("need one rational per ray")
    point = tuple(hh * r.weight for hh, r in zip(h, fan.rays))
    span = []
    for j in range(fan.rank):
        span.append(tuple(Fraction(r.weighted_generator[j]) for r in fan.rays))
    witness = affine_meets_lattice(point, span, Lattice.standard(m))
    if witness is None:
        return None
    return Bundle(fan, tuple(int(a) for a in witness))


def torsion_subgroup(fan: WeightedFan) -> tuple[FiniteAbelianGroup, tuple[RatVec, ...]]:
    """Torsion of the orbifold Picard group: dual of the global sublattice
    modulo the standard dual lattice. Canonically isomorphic to the dual
    of the orbifold fundamental group; representatives are normalized into
    [0,1)^n and sorted."""
    dual = dual_lattice(weighted_ray_lattice(fan))
    group, reps = quotient(dual, Lattice.standard(fan.rank))
    normalized = []
    for rep in reps:
        normalized.append(tuple(a - (a.numerator // a.denominator) for a in rep))
    normalized.sort()
    return group, tuple(normalized)


def twist(bundle: Bundle, u) -> Bundle:
    """Shift bundle data by a character u of the global cover torus:
    l_rho += <u, w_rho nu_rho>. Integral u give equivalent bundles;
    torsion representatives give the other bundles in the same class."""
    fan = bundle.fan
    shifts = [dot(u, r.weighted_generator) for r in fan.rays]
    new_l = []
    for l, s in zip(bundle.l, shifts):
        f = Fraction(s)
        if f.denominator != 1:
            raise StackyFanError("twist character must pair integrally with the rays")
        new_l.append(l + int(f))
    return Bundle(fan, tuple(new_l))


def bundles_with_class(fan: WeightedFan, h, cap: int = DEFAULT_CAP) -> tuple[tuple[BundleClass, Bundle, int], ...]:
    """All isomorphism classes of bundles with first Chern class h.

    Raises NotIntegral when the class admits no bundle. Returns one entry
    per torsion element: (canonical class, witness bundle, h0).
    """
    base = is_orbi_integral(fan, h)
    if base is None:
        raise NotIntegral("class admits no integral bundle data")
    _, reps = torsion_subgroup(fan)
    out = []
    for rep in reps:
        b = twist(base, rep)
        out.append((bundle_class(b), b, h0(b, cap=cap)[0]))
    return tuple(out)


def pullback_from_coarse(bundle: Bundle) -> bool:
    """Is the bundle the pullback of a line bundle on the underlying
    variety? True iff every vertex character is integral."""
    vc = to_vertex_characters(bundle)
    return all(all(Fraction(a).denominator == 1 for a in m) for m in vc.m)
