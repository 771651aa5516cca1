"""Prequantization of weighted polytopes.

A weighted polytope (rational polytope with a positive integer weight on
every facet) is prequantizable iff some translate puts every vertex into
the dual cover lattice of its normal cone; equivalently iff the system
w_F * (offset_F + <t, normal_F>) in Z has a rational solution t. The
witness translation then produces integral bundle data on the dual fan,
and the full set of prequantizations is a torsor under the torsion of
the orbifold Picard group.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import StackyFanError
from .fan import WeightedFan, dual_fan
from .kernels import DEFAULT_CAP
from .lattice import (
    Lattice,
    RatVec,
    affine_meets_lattice,
    dot,
    lattice_from_rational_rows,
    reduce_mod_lattice,
    saturation,
    solve_rational,
    vec_add,
)
from .orbifold import cone_cover_lattice
from .picard import Bundle, BundleClass, bundle_class, h0, torsion_subgroup, twist
from .polytope import HPolytope, facet_defining


def require_weighted(poly: HPolytope) -> HPolytope:
    if any(f.weight is None for f in poly.facets):
        raise StackyFanError("every facet needs a positive integer weight")
    return poly


@dataclass(frozen=True)
class PrequantResult:
    prequantizable: bool
    translation: RatVec | None
    fan: WeightedFan | None
    bundle: Bundle | None
    torsor: tuple[tuple[BundleClass, Bundle, int], ...]


def vertex_characters_of_polytope(poly: HPolytope, t) -> tuple[RatVec, ...]:
    """Translated vertices v + t, verified to lie in the dual cover
    lattice of their normal cones; raises if t is not a valid witness."""
    require_weighted(poly)
    fan, verts = dual_fan(poly)
    t = tuple(Fraction(a) for a in t)
    chars = []
    for v, cone in zip(verts, fan.max_cones):
        m = vec_add(v, t)
        cover = cone_cover_lattice(fan, cone)
        for gen in cover.vectors():
            if Fraction(dot(m, gen)).denominator != 1:
                raise StackyFanError("translated vertex pairs fractionally with its cover lattice")
        chars.append(m)
    return tuple(chars)


def prequantize(poly: HPolytope, cap: int = DEFAULT_CAP) -> PrequantResult:
    """Decide prequantizability and construct the torsor of bundles.

    The integrality conditions ask for an integer point on the affine
    subspace {(w_F(offset_F + <t, normal_F>))_F : t rational}; the witness
    is canonicalized by reduction modulo the lattice of integer points of
    the subspace's direction, making the result deterministic.
    """
    require_weighted(poly)
    flags = facet_defining(poly)
    if not all(flags):
        raise StackyFanError("weighted polytopes must list exactly their facets "
                             "(a constraint does not define a facet)")
    fan, verts = dual_fan(poly)
    m = len(poly.facets)
    point = tuple(Fraction(f.weight) * f.offset for f in poly.facets)
    span = []
    n = poly.rank
    for j in range(n):
        span.append(tuple(Fraction(f.weight * f.normal[j]) for f in poly.facets))
    witness = affine_meets_lattice(point, span, Lattice.standard(m))
    if witness is None:
        return PrequantResult(False, None, None, None, ())
    # canonicalize the witness inside its coset: the witnesses form a coset
    # of the integer points of the span
    direction = saturation(lattice_from_rational_rows(span, m))
    witness = reduce_mod_lattice(witness, direction)
    l = tuple(int(a) for a in witness)
    # recover the translation: w_F(c_F + <t, a_F>) = l_F
    rows = tuple(f.normal for f in poly.facets)
    rhs = tuple(Fraction(lf, f.weight) - f.offset for lf, f in zip(l, poly.facets))
    t = solve_rational(rows, rhs)
    assert t is not None  # witness lies on the subspace by construction
    bundle = Bundle(fan, l)
    # sanity: translated vertices are the bundle's vertex characters
    vertex_characters_of_polytope(poly, t)
    _, reps = torsion_subgroup(fan)
    torsor = []
    for rep in reps:
        b = twist(bundle, rep)
        torsor.append((bundle_class(b), b, h0(b, cap=cap)[0]))
    return PrequantResult(True, t, fan, bundle, tuple(torsor))
