"""Orbifold invariants of a weighted fan.

The key object is the sublattice generated by the weighted ray
generators: per cone it is the chart cover lattice, and globally (over
all rays) its finite quotient of the ambient lattice is the orbifold
fundamental group. Re-expressing the weighted generators in a basis of
the global sublattice yields the universal cover as another weighted
fan.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import StackyFanError
from .fan import Ray, WeightedFan
from .lattice import (
    FiniteAbelianGroup,
    Lattice,
    RatVec,
    content,
    intersect,
    lattice_coordinates,
    lattice_from_generators,
    quotient,
    saturation,
)


@dataclass(frozen=True)
class CoverData:
    """Chart data of a cone: its cover lattice and the local group
    (the quotient of the ambient lattice by the cover lattice)."""

    cone: tuple[int, ...]
    lattice: Lattice
    group: FiniteAbelianGroup
    group_reps: tuple[RatVec, ...]


@dataclass(frozen=True)
class UniversalCover:
    fan: WeightedFan
    base_lattice: Lattice
    deck_group: FiniteAbelianGroup
    deck_reps: tuple[RatVec, ...]


def weighted_ray_lattice(fan: WeightedFan) -> Lattice:
    """Sublattice generated by all weighted ray generators."""
    return lattice_from_generators(fan.weighted_generators(), fan.rank)


def cone_cover_lattice(fan: WeightedFan, cone) -> Lattice:
    """Cover lattice of a cone (any face, given by its ray index set).

    For a maximal cone this is generated by its weighted ray generators;
    for a proper face it is the intersection of the cover lattices of all
    maximal cones containing it, which is the correct chart-compatible
    choice. The zero cone (empty index set) uses all maximal cones.
    """
    cone = tuple(sorted(cone))
    if len(cone) == fan.rank:
        if cone not in fan.max_cones:
            raise StackyFanError("not a cone of the fan")
        return lattice_from_generators(fan.weighted_generators(cone), fan.rank)
    supers = [c for c in fan.max_cones if set(cone) <= set(c)]
    if not supers:
        raise StackyFanError("not a face of any maximal cone")
    result = None
    for c in supers:
        lat = lattice_from_generators(fan.weighted_generators(c), fan.rank)
        result = lat if result is None else intersect(result, lat)
    return result


def cover_data(fan: WeightedFan, cone) -> CoverData:
    lat = cone_cover_lattice(fan, cone)
    group, reps = quotient(Lattice.standard(fan.rank), lat)
    return CoverData(tuple(sorted(cone)), lat, group, reps)


def chart_basis_check(fan: WeightedFan, cone) -> bool:
    """Do the weighted generators of the face extend to a basis of its
    cover lattice? Equivalently: is the quotient of the cover lattice by
    the span of the face's weighted generators torsion-free?"""
    cone = tuple(sorted(cone))
    cover = cone_cover_lattice(fan, cone)
    sub = lattice_from_generators(fan.weighted_generators(cone), fan.rank)
    sat_in_cover = intersect(saturation(sub), cover)
    return sat_in_cover == sub


def orbifold_fundamental_group(fan: WeightedFan) -> tuple[FiniteAbelianGroup, Lattice]:
    """First orbifold homotopy/homology of the associated orbifold
    (abelian for complete toric orbifolds), with the global sublattice."""
    lat = weighted_ray_lattice(fan)
    if lat.rank != fan.rank:
        raise StackyFanError("weighted ray generators do not span; fan cannot be complete")
    group, _ = quotient(Lattice.standard(fan.rank), lat)
    return group, lat


def universal_cover(fan: WeightedFan) -> UniversalCover:
    """The universal orbifold cover, as a weighted fan over the global
    sublattice (re-coordinatized in its canonical basis).

    Each weighted generator w * nu is rewritten in the new basis and split
    into a primitive generator times a new weight; cone combinatorics are
    unchanged. The deck transformation group is the orbifold fundamental
    group of the base, and the cover's own fundamental group is trivial.
    """
    base = weighted_ray_lattice(fan)
    if base.rank != fan.rank:
        raise StackyFanError("weighted ray generators do not span")
    rays = []
    for ray in fan.rays:
        coords = lattice_coordinates(base, ray.weighted_generator)
        assert coords is not None  # generators lie in the lattice they generate
        w = content(coords)
        rays.append(Ray(tuple(a // w for a in coords), w))
    cover_fan = WeightedFan(fan.rank, tuple(rays), fan.max_cones)
    deck, reps = quotient(Lattice.standard(fan.rank), base)
    check, _ = orbifold_fundamental_group(cover_fan)
    if not check.is_trivial:
        raise StackyFanError("internal error: cover is not simply connected")
    return UniversalCover(cover_fan, base, deck, reps)


def ray_stabilizer_order(fan: WeightedFan, ray_index: int) -> int:
    """Order of the stabilizer of a generic point of the ray's divisor."""
    return fan.rays[ray_index].weight
