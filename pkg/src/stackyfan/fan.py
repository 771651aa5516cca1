"""Weighted (labelled) simplicial fans.

A weighted fan is a complete simplicial fan whose rays carry positive
integer weights. Rays store primitive generators; maximal cones are sets
of ray indices of size equal to the rank. Completeness is decided
combinatorially: every facet of a maximal cone must be shared with
exactly one other maximal cone, with the two opposite rays strictly on
opposite sides, and the facet-adjacency graph must be connected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotSimplicial, StackyFanError
from .lattice import content, det, dot, kernel_rows, rat_rank, transpose, vec_sub
from .polytope import HPolytope, _fm_feasible, facet_defining, vertices


@dataclass(frozen=True)
class Ray:
    generator: tuple[int, ...]
    weight: int = 1

    def __post_init__(self):
        if not any(self.generator):
            raise StackyFanError("ray generator must be nonzero")
        if self.weight < 1:
            raise StackyFanError("ray weight must be a positive integer")
        g = content(self.generator)
        if g != 1:
            object.__setattr__(self, "generator", tuple(a // g for a in self.generator))

    @property
    def weighted_generator(self) -> tuple[int, ...]:
        return tuple(self.weight * a for a in self.generator)


@dataclass(frozen=True)
class WeightedFan:
    rank: int
    rays: tuple[Ray, ...]
    max_cones: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        gens = set()
        for ray in self.rays:
            if len(ray.generator) != self.rank:
                raise StackyFanError("ray generator length does not match rank")
            if ray.generator in gens:
                raise StackyFanError("duplicate ray generator")
            gens.add(ray.generator)
        cones = []
        for cone in self.max_cones:
            cone = tuple(sorted(cone))
            if len(set(cone)) != len(cone):
                raise StackyFanError("repeated ray index in a cone")
            if any(i < 0 or i >= len(self.rays) for i in cone):
                raise StackyFanError("ray index out of range")
            if len(cone) != self.rank:
                raise NotSimplicial("maximal cones must have exactly rank many rays")
            cones.append(cone)
        object.__setattr__(self, "max_cones", tuple(cones))

    def generators(self, cone) -> tuple[tuple[int, ...], ...]:
        return tuple(self.rays[i].generator for i in cone)

    def weighted_generators(self, cone=None) -> tuple[tuple[int, ...], ...]:
        idx = cone if cone is not None else range(len(self.rays))
        return tuple(self.rays[i].weighted_generator for i in idx)


@dataclass(frozen=True)
class ValidationReport:
    rays_primitive: tuple[bool, ...]
    weights_positive: tuple[bool, ...]
    cones_simplicial: tuple[bool, ...]
    pairs_compatible: tuple[tuple[int, int, bool], ...]
    complete: bool
    problems: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.problems


def _cones_intersect_beyond_common_face(fan: WeightedFan, c1, c2) -> bool:
    """Exact test whether cone(c1) and cone(c2) share more than cone(c1 & c2).

    Feasibility over Q of: x in both cones with positive total coefficient
    mass on the non-shared rays (normalized to 1). Simpliciality makes the
    cone coordinates unique, so a nonzero extra mass certifies a point
    outside the common face.
    """
    shared = set(c1) & set(c2)
    n = fan.rank
    k1, k2 = len(c1), len(c2)
    nvars = k1 + k2
    rows = []
    for i in range(nvars):
        e = tuple(1 if j == i else 0 for j in range(nvars))
        rows.append((e, Fraction(0), False))  # coefficients nonnegative
    for coord in range(n):
        lhs = [Fraction(0)] * nvars
        for pos, ri in enumerate(c1):
            lhs[pos] = Fraction(fan.rays[ri].generator[coord])
        for pos, ri in enumerate(c2):
            lhs[k1 + pos] -= Fraction(fan.rays[ri].generator[coord])
        rows.append((tuple(lhs), Fraction(0), False))
        rows.append((tuple(-a for a in lhs), Fraction(0), False))
    mass = [Fraction(0)] * nvars
    for pos, ri in enumerate(c1):
        if ri not in shared:
            mass[pos] = Fraction(1)
    for pos, ri in enumerate(c2):
        if ri not in shared:
            mass[k1 + pos] = Fraction(1)
    rows.append((tuple(mass), Fraction(1), False))
    rows.append((tuple(-a for a in mass), Fraction(-1), False))
    return _fm_feasible(rows, nvars)


def _facet_normal(fan: WeightedFan, facet) -> tuple[int, ...] | None:
    """Primitive normal of the hyperplane spanned by the facet's rays.

    For rank 1 the facet is empty and the hyperplane is the origin."""
    if not facet:
        return (1,) if fan.rank == 1 else None
    kern = kernel_rows(transpose(fan.generators(facet)))
    return kern[0] if len(kern) == 1 else None


def _completeness(fan: WeightedFan, simplicial_flags) -> tuple[bool, list[str]]:
    problems = []
    if not all(simplicial_flags) or not fan.max_cones:
        return False, ["completeness undecidable: non-simplicial or empty fan"]
    n = fan.rank
    facets: dict[tuple[int, ...], list[int]] = {}
    for ci, cone in enumerate(fan.max_cones):
        for drop in cone:
            facet = tuple(i for i in cone if i != drop)
            facets.setdefault(facet, []).append(ci)
    complete = True
    adjacency = {i: set() for i in range(len(fan.max_cones))}
    for facet, owners in facets.items():
        if len(owners) != 2:
            complete = False
            problems.append(f"facet {facet} belongs to {len(owners)} maximal cones")
            continue
        a, b = owners
        normal = _facet_normal(fan, facet)
        if normal is None:
            complete = False
            problems.append(f"facet {facet} spans a degenerate hyperplane")
            continue
        opp_a = next(i for i in fan.max_cones[a] if i not in facet)
        opp_b = next(i for i in fan.max_cones[b] if i not in facet)
        sa = dot(normal, fan.rays[opp_a].generator)
        sb = dot(normal, fan.rays[opp_b].generator)
        if sa * sb >= 0:
            complete = False
            problems.append(f"cones {a} and {b} lie on the same side of facet {facet}")
            continue
        adjacency[a].add(b)
        adjacency[b].add(a)
    if complete:
        seen = {0}
        stack = [0]
        while stack:
            for nb in adjacency[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if len(seen) != len(fan.max_cones):
            complete = False
            problems.append("facet-adjacency graph is disconnected")
    return complete, problems


def validate(fan: WeightedFan) -> ValidationReport:
    """Full structural report: primitivity, weights, simpliciality of the
    maximal cones, pairwise face compatibility, completeness."""
    problems = []
    rays_primitive = tuple(content(r.generator) == 1 for r in fan.rays)
    weights_positive = tuple(r.weight >= 1 for r in fan.rays)
    simplicial = []
    for cone in fan.max_cones:
        gens = fan.generators(cone)
        ok = len(cone) == fan.rank and det(gens) != 0
        simplicial.append(ok)
        if not ok:
            problems.append(f"cone {cone} is not simplicial")
    pairs = []
    for i in range(len(fan.max_cones)):
        for j in range(i + 1, len(fan.max_cones)):
            if not (simplicial[i] and simplicial[j]):
                pairs.append((i, j, False))
                continue
            bad = _cones_intersect_beyond_common_face(fan, fan.max_cones[i], fan.max_cones[j])
            pairs.append((i, j, not bad))
            if bad:
                problems.append(f"cones {i} and {j} overlap beyond their common face")
    complete, comp_problems = _completeness(fan, simplicial)
    problems.extend(comp_problems)
    return ValidationReport(
        rays_primitive=rays_primitive,
        weights_positive=weights_positive,
        cones_simplicial=tuple(simplicial),
        pairs_compatible=tuple(pairs),
        complete=complete,
        problems=tuple(problems),
    )


def dual_fan(poly: HPolytope) -> tuple[WeightedFan, tuple]:
    """Normal fan of a full-dimensional bounded polytope, with weights
    carried over from the facets.

    Rays are the primitive inner facet normals; the maximal cone at each
    vertex collects the normals of the facets active there. Raises
    NotSimplicial at a vertex with more than rank active facets (after
    discarding non-facet-defining constraints).

    Returns (fan, vertices) with vertices[i] the vertex whose normal cone
    is max_cones[i].
    """
    n = poly.rank
    verts = vertices(poly)
    if not verts:
        raise StackyFanError("polytope is empty")
    if len(verts) < 2 and n > 0:
        raise StackyFanError("polytope is not full-dimensional")
    span = [vec_sub(v, verts[0]) for v in verts[1:]]
    if rat_rank(span) != n:
        raise StackyFanError("polytope is not full-dimensional")
    flags = facet_defining(poly, verts)
    live = [f for f, keep in zip(poly.facets, flags) if keep]
    for f in live:
        if f.weight is None:
            raise StackyFanError("dual fan requires weights on all facets")
    rays = tuple(Ray(f.normal, f.weight) for f in live)
    cones = []
    for v in verts:
        active = tuple(i for i, f in enumerate(live) if dot(f.normal, v) == f.offset)
        if len(active) != n:
            raise NotSimplicial(f"vertex {v} has {len(active)} active facets")
        gens = tuple(live[i].normal for i in active)
        if det(gens) == 0:
            raise NotSimplicial(f"vertex {v} has dependent facet normals")
        cones.append(active)
    return WeightedFan(n, rays, tuple(cones)), verts


def common_face(fan: WeightedFan, c1, c2) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
    """Shared face of two maximal cones: (ray indices, basis of its
    orthogonal complement in the dual space)."""
    c1 = tuple(sorted(c1))
    c2 = tuple(sorted(c2))
    if c1 not in fan.max_cones or c2 not in fan.max_cones:
        raise StackyFanError("arguments must be maximal cones of the fan")
    if _cones_intersect_beyond_common_face(fan, c1, c2):
        raise StackyFanError("cones overlap beyond a common face; fan is invalid")
    shared = tuple(i for i in c1 if i in set(c2))
    if shared:
        perp = kernel_rows(transpose(fan.generators(shared)))
    else:
        perp = tuple(tuple(1 if j == i else 0 for j in range(fan.rank)) for i in range(fan.rank))
    return shared, perp
