"""Symplectic reduction of weighted polytopes by subtori.

A subtorus is given by a saturated integer basis of its Lie-algebra
lattice; the moment projection pairs points against the basis rows.
Reduction at a value alpha slices the polytope by the fiber, transfers
facet weights through the quotient lattice, and (when the slice is a
legal weighted polytope) produces the reduced orbifold. Section counts
decompose exactly over the Bohr-Sommerfeld values of the image.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptySlice, NotOrbifold, StackyFanError
from .kernels import DEFAULT_CAP
from .lattice import (
    Lattice,
    RatVec,
    affine_meets_lattice,
    content,
    dot,
    lattice_from_generators,
    rat_rank,
    saturation,
    transpose,
    vec_sub,
)
from .picard import Bundle, h0, newton_polytope
from .polytope import (
    Facet,
    HPolytope,
    facet_defining,
    is_empty,
    lattice_points,
    polytope_slice,
    project,
    vertices,
)
from .prequant import require_weighted


@dataclass(frozen=True)
class Subtorus:
    """Sub-Lie-algebra lattice, stored as its canonical saturated basis.

    An empty basis (the trivial subtorus) is legal but then the ambient
    rank must be passed explicitly.
    """

    basis: tuple[tuple[int, ...], ...]
    rank: int | None = None

    def __post_init__(self):
        basis = tuple(tuple(int(a) for a in row) for row in self.basis)
        if basis:
            n = len(basis[0])
            if self.rank is not None and self.rank != n:
                raise StackyFanError("rank does not match basis row length")
            if any(len(row) != n for row in basis):
                raise StackyFanError("ragged basis")
            lat = saturation(lattice_from_generators(basis, n))
            if lat.rank != len(basis):
                raise StackyFanError("basis rows must be linearly independent")
            basis = lat.basis
        elif self.rank is None:
            raise StackyFanError("trivial subtorus needs an explicit ambient rank")
        else:
            n = self.rank
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "rank", n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def moment(self, x) -> tuple:
        """Projection of a point of the dual space: pairing against rows."""
        return tuple(dot(row, x) for row in self.basis)

    def image_lattice(self) -> Lattice:
        """Image of the standard lattice under the moment projection.

        The basis is saturated, so this is the full standard lattice of
        the image space; computed explicitly anyway."""
        if not self.basis:
            return Lattice.standard(0)
        cols = transpose(self.basis)
        return lattice_from_generators(cols, self.dim)


def moment_image(poly: HPolytope, sub: Subtorus, prune: bool = True) -> HPolytope:
    """Image polytope of the moment projection."""
    return project(poly, sub.basis, prune=prune)


def critical_values(poly: HPolytope, sub: Subtorus):
    """Values over which the fiber degenerates: images of the faces on
    which the projection fails to be submersive (affinely non-surjective).

    For a one-dimensional subtorus returns sorted Fractions; in general a
    tuple of vertex lists of the image polytopes of the critical faces.
    """
    verts = vertices(poly)
    if not verts:
        return ()
    if len(poly.facets) > 20:
        raise StackyFanError("too many facets for exact face enumeration")
    d = sub.dim
    images = []
    seen_faces = set()
    for mask in range(1 << len(poly.facets)):
        chosen = [f for i, f in enumerate(poly.facets) if mask >> i & 1]
        face_verts = tuple(v for v in verts
                           if all(dot(f.normal, v) == f.offset for f in chosen))
        if not face_verts or face_verts in seen_faces:
            continue
        seen_faces.add(face_verts)
        dirs = [vec_sub(v, face_verts[0]) for v in face_verts[1:]]
        proj_dirs = [sub.moment(u) for u in dirs]
        if rat_rank(proj_dirs) >= d:
            continue  # projection restricted to this face is surjective
        img = tuple(sorted(set(sub.moment(v) for v in face_verts)))
        images.append(img)
    if d == 1:
        flat = sorted(set(Fraction(pt[0]) for img in images for pt in img))
        return tuple(flat)
    dedup = sorted(set(images))
    return tuple(dedup)


def _alpha_in_convex_hull(alpha, points) -> bool:
    """Exact membership of alpha in conv(points) via feasibility of the
    barycentric system."""
    from .polytope import _fm_feasible

    k = len(points)
    d = len(alpha)
    rows = []
    for i in range(k):
        e = tuple(Fraction(int(i == j)) for j in range(k))
        rows.append((e, Fraction(0), False))
    ones = tuple(Fraction(1) for _ in range(k))
    rows.append((ones, Fraction(1), False))
    rows.append((tuple(-a for a in ones), Fraction(-1), False))
    for c in range(d):
        coeffs = tuple(Fraction(points[i][c]) for i in range(k))
        val = Fraction(alpha[c])
        rows.append((coeffs, val, False))
        rows.append((tuple(-a for a in coeffs), -val, False))
    return _fm_feasible(rows, k)


def _as_value(alpha, d) -> tuple:
    out = tuple(Fraction(a) for a in alpha) if isinstance(alpha, (tuple, list)) else (Fraction(alpha),)
    if len(out) != d:
        raise StackyFanError(f"value has length {len(out)}, subtorus has dimension {d}")
    return out


def _alpha_text(alpha) -> str:
    return "(" + ",".join(str(a) for a in alpha) + ")"


def is_regular_value(poly: HPolytope, sub: Subtorus, alpha) -> bool:
    alpha = _as_value(alpha, sub.dim)
    crit = critical_values(poly, sub)
    if sub.dim == 1:
        return alpha[0] not in crit
    return not any(_alpha_in_convex_hull(alpha, img) for img in crit)


def bs_values(poly: HPolytope, sub: Subtorus, cap: int = DEFAULT_CAP):
    """Bohr-Sommerfeld set: integral points of the moment image, each
    flagged regular or critical. Returns a tuple of (alpha, regular)."""
    if is_empty(poly):
        return ()
    image = moment_image(poly, sub)
    pts = lattice_points(image, sub.image_lattice(), cap=cap)
    crit = critical_values(poly, sub)
    out = []
    for alpha in pts:
        if sub.dim == 1:
            regular = Fraction(alpha[0]) not in crit
        else:
            regular = not any(_alpha_in_convex_hull(alpha, img) for img in crit)
        out.append((alpha, regular))
    return tuple(out)


@dataclass(frozen=True)
class ReducedOrbifold:
    """A successful reduction: weighted polytope in kernel coordinates.

    A slice consisting of a single point (the level of a vertex image)
    reduces to the rank-0 point polytope regardless of the fiber
    dimension; x0 then is that point in the ambient coordinates.
    """

    polytope: HPolytope
    kernel_basis: tuple[tuple[int, ...], ...]
    x0: RatVec
    alpha: tuple


def reduce_at(poly: HPolytope, sub: Subtorus, alpha, x0=None, kernel_basis=None) -> ReducedOrbifold:
    """Reduction at level alpha, as a weighted polytope.

    The slice facets inherit weights: the image of w_F * normal_F in the
    quotient lattice equals (transferred weight) * (primitive normal of
    the slice facet). Raises EmptySlice when the fiber misses the
    polytope and NotOrbifold when the slice is not a legal full-
    dimensional weighted polytope with consistent transfers.
    """
    require_weighted(poly)
    alpha = _as_value(alpha, sub.dim)
    sl = polytope_slice(poly, sub.basis, alpha, x0=x0, kernel_basis=kernel_basis)
    k = sl.polytope.rank
    verts = vertices(sl.polytope)
    if not verts:
        raise EmptySlice(f"fiber over {_alpha_text(alpha)} misses the polytope")
    if len(verts) == 1 and k > 0:
        # a vertex image: the reduction is a point orbifold
        point = tuple(Fraction(a) + dot(verts[0], col)
                      for a, col in zip(sl.x0, transpose(sl.kernel_basis)))
        return ReducedOrbifold(HPolytope(0, ()), sl.kernel_basis, point, alpha)
    if k > 0:
        dirs = [vec_sub(v, verts[0]) for v in verts[1:]]
        if rat_rank(dirs) != k:
            raise NotOrbifold(f"slice at {_alpha_text(alpha)} is lower-dimensional "
                              "in the fiber but not a point")
    flags = facet_defining(sl.polytope, verts)
    new_facets = []
    for keep, facet, parents in zip(flags, sl.polytope.facets, sl.provenance, strict=True):
        if not keep:
            continue
        # every parent restricts to a positive multiple of facet.normal
        weights = set()
        for idx in parents:
            parent = poly.facets[idx]
            image = tuple(dot(row, parent.normal) for row in sl.kernel_basis)
            weights.add(parent.weight * content(image))
        if len(weights) > 1:
            raise NotOrbifold(f"ambiguous weight transfer {sorted(weights)} at {_alpha_text(alpha)}")
        new_facets.append(Facet(facet.normal, facet.offset, weights.pop()))
    reduced = HPolytope(k, tuple(new_facets))
    if k > 0:
        from .fan import dual_fan

        dual_fan(reduced)  # raises NotSimplicial when a vertex is not simple
    return ReducedOrbifold(reduced, sl.kernel_basis, sl.x0, alpha)


def leaf_h0(bundle: Bundle, sub: Subtorus, alpha, cap: int = DEFAULT_CAP) -> int:
    """Multiplicity of the character fiber over alpha: number of sections
    whose character projects to alpha.

    Computed by slice enumeration in kernel coordinates (when an integral
    base point exists) and cross-checked against a direct filter of the
    Newton polytope's points; the two routes must agree exactly.
    """
    alpha = _as_value(alpha, sub.dim)
    poly = newton_polytope(bundle)
    direct = sum(1 for x in lattice_points(poly, cap=cap) if tuple(map(Fraction, sub.moment(x))) == alpha)
    n = poly.rank
    if sub.dim == 0:
        x0 = tuple(0 for _ in range(n))
    else:
        point = affine_meets_lattice(_any_fiber_point(sub, alpha), _kernel_span(sub),
                                     Lattice.standard(n))
        if point is None:
            if direct:
                raise StackyFanError("internal error: sections exist on a non-integral fiber")
            return 0
        x0 = tuple(int(a) for a in point)
    sl = polytope_slice(poly, sub.basis, alpha, x0=x0)
    sliced = len(lattice_points(sl.polytope, cap=cap))
    if sliced != direct:
        raise StackyFanError("internal error: slice count disagrees with direct count")
    return sliced


def _any_fiber_point(sub: Subtorus, alpha) -> RatVec:
    """Some rational point of the moment fiber over alpha."""
    from .lattice import solve_rational

    x = solve_rational(sub.basis, tuple(Fraction(a) for a in alpha))
    if x is None:
        raise StackyFanError("moment projection does not attain the requested value")
    return x


def _kernel_span(sub: Subtorus):
    from .lattice import kernel_rows

    return kernel_rows(transpose(sub.basis))


@dataclass(frozen=True)
class Leaf:
    """One Bohr-Sommerfeld value with its section multiplicity and, when
    the slice is a legal weighted polytope, the reduced orbifold."""

    alpha: tuple
    regular: bool
    h0: int
    reduced: ReducedOrbifold | None
    failure: str | None


@dataclass(frozen=True)
class ReductionReport:
    bundle: Bundle
    subtorus: Subtorus
    # None only when the bundle has no sections and the image space is a
    # point: the empty subset of a rank-0 space has no H-description
    p1: HPolytope | None
    critical_values: tuple
    bs_values: tuple
    leaves: tuple[Leaf, ...]
    leaf_total: int
    h0_total: int
    total_check: bool


def qr_rq_report(bundle: Bundle, sub: Subtorus, cap: int = DEFAULT_CAP) -> ReductionReport:
    """Quantization-commutes-with-reduction report: one leaf per
    Bohr-Sommerfeld value with its section multiplicity and (when the
    slice is legal) the reduced weighted polytope. total_check records
    whether the leaf counts partition h0; a False here is a bug, never
    expected input behavior.
    """
    poly = newton_polytope(bundle)
    total_h0 = h0(bundle, cap=cap)[0]
    values = bs_values(poly, sub, cap=cap)
    crit = critical_values(poly, sub)
    leaves = []
    running = 0
    for alpha, regular in values:
        count = leaf_h0(bundle, sub, alpha, cap=cap)
        running += count
        reduced = None
        failure = None
        try:
            reduced = reduce_at(poly, sub, alpha)
        except (NotOrbifold, EmptySlice, StackyFanError) as exc:
            failure = f"{type(exc).__name__}: {exc}"
        leaves.append(Leaf(tuple(alpha), regular, count, reduced, failure))
    try:
        image = moment_image(poly, sub)
    except EmptySlice:
        image = None  # empty polytope, trivial subtorus
    return ReductionReport(bundle, sub, image, crit, values,
                           tuple(leaves), running, total_h0, running == total_h0)
