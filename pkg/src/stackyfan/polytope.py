"""Rational convex polytopes in halfspace form.

A polytope is a conjunction of constraints <x, normal> >= offset with
primitive integer normals and rational offsets. Facets may carry a
positive integer weight (used by the orbifold layer); weights play no
role in the geometry here.

Exactness: all feasibility, projection and redundancy questions are
decided by Fourier-Motzkin elimination over Q with strict/weak flags;
vertex enumeration solves square rational systems.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm

from . import kernels
from .errors import EmptySlice, StackyFanError, Unbounded
from .lattice import (
    Lattice,
    RatVec,
    content,
    dot,
    kernel_rows,
    rat_rank,
    solve_rational,
    transpose,
    vec_mat,
    vec_sub,
)


@dataclass(frozen=True)
class Facet:
    """Constraint <x, normal> >= offset; normal is primitive."""

    normal: tuple[int, ...]
    offset: Fraction
    weight: int | None = None

    def __post_init__(self):
        if not any(self.normal):
            raise StackyFanError("facet normal must be nonzero")
        object.__setattr__(self, "offset", Fraction(self.offset))
        if self.weight is not None and self.weight < 1:
            raise StackyFanError("facet weight must be a positive integer")
        g = content(self.normal)
        if g != 1:
            object.__setattr__(self, "normal", tuple(a // g for a in self.normal))
            object.__setattr__(self, "offset", self.offset / g)


@dataclass(frozen=True)
class HPolytope:
    rank: int
    facets: tuple[Facet, ...]

    def __post_init__(self):
        # merge exact duplicates, preserving first occurrence order
        seen = {}
        for f in self.facets:
            if len(f.normal) != self.rank:
                raise StackyFanError("facet normal length does not match rank")
            key = (f.normal, f.offset)
            if key in seen and seen[key].weight != f.weight:
                raise StackyFanError("identical facets with conflicting weights")
            seen.setdefault(key, f)
        object.__setattr__(self, "facets", tuple(seen.values()))

    @staticmethod
    def empty(rank: int) -> "HPolytope":
        if rank < 1:
            raise StackyFanError("rank-0 polytopes cannot be empty")
        e1 = tuple(1 if j == 0 else 0 for j in range(rank))
        ne1 = tuple(-a for a in e1)
        return HPolytope(rank, (Facet(e1, Fraction(1)), Facet(ne1, Fraction(0))))

    def weights(self) -> tuple[int | None, ...]:
        return tuple(f.weight for f in self.facets)


# ---------------------------------------------------------------------------
# Fourier-Motzkin machinery.
#
# A row is (coeffs, rhs, strict) encoding coeffs @ x >= rhs (> when strict).
# Rows are normalized to primitive integer coefficient vectors; all-zero
# rows are legal and carry pure feasibility information.


def _normalize_row(coeffs, rhs, strict):
    d = 1
    for a in coeffs:
        d = lcm(d, Fraction(a).denominator)
    ints = tuple(int(Fraction(a) * d) for a in coeffs)
    g = content(ints)
    if g == 0:
        return ints, Fraction(rhs), strict
    return tuple(a // g for a in ints), Fraction(rhs) * Fraction(d, g), strict


def _zero_row_infeasible(rhs, strict) -> bool:
    return rhs > 0 or (rhs == 0 and strict)


def _fm_eliminate(rows, var):
    """Eliminate variable var; surviving rows have that coordinate removed."""
    zero, pos, neg = [], [], []
    for coeffs, rhs, strict in rows:
        a = coeffs[var]
        if a == 0:
            zero.append((coeffs, rhs, strict))
        elif a > 0:
            pos.append((coeffs, rhs, strict))
        else:
            neg.append((coeffs, rhs, strict))
    out = {}

    def add(coeffs, rhs, strict):
        coeffs = tuple(c for j, c in enumerate(coeffs) if j != var)
        coeffs, rhs, strict = _normalize_row(coeffs, rhs, strict)
        old = out.get(coeffs)
        if old is None or rhs > old[0] or (rhs == old[0] and strict and not old[1]):
            out[coeffs] = (rhs, strict)

    for coeffs, rhs, strict in zero:
        add(coeffs, rhs, strict)
    for pc, pr, ps in pos:
        for nc, nr, ns in neg:
            a, b = pc[var], -nc[var]
            combined = tuple(b * x + a * y for x, y in zip(pc, nc))
            add(combined, b * pr + a * nr, ps or ns)
    return [(c, r, s) for c, (r, s) in out.items()]


def _fm_feasible(rows, nvars) -> bool:
    """Exact feasibility of a mixed strict/weak linear inequality system."""
    cur = []
    for c, rhs, s in rows:
        c, rhs, s = _normalize_row(c, rhs, s)
        if not any(c):
            if _zero_row_infeasible(rhs, s):
                return False
            continue
        cur.append((c, rhs, s))
    for var in range(nvars - 1, -1, -1):
        cur = _fm_eliminate(cur, var)
        kept = []
        for c, rhs, s in cur:
            if not any(c):
                if _zero_row_infeasible(rhs, s):
                    return False
            else:
                kept.append((c, rhs, s))
        cur = kept
    return True


def _facet_rows(poly: HPolytope):
    return [(f.normal, f.offset, False) for f in poly.facets]


def is_empty(poly: HPolytope) -> bool:
    if poly.rank == 0:
        return False
    return not _fm_feasible(_facet_rows(poly), poly.rank)


def _recession_unbounded(poly: HPolytope) -> bool:
    """Does {x : all <x, normal> >= 0} contain a nonzero vector?

    The recession cone is projected onto each axis by eliminating the other
    variables; it is trivial iff every axis projection is pinched to 0 from
    both sides.
    """
    n = poly.rank
    hom = [(f.normal, Fraction(0), False) for f in poly.facets]
    for i in range(n):
        cur = list(hom)
        for var in sorted((v for v in range(n) if v != i), reverse=True):
            cur = _fm_eliminate(cur, var)
        has_pos = any(c[0] > 0 for c, _, _ in cur if c)
        has_neg = any(c[0] < 0 for c, _, _ in cur if c)
        if not (has_pos and has_neg):
            return True
    return False


def vertices(poly: HPolytope) -> tuple[RatVec, ...]:
    """All vertices, sorted lexicographically.

    Raises Unbounded for a nonempty polyhedron with a nontrivial recession
    cone; returns () for an empty polytope.
    """
    n = poly.rank
    if n == 0:
        return ((),)
    if is_empty(poly):
        return ()
    if _recession_unbounded(poly):
        raise Unbounded("polyhedron has a nontrivial recession cone")
    found = set()
    for combo in combinations(poly.facets, n):
        mat = tuple(f.normal for f in combo)
        if rat_rank(mat) != n:
            continue
        x = solve_rational(mat, tuple(f.offset for f in combo))
        if x is None or x in found:
            continue
        if all(dot(f.normal, x) >= f.offset for f in poly.facets):
            found.add(x)
    return tuple(sorted(found))


def facet_defining(poly: HPolytope, verts=None) -> tuple[bool, ...]:
    """Which stored constraints define facets (faces of dimension rank-1)."""
    if verts is None:
        verts = vertices(poly)
    n = poly.rank
    flags = []
    for f in poly.facets:
        active = [v for v in verts if dot(f.normal, v) == f.offset]
        if not active:
            flags.append(False)
            continue
        dirs = [vec_sub(v, active[0]) for v in active[1:]]
        flags.append(rat_rank(dirs) == n - 1 if dirs else n == 1)
    return tuple(flags)


def irredundant(poly: HPolytope) -> HPolytope:
    """Drop constraints that do not define facets; the set is unchanged."""
    verts = vertices(poly)
    if not verts:
        return poly
    flags = facet_defining(poly, verts)
    kept = tuple(f for f, keep in zip(poly.facets, flags) if keep)
    return HPolytope(poly.rank, kept)


def _ceil(x) -> int:
    f = Fraction(x)
    return -((-f.numerator) // f.denominator)


def _floor(x) -> int:
    f = Fraction(x)
    return f.numerator // f.denominator


def _enumerate_standard(poly: HPolytope, cap, engine):
    """Integer points of poly (standard lattice), lex order."""
    if poly.rank == 0:
        return [()]
    verts = vertices(poly)
    if not verts:
        return []
    lo = [_ceil(min(v[j] for v in verts)) for j in range(poly.rank)]
    hi = [_floor(max(v[j] for v in verts)) for j in range(poly.rank)]
    if any(l > h for l, h in zip(lo, hi)):
        return []
    norms, rhs = [], []
    for f in poly.facets:
        q = f.offset.denominator
        norms.append(tuple(q * a for a in f.normal))
        rhs.append(f.offset.numerator)
    return kernels.enumerate_box(lo, hi, norms, rhs, cap=cap, engine=engine)


def lattice_points(poly: HPolytope, lat: Lattice | None = None, cap: int = kernels.DEFAULT_CAP,
                   engine: str | None = None) -> tuple[tuple, ...]:
    """Points of lat inside poly, in lexicographic order (ambient coordinates).

    lat defaults to the standard integer lattice. Enumeration scans the
    bounding box of the vertices and is guarded by cap.
    """
    n = poly.rank
    if lat is None:
        lat = Lattice.standard(n)
    if lat.ambient_rank != n:
        raise StackyFanError("lattice ambient rank does not match polytope rank")
    if n == 0:
        return ((),)
    if not lat.basis:
        origin = tuple(0 for _ in range(n))
        return (origin,) if all(f.offset <= 0 for f in poly.facets) else ()
    if lat.den == 1 and lat.basis == Lattice.standard(n).basis:
        return tuple(_enumerate_standard(poly, cap, engine))
    # reparametrize: x = y @ basis / den with y integer
    rows = []
    for f in poly.facets:
        coeffs = tuple(dot(row, f.normal) for row in lat.basis)
        rhs = f.offset * lat.den
        if not any(coeffs):
            if rhs > 0:
                return ()
            continue
        g = content(coeffs)
        rows.append(Facet(tuple(a // g for a in coeffs), Fraction(rhs, g)))
    sub = HPolytope(lat.rank, tuple(rows))
    ys = _enumerate_standard(sub, cap, engine)
    out = []
    for y in ys:
        x = vec_mat(y, lat.basis)
        if lat.den == 1:
            out.append(tuple(int(a) for a in x))
        else:
            out.append(tuple(Fraction(a, lat.den) for a in x))
    out.sort()
    return tuple(out)


def project(poly: HPolytope, pi, prune: bool = True) -> HPolytope:
    """Image of poly under x -> (<x, row> for row in pi), as a polytope.

    pi is a d x n integer matrix given by rows. Works by Fourier-Motzkin
    elimination of the x variables from the graph system; redundant
    constraints are pruned afterwards.
    """
    d = len(pi)
    n = poly.rank
    for row in pi:
        if len(row) != n:
            raise StackyFanError("projection row length does not match rank")
    rows = []
    for f in poly.facets:
        rows.append((tuple([0] * d) + tuple(f.normal), f.offset, False))
    for i, prow in enumerate(pi):
        e = tuple(1 if j == i else 0 for j in range(d))
        rows.append((e + tuple(-a for a in prow), Fraction(0), False))
        rows.append((tuple(-a for a in e) + tuple(prow), Fraction(0), False))
    cur = rows
    for var in range(d + n - 1, d - 1, -1):
        cur = _fm_eliminate(cur, var)
    facets = []
    for coeffs, rhs, _ in cur:
        if not any(coeffs):
            if rhs > 0:
                if d == 0:
                    raise EmptySlice("projection of an empty polytope to rank 0")
                return HPolytope.empty(d)
            continue
        facets.append(Facet(tuple(coeffs), rhs))
    result = HPolytope(d, tuple(facets))
    if prune and d:
        result = _prune_redundant(result)
    return result


def _prune_redundant(poly: HPolytope) -> HPolytope:
    kept = list(poly.facets)
    i = 0
    while i < len(kept):
        others = kept[:i] + kept[i + 1:]
        probe = [(f.normal, f.offset, False) for f in others]
        f = kept[i]
        # redundant iff the others force <x, normal> >= offset everywhere
        probe.append((tuple(-a for a in f.normal), -f.offset, True))
        if _fm_feasible(probe, poly.rank):
            i += 1
        else:
            kept.pop(i)
    return HPolytope(poly.rank, tuple(kept))


@dataclass(frozen=True)
class SliceResult:
    """Polytope {y : x0 + y @ kernel_basis in P} plus bookkeeping.

    provenance[i] lists the indices of the original facets that restricted
    to facet i of the slice polytope.
    """

    polytope: HPolytope
    kernel_basis: tuple[tuple[int, ...], ...]
    x0: RatVec
    provenance: tuple[tuple[int, ...], ...]


def polytope_slice(poly: HPolytope, pi, alpha, x0=None, kernel_basis=None) -> SliceResult:
    """Slice of poly by the fiber {x : pi(x) = alpha}, in kernel coordinates.

    Coordinates are y with x = x0 + y @ B, B a basis of the saturated
    integer kernel of pi; integer y then sweep exactly the integer points
    of the fiber whenever x0 is integral.
    """
    d = len(pi)
    n = poly.rank
    alpha = tuple(Fraction(a) for a in alpha)
    if x0 is None:
        if d:
            x0 = solve_rational(pi, alpha)
            if x0 is None:
                raise StackyFanError("pi does not attain the requested value")
        else:
            x0 = tuple(Fraction(0) for _ in range(n))
    else:
        x0 = tuple(Fraction(a) for a in x0)
        if tuple(dot(row, x0) for row in pi) != alpha:
            raise StackyFanError("x0 does not project to alpha")
    if kernel_basis is None:
        kernel_basis = kernel_rows(transpose(pi)) if d else Lattice.standard(n).basis
    k = len(kernel_basis)
    merged: dict[tuple, list[int]] = {}
    infeasible = False
    for idx, f in enumerate(poly.facets):
        coeffs = tuple(dot(row, f.normal) for row in kernel_basis)
        rhs = f.offset - dot(x0, f.normal)
        if not any(coeffs):
            if rhs > 0:
                infeasible = True
            continue
        g = content(coeffs)
        key = (tuple(a // g for a in coeffs), Fraction(rhs, g))
        merged.setdefault(key, []).append(idx)
    if infeasible:
        if k == 0:
            raise EmptySlice("fiber misses the polytope")
        e = HPolytope.empty(k)
        return SliceResult(e, tuple(kernel_basis), x0, ((), ()))
    built = tuple(Facet(nrm, off) for (nrm, off) in merged)
    prov = tuple(tuple(v) for v in merged.values())
    return SliceResult(HPolytope(k, built), tuple(kernel_basis), x0, prov)
