"""Exact lattice arithmetic over Z and Q.

Conventions used throughout the package:

* vectors are row tuples; matrices are tuples of row tuples;
* a lattice is the integer row span of a basis matrix divided by a single
  positive denominator, kept in a canonical form (row-style Hermite normal
  form, gcd-reduced against the denominator) so that equality of lattices
  is equality of the dataclass;
* rationals are fractions.Fraction, never floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product
from math import gcd, lcm, prod

from .errors import StackyFanError

IntVec = tuple[int, ...]
IntMat = tuple[IntVec, ...]
RatVec = tuple[Fraction, ...]

Vec = tuple  # int or Fraction entries


def dot(u, v):
    return sum(a * b for a, b in zip(u, v, strict=True))


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vec_scale(c, u):
    return tuple(c * a for a in u)


def mat_mul(a, b):
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def mat_vec(a, v):
    """a @ v with v a column vector; returns a tuple."""
    return tuple(dot(row, v) for row in a)


def vec_mat(v, a):
    """v @ a with v a row vector."""
    return tuple(dot(v, col) for col in transpose(a))


def transpose(a):
    return tuple(zip(*a)) if a else ()


def identity_matrix(n: int) -> IntMat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def content(v) -> int:
    """gcd of the entries (0 for the zero vector)."""
    g = 0
    for a in v:
        g = gcd(g, a)
    return g


def primitive_part(v: IntVec) -> IntVec:
    g = content(v)
    if g == 0:
        raise StackyFanError("zero vector has no primitive part")
    return tuple(a // g for a in v)


def is_integral(v) -> bool:
    return all(Fraction(a).denominator == 1 for a in v)


def to_int_vec(v) -> IntVec:
    return tuple(int(a) for a in v)


# ---------------------------------------------------------------------------
# normal forms


def hermite_normal_form(rows) -> tuple[IntMat, IntMat]:
    """Row-style Hermite normal form.

    Returns (H, U) with H = U @ rows, U unimodular, H in row echelon form
    with pivot columns strictly increasing, pivots positive, every other
    entry in a pivot column reduced into [0, pivot), zero rows at the
    bottom. H is the canonical basis matrix of the row lattice.
    """
    h = [list(r) for r in rows]
    m = len(h)
    n = len(h[0]) if m else 0
    u = [list(r) for r in identity_matrix(m)]

    def row_sub(i, j, q):
        """row i -= q * row j."""
        if q == 0:
            return
        h[i] = [a - q * b for a, b in zip(h[i], h[j])]
        u[i] = [a - q * b for a, b in zip(u[i], u[j])]

    r = 0
    for c in range(n):
        if r == m:
            break
        # Euclidean reduction down column c among rows r..m-1.
        while True:
            nz = [i for i in range(r, m) if h[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(h[i][c]))
            if i0 != r:
                h[r], h[i0] = h[i0], h[r]
                u[r], u[i0] = u[i0], u[r]
            done = True
            for i in range(r + 1, m):
                if h[i][c]:
                    row_sub(i, r, h[i][c] // h[r][c])
                    if h[i][c]:
                        done = False
            if done:
                break
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-a for a in h[r]]
            u[r] = [-a for a in u[r]]
        for i in range(r):
            row_sub(i, r, h[i][c] // h[r][c])
        r += 1
    return tuple(tuple(row) for row in h), tuple(tuple(row) for row in u)


def smith_normal_form(rows) -> tuple[IntMat, IntMat, IntMat]:
    """Smith normal form: returns (D, U, V) with D = U @ rows @ V.

    U, V unimodular; D diagonal with nonnegative entries satisfying
    d1 | d2 | ... (trailing zeros last).
    """
    d = [list(r) for r in rows]
    m = len(d)
    n = len(d[0]) if m else 0
    u = [list(r) for r in identity_matrix(m)]
    v = [list(r) for r in identity_matrix(n)]

    def row_sub(i, j, q):
        d[i] = [a - q * b for a, b in zip(d[i], d[j])]
        u[i] = [a - q * b for a, b in zip(u[i], u[j])]

    def col_sub(i, j, q):
        """col i -= q * col j (mirrored on V's columns)."""
        for row in d:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    def pick_pivot(t):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if d[i][j] and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        return best

    t = 0
    while t < min(m, n):
        pos = pick_pivot(t)
        if pos is None:
            break
        i0, j0 = pos
        if i0 != t:
            d[t], d[i0] = d[i0], d[t]
            u[t], u[i0] = u[i0], u[t]
        if j0 != t:
            for row in d:
                row[t], row[j0] = row[j0], row[t]
            for row in v:
                row[t], row[j0] = row[j0], row[t]
        while True:
            dirty = False
            for i in range(t + 1, m):
                if d[i][t]:
                    row_sub(i, t, d[i][t] // d[t][t])
                    if d[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if d[t][j]:
                    col_sub(j, t, d[t][j] // d[t][t])
                    if d[t][j]:
                        dirty = True
            if dirty:
                # a smaller remainder appeared off the pivot; re-center it
                pos = pick_pivot(t)
                i0, j0 = pos
                if i0 != t:
                    d[t], d[i0] = d[i0], d[t]
                    u[t], u[i0] = u[i0], u[t]
                if j0 != t:
                    for row in d:
                        row[t], row[j0] = row[j0], row[t]
                    for row in v:
                        row[t], row[j0] = row[j0], row[t]
                continue
            # column and row are clear; enforce divisibility of the rest
            witness = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if d[i][j] % d[t][t]:
                        witness = i
                        break
                if witness is not None:
                    break
            if witness is None:
                break
            row_sub(t, witness, -1)  # row t += row witness, restart cleanup
        if d[t][t] < 0:
            d[t] = [-a for a in d[t]]
            u[t] = [-a for a in u[t]]
        t += 1
    return (
        tuple(tuple(row) for row in d),
        tuple(tuple(row) for row in u),
        tuple(tuple(row) for row in v),
    )


def kernel_rows(mat) -> IntMat:
    """Basis of the left kernel {v integer : v @ mat = 0}.

    The result is a basis of a saturated sublattice (integer kernels are
    always direct summands).
    """
    h, u = hermite_normal_form(mat)
    return tuple(u[i] for i in range(len(h)) if not any(h[i]))


def solve_integer_row(mat, target) -> IntVec | None:
    """One integer solution y of y @ mat = target, or None.

    Deterministic: free coordinates are fixed to zero.
    """
    m = len(mat)
    if m == 0:
        return () if not any(target) else None
    h, u = hermite_normal_form(mat)
    n = len(h[0])
    residual = list(target)
    z = [0] * m
    for i, row in enumerate(h):
        piv = next((j for j in range(n) if row[j]), None)
        if piv is None:
            break
        q, rem = divmod(residual[piv], row[piv])
        if rem:
            return None
        z[i] = q
        for j in range(n):
            residual[j] -= q * row[j]
    if any(residual):
        return None
    return vec_mat(tuple(z), u)


def solve_rational(mat, target) -> RatVec | None:
    """One rational solution x of mat @ x = target (column form), or None.

    Free coordinates are fixed to zero; entries may be ints or Fractions.
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    a = [[Fraction(x) for x in row] + [Fraction(t)] for row, t in zip(mat, target, strict=True)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        a[r] = [x / a[r][c] for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if a[i][n]:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = a[i][n]
    return tuple(x)


def rat_inverse(mat) -> tuple[RatVec, ...]:
    """Exact inverse of a square matrix over Q."""
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            raise StackyFanError("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        a[c] = [x / a[c][c] for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return tuple(tuple(row[n:]) for row in a)


def rat_rank(mat) -> int:
    rows = [[Fraction(x) for x in row] for row in mat]
    n = len(rows[0]) if rows else 0
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        rows[rank] = [x / rows[rank][c] for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def det(mat) -> Fraction:
    """Exact determinant (fraction-free would do; Gauss over Q is fine here)."""
    n = len(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            result = -result
        result *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return result


# ---------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class Lattice:
    """rowspan_Z(basis) / den inside Q^ambient_rank, in canonical form."""

    ambient_rank: int
    basis: IntMat
    den: int = 1

    @property
    def rank(self) -> int:
        return len(self.basis)

    @staticmethod
    def standard(n: int) -> "Lattice":
        return Lattice(n, identity_matrix(n), 1)

    def vectors(self) -> tuple[RatVec, ...]:
        """Basis as rational row vectors."""
        return tuple(tuple(Fraction(a, self.den) for a in row) for row in self.basis)


def lattice_from_generators(gens, ambient_rank: int, den: int = 1) -> Lattice:
    """Canonical lattice spanned over Z by integer row generators / den."""
    for g in gens:
        if len(g) != ambient_rank:
            raise StackyFanError("generator length does not match ambient rank")
    if den <= 0:
        raise StackyFanError("denominator must be positive")
    rows = [to_int_vec(g) for g in gens]
    if rows:
        h, _ = hermite_normal_form(rows)
        basis = tuple(r for r in h if any(r))
    else:
        basis = ()
    g = den
    for row in basis:
        for a in row:
            g = gcd(g, a)
    if basis and g > 1:
        basis = tuple(tuple(a // g for a in row) for row in basis)
        den //= g
    if not basis:
        den = 1
    return Lattice(ambient_rank, basis, den)


def lattice_from_rational_rows(rows, ambient_rank: int) -> Lattice:
    """Lattice generated by rational row vectors."""
    d = 1
    for row in rows:
        for a in row:
            d = lcm(d, Fraction(a).denominator)
    cleared = [tuple(int(Fraction(a) * d) for a in row) for row in rows]
    return lattice_from_generators(cleared, ambient_rank, d)


def member(lat: Lattice, x) -> bool:
    """Is the rational vector x an element of lat?"""
    if len(x) != lat.ambient_rank:
        raise StackyFanError("vector length does not match ambient rank")
    scaled = [Fraction(a) * lat.den for a in x]
    if not all(f.denominator == 1 for f in scaled):
        return False
    target = tuple(int(f) for f in scaled)
    if not lat.basis:
        return not any(target)
    return solve_integer_row(lat.basis, target) is not None


def lattice_coordinates(lat: Lattice, x) -> IntVec | None:
    """Integer coordinates of x in lat's basis, or None if x is not in lat."""
    scaled = [Fraction(a) * lat.den for a in x]
    if not all(f.denominator == 1 for f in scaled):
        return None
    return solve_integer_row(lat.basis, tuple(int(f) for f in scaled))


def intersect(a: Lattice, b: Lattice) -> Lattice:
    if a.ambient_rank != b.ambient_rank:
        raise StackyFanError("ambient ranks differ")
    n = a.ambient_rank
    d = lcm(a.den, b.den)
    rows_a = [tuple(x * (d // a.den) for x in row) for row in a.basis]
    rows_b = [tuple(x * (d // b.den) for x in row) for row in b.basis]
    if not rows_a or not rows_b:
        return lattice_from_generators([], n)
    stacked = tuple(rows_a) + tuple(tuple(-x for x in row) for row in rows_b)
    gens = []
    for k in kernel_rows(stacked):
        coeffs = k[: len(rows_a)]
        gens.append(vec_mat(coeffs, tuple(rows_a)))
    return lattice_from_generators(gens, n, d)


def dual_lattice(lat: Lattice) -> Lattice:
    """{u : <u, v> in Z for all v in lat}; requires lat of full rank."""
    n = lat.ambient_rank
    if lat.rank != n:
        raise StackyFanError("dual lattice requires a full-rank lattice")
    inv = rat_inverse(lat.basis)
    # rows of (basis^-1)^T, scaled back up by den
    dual_rows = [tuple(Fraction(lat.den) * inv[i][j] for i in range(n)) for j in range(n)]
    return lattice_from_rational_rows(dual_rows, n)


def saturation(lat: Lattice) -> Lattice:
    """(Q-span of lat) intersected with Z^n."""
    n = lat.ambient_rank
    if not lat.basis:
        return lattice_from_generators([], n)
    ann = kernel_rows(transpose(lat.basis))
    if not ann:
        return Lattice.standard(n)
    sat = kernel_rows(transpose(ann))
    return lattice_from_generators(sat, n)


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Invariant factor decomposition Z/d1 x Z/d2 x ... with d1 | d2 | ..."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.invariant_factors, self.invariant_factors[1:]):
            if b % a:
                raise StackyFanError("invariant factors must form a divisibility chain")
        if any(d < 2 for d in self.invariant_factors):
            raise StackyFanError("invariant factors must be at least 2")

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors


def quotient(sup: Lattice, sub: Lattice) -> tuple[FiniteAbelianGroup, tuple[RatVec, ...]]:
    """Finite quotient sup/sub with a full list of coset representatives.

    Requires sub <= sup of equal rank (finite index). Representatives are
    elements of sup, one per coset, starting with 0.
    """
    if sup.ambient_rank != sub.ambient_rank:
        raise StackyFanError("ambient ranks differ")
    if sub.rank != sup.rank:
        raise StackyFanError("quotient requires equal ranks (finite index)")
    r = sup.rank
    coords = []
    for row in sub.vectors():
        y = lattice_coordinates(sup, row)
        if y is None:
            raise StackyFanError("sublattice is not contained in the superlattice")
        coords.append(y)
    if r == 0:
        zero = tuple(Fraction(0) for _ in range(sup.ambient_rank))
        return FiniteAbelianGroup(()), (zero,)
    d, _, v = smith_normal_form(coords)
    diag = tuple(d[i][i] for i in range(r))
    v_inv = rat_inverse(v)
    assert all(x.denominator == 1 for row in v_inv for x in row)
    new_basis = mat_mul(tuple(tuple(int(x) for x in row) for row in v_inv), sup.basis)
    factors = tuple(x for x in diag if x > 1)
    reps = []
    for combo in iter_product(*(range(x) for x in diag)):
        vec = tuple(
            Fraction(sum(c * new_basis[i][j] for i, c in enumerate(combo)), sup.den)
            for j in range(sup.ambient_rank)
        )
        reps.append(vec)
    return FiniteAbelianGroup(factors), tuple(reps)


def affine_meets_lattice(point, span_rows, lat: Lattice) -> RatVec | None:
    """A lattice point on the affine subspace point + Q-span(span_rows), or None.

    The subspace condition is reduced to an integer linear system in lat
    coordinates via the rational annihilator of the span; the system is
    solved by Hermite reduction after clearing denominators column by
    column. The witness is deterministic.
    """
    n = lat.ambient_rank
    if len(point) != n:
        raise StackyFanError("point length does not match ambient rank")
    span_rows = [tuple(Fraction(a) for a in row) for row in span_rows]
    if span_rows:
        d = 1
        for row in span_rows:
            for a in row:
                d = lcm(d, a.denominator)
        span_int = [tuple(int(a * d) for a in row) for row in span_rows]
        ann = kernel_rows(transpose(span_int))
    else:
        ann = identity_matrix(n)
    if not lat.basis:
        x = tuple(Fraction(0) for _ in range(n))
        return x if all(dot(a, vec_sub(point, x)) == 0 for a in ann) else None
    if not ann:
        # span is everything: any lattice point works; pick 0
        return tuple(Fraction(0) for _ in range(n))
    g_cols = transpose(mat_mul(lat.basis, transpose(ann)))  # columns indexed by ann rows
    rhs = [lat.den * dot(point, a) for a in ann]
    cleared_cols = []
    cleared_rhs = []
    for col, t in zip(g_cols, rhs, strict=True):
        t = Fraction(t)
        s = t.denominator
        cleared_cols.append(tuple(c * s for c in col))
        cleared_rhs.append(int(t * s))
    g = transpose(cleared_cols)
    y = solve_integer_row(g, tuple(cleared_rhs))
    if y is None:
        return None
    return tuple(Fraction(a, lat.den) for a in vec_mat(y, lat.basis))


def reduce_mod_lattice(vec, lat: Lattice) -> RatVec:
    """Canonical representative of vec modulo lat (HNF residue reduction).

    At each pivot column of lat's basis the representative is reduced into
    [0, pivot/den); other coordinates are shifted accordingly. Two vectors
    are congruent mod lat iff they reduce to the same representative.
    """
    v = [Fraction(a) for a in vec]
    if len(v) != lat.ambient_rank:
        raise StackyFanError("vector length does not match ambient rank")
    d = lat.den
    for a in v:
        d = lcm(d, a.denominator)
    scaled = [a * d for a in v]
    basis = [tuple(x * (d // lat.den) for x in row) for row in lat.basis]
    for row in basis:
        piv = next(j for j in range(len(row)) if row[j])
        q = int(scaled[piv]) // row[piv]  # scaled entries are integral by choice of d
        if q:
            scaled = [a - q * b for a, b in zip(scaled, row)]
    return tuple(a / d for a in scaled)
