"""Reduction along subtori: Bohr-Sommerfeld leaves and weight transfer.

The partition identity (leaf counts sum to the section count) is the
central cross-check: the leaf counts come from slice enumeration in
kernel coordinates, the total from a direct Newton-polytope count.
"""

import random
from fractions import Fraction

import pytest

from stackyfan import (
    Bundle,
    EmptySlice,
    Facet,
    HPolytope,
    NotOrbifold,
    Ray,
    StackyFanError,
    Subtorus,
    WeightedFan,
    bs_values,
    critical_values,
    h0,
    is_regular_value,
    lattice_points,
    leaf_h0,
    moment_image,
    newton_polytope,
    qr_rq_report,
    reduce_at,
    vertices,
)
from stackyfan.lattice import mat_mul, vec_add

from conftest import random_bundle, random_fan, random_subtorus_basis, random_unimodular


def line_64():
    return WeightedFan(1, (Ray((1,), 4), Ray((-1,), 6)), ((0,), (1,)))


def p3_fan():
    return WeightedFan(3, (Ray((1, 0, 0)), Ray((0, 1, 0)), Ray((0, 0, 1)),
                           Ray((-1, -1, -1))),
                       ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)))


def simplex_bundle():
    """Sections are the monomials of degree at most 3 in three variables."""
    return Bundle(p3_fan(), (0, 0, 0, -3))


SUB = Subtorus(((4, 3, 6),))

# section multiplicities over alpha = 0..18 for the weighted circle action
LEAF_PATTERN = (1, 0, 0, 1, 1, 0, 2, 1, 1, 2, 2, 1, 3, 1, 1, 1, 1, 0, 1)


# ------------------------------------------------------------------ subtorus


def test_subtorus_saturates_basis():
    assert Subtorus(((8, 6, 12),)).basis == ((4, 3, 6),)
    assert Subtorus(((4, 3, 6),)) == SUB


def test_subtorus_rejects_dependent_rows():
    with pytest.raises(StackyFanError):
        Subtorus(((1, 2), (2, 4)))


def test_trivial_subtorus_needs_rank():
    with pytest.raises(StackyFanError):
        Subtorus(())
    t = Subtorus((), rank=3)
    assert t.dim == 0 and t.rank == 3
    assert t.moment((1, 2, 3)) == ()


def test_moment_and_image_lattice():
    assert SUB.moment((1, 0, 0)) == (4,)
    assert SUB.moment((0, 1, 1)) == (9,)
    assert SUB.image_lattice().basis == ((1,),)


# ----------------------------------------------------- image/critical values


def test_moment_image_of_simplex():
    img = moment_image(newton_polytope(simplex_bundle()), SUB)
    assert img.rank == 1
    assert vertices(img) == ((0,), (18,))


def test_critical_values_simplex():
    assert critical_values(newton_polytope(simplex_bundle()), SUB) == (0, 9, 12, 18)


def test_is_regular_value_simplex():
    poly = newton_polytope(simplex_bundle())
    assert is_regular_value(poly, SUB, 5)
    assert is_regular_value(poly, SUB, Fraction(17, 2))
    for a in (0, 9, 12, 18):
        assert not is_regular_value(poly, SUB, a)


def test_critical_values_guard_on_many_facets():
    facets = [Facet((1, k), -50, weight=1) for k in range(11)]
    facets += [Facet((-1, k), -50, weight=1) for k in range(11)]
    facets += [Facet((0, 1), -50, weight=1), Facet((0, -1), -50, weight=1)]
    poly = HPolytope(2, tuple(facets))
    with pytest.raises(StackyFanError):
        critical_values(poly, Subtorus(((1, 0),)))


def test_bs_values_simplex():
    vals = bs_values(newton_polytope(simplex_bundle()), SUB)
    assert [a for a, _ in vals] == [(k,) for k in range(19)]
    assert [reg for _, reg in vals] == [k not in (0, 9, 12, 18) for k in range(19)]


# -------------------------------------------------------------------- leaves


def test_leaf_pattern_simplex():
    b = simplex_bundle()
    got = tuple(leaf_h0(b, SUB, k) for k in range(19))
    assert got == LEAF_PATTERN
    assert sum(got) == h0(b)[0] == 20


def test_leaf_h0_outside_image_is_zero():
    assert leaf_h0(simplex_bundle(), SUB, 100) == 0
    assert leaf_h0(simplex_bundle(), SUB, -1) == 0


def test_report_simplex():
    rep = qr_rq_report(simplex_bundle(), SUB)
    assert rep.total_check
    assert rep.leaf_total == rep.h0_total == 20
    assert rep.critical_values == (0, 9, 12, 18)
    assert vertices(rep.p1) == ((0,), (18,))
    assert tuple(leaf.h0 for leaf in rep.leaves) == LEAF_PATTERN
    assert all(leaf.failure is None for leaf in rep.leaves)
    # vertex levels reduce to points, everything else to full slices
    assert rep.leaves[0].reduced.polytope.rank == 0
    assert rep.leaves[18].reduced.polytope.rank == 0
    assert rep.leaves[6].reduced.polytope.rank == 2


def test_weight_transfer_at_six():
    """Facet weights transfer as w * content of the restricted normal:
    the three coordinate facets give 3, 2, 1; the degree facet drops."""
    r = reduce_at(newton_polytope(simplex_bundle()), SUB, 6)
    assert r.polytope.rank == 2
    assert sorted(r.polytope.weights()) == [1, 2, 3]
    got = {(f.normal, f.weight) for f in r.polytope.facets}
    assert got == {((-1, 0), 3), ((2, -1), 2), ((0, 1), 1)}


def test_vertex_levels_reduce_to_points():
    poly = newton_polytope(simplex_bundle())
    r0 = reduce_at(poly, SUB, 0)
    assert r0.polytope.rank == 0
    assert r0.x0 == (0, 0, 0)
    r18 = reduce_at(poly, SUB, 18)
    assert r18.polytope.rank == 0
    assert r18.x0 == (0, 0, 3)


def test_reduce_at_empty_level():
    with pytest.raises(EmptySlice):
        reduce_at(newton_polytope(simplex_bundle()), SUB, 100)


def test_reduction_invariant_under_kernel_choices():
    poly = newton_polytope(simplex_bundle())
    base = reduce_at(poly, SUB, 6)
    rng = random.Random(424242)
    for _ in range(20):
        u = random_unimodular(rng, 2)
        kb = mat_mul(u, base.kernel_basis)
        c1, c2 = rng.randint(-2, 2), rng.randint(-2, 2)
        shift = tuple(c1 * a + c2 * b for a, b in zip(*base.kernel_basis))
        x0 = vec_add(base.x0, shift)
        alt = reduce_at(poly, SUB, 6, x0=x0, kernel_basis=kb)
        assert sorted(alt.polytope.weights()) == [1, 2, 3]
        assert len(alt.polytope.facets) == len(base.polytope.facets)
        assert len(lattice_points(alt.polytope)) == len(lattice_points(base.polytope))


def test_ambiguous_weight_transfer_detected():
    # [0,1]^2 with weights 2 and 3 on the two lower facets; along x - y
    # the level 0 slice sees both with the same restricted normal
    fan = WeightedFan(2, (Ray((1, 0), 2), Ray((0, 1), 3), Ray((-1, 0)), Ray((0, -1))),
                      ((0, 1), (1, 2), (2, 3), (0, 3)))
    b = Bundle(fan, (0, 0, -1, -1))
    sub = Subtorus(((1, -1),))
    with pytest.raises(NotOrbifold):
        reduce_at(newton_polytope(b), sub, 0)
    rep = qr_rq_report(b, sub)
    assert [(leaf.alpha, leaf.h0) for leaf in rep.leaves] == [
        ((-1,), 1), ((0,), 2), ((1,), 1)]
    assert rep.leaves[1].failure is not None
    assert "NotOrbifold" in rep.leaves[1].failure
    assert rep.leaves[1].reduced is None
    assert rep.total_check  # counting is unaffected by the failed reduction


def test_weighted_line_full_torus_regression():
    """Same rational Chern class, different torsion: shifted leaves."""
    fan = line_64()
    full = Subtorus(((1,),))
    rep_a = qr_rq_report(Bundle(fan, (0, -12)), full)
    rep_b = qr_rq_report(Bundle(fan, (2, -15)), full)
    assert [(leaf.alpha, leaf.h0) for leaf in rep_a.leaves] == [
        ((0,), 1), ((1,), 1), ((2,), 1)]
    assert [(leaf.alpha, leaf.h0) for leaf in rep_b.leaves] == [
        ((1,), 1), ((2,), 1)]
    assert rep_a.total_check and rep_b.total_check
    assert rep_a.leaf_total == 3 and rep_b.leaf_total == 2


def test_trivial_subtorus_single_leaf():
    b = simplex_bundle()
    rep = qr_rq_report(b, Subtorus((), rank=3))
    assert len(rep.leaves) == 1
    leaf = rep.leaves[0]
    assert leaf.alpha == ()
    assert leaf.h0 == 20
    assert leaf.regular
    assert rep.total_check
    # the reduction is the identity: the whole Newton polytope survives
    assert leaf.reduced is not None
    assert vertices(leaf.reduced.polytope) == vertices(newton_polytope(b))


def test_full_rank_subtorus_points():
    fan = line_64()
    b = Bundle(fan, (0, -12))
    rep = qr_rq_report(b, Subtorus(((1,),)))
    for leaf in rep.leaves:
        assert leaf.reduced is not None
        assert leaf.reduced.polytope.rank == 0
        # the ambient point of each leaf is its own character
        assert leaf.reduced.x0 == leaf.alpha


def test_partition_identity_random():
    rng = random.Random(515151)
    done = 0
    while done < 25:
        fan = random_fan(rng)
        n = fan.rank
        b = random_bundle(rng, fan)
        poly = newton_polytope(b)
        if len(poly.facets) > 8:
            continue
        d = rng.randint(1, n)
        sub = Subtorus(random_subtorus_basis(rng, n, d))
        rep = qr_rq_report(b, sub)
        assert rep.total_check, (fan, b.l, sub.basis)
        assert rep.leaf_total == h0(b)[0]
        done += 1


def test_partition_identity_trivial_subtorus_random():
    rng = random.Random(626262)
    for _ in range(10):
        fan = random_fan(rng)
        b = random_bundle(rng, fan)
        rep = qr_rq_report(b, Subtorus((), rank=fan.rank))
        assert rep.total_check
        if rep.h0_total == 0:
            # no sections: the empty image has no Bohr-Sommerfeld values
            assert rep.leaves == () and rep.p1 is None
        else:
            assert len(rep.leaves) == 1 and rep.leaves[0].h0 == rep.h0_total


def test_bs_flags_match_critical_list():
    poly = newton_polytope(simplex_bundle())
    crit = critical_values(poly, SUB)
    for alpha, regular in bs_values(poly, SUB):
        assert regular == (Fraction(alpha[0]) not in crit)
