"""Orbifold line bundles: ray data, characters, classes, section counts.

The h0 oracle is the Fraction-only box scan from conftest; the vertex
character translation is checked by round trip in both directions.
"""

import random
from fractions import Fraction

import pytest

from stackyfan import (
    Bundle,
    Incompatible,
    NotIntegral,
    Ray,
    VertexCharacters,
    WeightedFan,
    bundle_class,
    bundles_equivalent,
    bundles_with_class,
    chern_class,
    h0,
    is_orbi_integral,
    newton_polytope,
    orbifold_fundamental_group,
    pullback_from_coarse,
    rational_class,
    to_ray_data,
    to_vertex_characters,
    torsion_subgroup,
    twist,
    vertices,
)

from conftest import brute_lattice_points, random_bundle, random_fan


def line_64():
    return WeightedFan(1, (Ray((1,), 4), Ray((-1,), 6)), ((0,), (1,)))


def p2_223():
    return WeightedFan(2, (Ray((1, 1), 3), Ray((-1, 0), 2), Ray((0, -1), 2)),
                       ((0, 1), (0, 2), (1, 2)))


def quadric_cone():
    return WeightedFan(2, (Ray((1, 1)), Ray((-1, 1)), Ray((0, -1))),
                       ((0, 1), (0, 2), (1, 2)))


# ------------------------------------------------------------ ray data <-> m


def test_vertex_characters_weighted_line():
    vc = to_vertex_characters(Bundle(line_64(), (0, -12)))
    assert vc.m == ((Fraction(0),), (Fraction(2),))


def test_round_trip_golden():
    b = Bundle(line_64(), (0, -12))
    assert to_ray_data(to_vertex_characters(b)) == b


def test_round_trip_random():
    rng = random.Random(5050)
    for _ in range(500):
        b = random_bundle(rng, random_fan(rng))
        assert to_ray_data(to_vertex_characters(b)) == b


def test_to_ray_data_rejects_fractional_pairing():
    with pytest.raises(Incompatible):
        to_ray_data(VertexCharacters(line_64(), ((Fraction(1, 24),), (Fraction(0),))))


def test_to_ray_data_rejects_disagreeing_cones():
    fan = p2_223()
    with pytest.raises(Incompatible):
        to_ray_data(VertexCharacters(
            fan, ((Fraction(0), Fraction(0)), (Fraction(0), Fraction(0)),
                  (Fraction(1), Fraction(0)))))


# ------------------------------------------------------------------- sections


def test_newton_polytope_weighted_line():
    poly = newton_polytope(Bundle(line_64(), (0, -12)))
    assert vertices(poly) == ((0,), (2,))
    assert poly.weights() == (4, 6)


def test_h0_goldens():
    n, chars = h0(Bundle(line_64(), (0, -12)))
    assert n == 3 and chars == ((0,), (1,), (2,))
    n2, chars2 = h0(Bundle(line_64(), (2, -15)))
    assert n2 == 2 and chars2 == ((1,), (2,))


def test_h0_against_brute_force():
    rng = random.Random(6060)
    checked = 0
    for _ in range(60):
        fan = random_fan(rng)
        b = random_bundle(rng, fan)
        poly = newton_polytope(b)
        verts = vertices(poly)
        bound = 20 if fan.rank <= 2 else 8
        if verts and verts != ((),) and max(abs(c) for v in verts for c in v) >= bound:
            continue
        want = brute_lattice_points(poly, bound=bound)
        n, chars = h0(b)
        assert n == len(want) and sorted(chars) == want
        checked += 1
    assert checked >= 40


def test_h0_empty_polytope():
    n, chars = h0(Bundle(line_64(), (5, 5)))
    assert n == 0 and chars == ()


# -------------------------------------------------------------------- classes


def test_chern_class_equality_golden():
    a = Bundle(line_64(), (0, -12))
    b = Bundle(line_64(), (2, -15))
    assert chern_class(a) == chern_class(b)
    assert not bundles_equivalent(a, b)
    assert bundle_class(a) != bundle_class(b)


def test_equivalent_after_integral_twist():
    rng = random.Random(7070)
    for _ in range(100):
        fan = random_fan(rng)
        b = random_bundle(rng, fan)
        u = tuple(rng.randint(-3, 3) for _ in range(fan.rank))
        t = twist(b, u)
        assert bundles_equivalent(b, t)
        assert bundle_class(b) == bundle_class(t)
        assert chern_class(b) == chern_class(t)


def test_chern_class_constant_on_torsion_orbit():
    rng = random.Random(7171)
    for _ in range(60):
        fan = random_fan(rng)
        b = random_bundle(rng, fan)
        _, reps = torsion_subgroup(fan)
        classes = {chern_class(twist(b, rep)) for rep in reps}
        assert len(classes) == 1
        # distinct torsion reps give inequivalent bundles
        bundles = [twist(b, rep) for rep in reps]
        for i in range(len(bundles)):
            for j in range(i + 1, len(bundles)):
                assert not bundles_equivalent(bundles[i], bundles[j])


def test_rational_class_matches_chern():
    b = Bundle(line_64(), (0, -12))
    h = tuple(Fraction(l, r.weight) for l, r in zip(b.l, b.fan.rays))
    assert rational_class(b.fan, h) == chern_class(b)


# ---------------------------------------------------------- torsion / torsor


def test_torsion_subgroup_weighted_line():
    group, reps = torsion_subgroup(line_64())
    assert group.invariant_factors == (2,)
    assert reps == ((Fraction(0),), (Fraction(1, 2),))


def test_torsion_subgroup_p2_223():
    group, reps = torsion_subgroup(p2_223())
    assert group.invariant_factors == (2,)
    assert reps == ((Fraction(0), Fraction(0)), (Fraction(1, 2), Fraction(1, 2)))


def test_torsion_order_equals_pi1_order():
    rng = random.Random(8181)
    for _ in range(40):
        fan = random_fan(rng)
        group, _ = torsion_subgroup(fan)
        pi1, _ = orbifold_fundamental_group(fan)
        assert group.order == pi1.order
        assert group.invariant_factors == pi1.invariant_factors


def _same_numerical_class(fan, h1, h2):
    """h1 - h2 is a rational character shift (<u, nu_rho>)_rho, u in Q^n."""
    from stackyfan.lattice import solve_rational

    diff = tuple(Fraction(a) - Fraction(b) for a, b in zip(h1, h2))
    rows = tuple(r.generator for r in fan.rays)  # one equation per ray
    return solve_rational(rows, diff) is not None


def test_is_orbi_integral_weighted_line():
    fan = line_64()
    # degrees form (1/12)Z; 1/24 is not attainable
    assert is_orbi_integral(fan, (0, Fraction(-1, 24))) is None
    b = is_orbi_integral(fan, (0, Fraction(-1, 12)))
    assert b is not None
    # witness realizes the requested degree
    assert -Fraction(b.l[1], 6) - Fraction(b.l[0], 4) == Fraction(1, 12)
    h_b = tuple(Fraction(l, r.weight) for l, r in zip(b.l, fan.rays))
    assert _same_numerical_class(fan, h_b, (0, Fraction(-1, 12)))


def test_bundles_with_class_torsor_pattern():
    fan = p2_223()
    patterns = []
    for k in (1, 2, 3):
        h = (Fraction(-k, 6), Fraction(0), Fraction(0))
        entries = bundles_with_class(fan, h)
        assert len(entries) == 2  # one bundle per torsion element
        classes = {cls for cls, _, _ in entries}
        assert len(classes) == 2
        for cls, b, n in entries:
            assert bundle_class(b) == cls
            assert h0(b)[0] == n
            h_b = tuple(Fraction(l, r.weight) for l, r in zip(b.l, fan.rays))
            assert _same_numerical_class(fan, h_b, h)
        # the torsor entries share one rational Chern class
        assert len({chern_class(b) for _, b, _ in entries}) == 1
        patterns.append(tuple(sorted(n for _, _, n in entries)))
    assert patterns == [(0, 0), (0, 1), (1, 1)]


def test_bundles_with_class_rejects_nonintegral():
    with pytest.raises(NotIntegral):
        bundles_with_class(line_64(), (0, Fraction(-1, 24)))


def test_twist_requires_integral_pairing():
    from stackyfan import StackyFanError

    with pytest.raises(StackyFanError):
        twist(Bundle(line_64(), (0, 0)), (Fraction(1, 24),))


# ------------------------------------------------------------------ pullback


def test_pullback_on_quadric_cone():
    qc = quadric_cone()
    p1 = Bundle(qc, (-1, -1, 0))
    n, chars = h0(p1)
    assert n == 4
    assert set(chars) == {(-1, 0), (0, -1), (0, 0), (1, 0)}
    assert pullback_from_coarse(p1)
    p2 = Bundle(qc, (-2, -1, 0))
    assert h0(p2)[0] == 6
    assert not pullback_from_coarse(p2)
    assert is_orbi_integral(qc, tuple(Fraction(l) for l in p2.l)) is not None


def test_veronese_relation_in_characters():
    # the four sections of the degree-(1,1) bundle satisfy one quadric
    # relation: the two extreme characters sum to twice the middle one
    _, chars = h0(Bundle(quadric_cone(), (-1, -1, 0)))
    cs = set(chars)
    assert tuple(a + b for a, b in zip((-1, 0), (1, 0))) == (0, 0)
    assert (0, 0) in cs


def test_pullback_random_smooth_fans_always_true():
    # with all weights 1 and smooth cones every bundle is a pullback
    smooth = WeightedFan(2, (Ray((1, 0)), Ray((0, 1)), Ray((-1, 0)), Ray((0, -1))),
                         ((0, 1), (1, 2), (2, 3), (0, 3)))
    rng = random.Random(9191)
    for _ in range(30):
        b = Bundle(smooth, tuple(rng.randint(-5, 5) for _ in range(4)))
        assert pullback_from_coarse(b)
