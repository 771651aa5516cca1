"""Shared corpus generators for property tests.

Everything is driven by seeded random.Random instances so failures
reproduce exactly; no test depends on global RNG state.
"""

import random
from fractions import Fraction
from functools import cmp_to_key

from stackyfan import Bundle, Ray, WeightedFan
from stackyfan.lattice import content, vec_mat

MAX_WEIGHT = 6


def random_unimodular(rng: random.Random, n: int, steps: int = 8):
    """Product of elementary integer row operations: det = +-1."""
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        op = rng.randrange(3)
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if op == 0 and i != j:
            k = rng.choice((-3, -2, -1, 1, 2, 3))
            m[i] = [a + k * b for a, b in zip(m[i], m[j])]
        elif op == 1 and i != j:
            m[i], m[j] = m[j], m[i]
        else:
            m[i] = [-a for a in m[i]]
    return tuple(tuple(row) for row in m)


def _angle_cmp(u, v):
    def half(p):
        return 0 if (p[1] > 0 or (p[1] == 0 and p[0] > 0)) else 1

    if half(u) != half(v):
        return half(u) - half(v)
    cross = u[0] * v[1] - u[1] * v[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def _weights(rng, k):
    return [rng.randint(1, MAX_WEIGHT) for _ in range(k)]


def random_fan_rank1(rng: random.Random) -> WeightedFan:
    w = _weights(rng, 2)
    return WeightedFan(1, (Ray((1,), w[0]), Ray((-1,), w[1])), ((0,), (1,)))


def random_fan_rank2(rng: random.Random) -> WeightedFan:
    gens = {(1, 0), (0, 1), (-1, 0), (0, -1)}
    for _ in range(rng.randrange(3)):
        v = (rng.randint(-3, 3), rng.randint(-3, 3))
        if any(v):
            g = content(v)
            gens.add((v[0] // g, v[1] // g))
    ordered = sorted(gens, key=cmp_to_key(_angle_cmp))
    rays = tuple(Ray(g, w) for g, w in zip(ordered, _weights(rng, len(ordered))))
    k = len(ordered)
    cones = tuple((i, (i + 1) % k) for i in range(k))
    return WeightedFan(2, rays, cones)


def random_fan_rank3(rng: random.Random) -> WeightedFan:
    if rng.random() < 0.5:
        # octahedron fan: one cone per octant
        base = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, 0, 0), (0, -1, 0), (0, 0, -1)]
        cones = tuple((i, j, k) for i in (0, 3) for j in (1, 4) for k in (2, 5))
    else:
        base = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)]
        cones = ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))
    u = random_unimodular(rng, 3)
    gens = [vec_mat(v, u) for v in base]
    rays = tuple(Ray(g, w) for g, w in zip(gens, _weights(rng, len(gens))))
    return WeightedFan(3, rays, cones)


def random_fan(rng: random.Random, rank: int | None = None) -> WeightedFan:
    rank = rank if rank is not None else rng.randint(1, 3)
    return {1: random_fan_rank1, 2: random_fan_rank2, 3: random_fan_rank3}[rank](rng)


def random_bundle(rng: random.Random, fan: WeightedFan) -> Bundle:
    return Bundle(fan, tuple(rng.randint(-6, 6) for _ in fan.rays))


def random_subtorus_basis(rng: random.Random, n: int, d: int):
    """d independent integer rows in Z^n (resampled until independent)."""
    from stackyfan.lattice import rat_rank

    while True:
        rows = tuple(tuple(rng.randint(-4, 4) for _ in range(n)) for _ in range(d))
        if all(any(r) for r in rows) and rat_rank(rows) == d:
            return rows


def brute_lattice_points(poly, bound=40):
    """Independent oracle: scan an integer box with Fraction arithmetic only."""
    from itertools import product

    n = poly.rank
    if n == 0:
        return [()]
    out = []
    for x in product(range(-bound, bound + 1), repeat=n):
        if all(sum(Fraction(a) * c for a, c in zip(f.normal, x)) >= f.offset
               for f in poly.facets):
            out.append(x)
    return out
