"""Timing comparison of the two box-enumeration backends.

Counts lattice points of dilations k * Delta^n through both the compiled
kernel and the pure-Python fallback, checking they agree, and prints a
small table. Run as: python benchmarks/bench_enum.py [--repeat N]
"""

import argparse
import time
from fractions import Fraction

from stackyfan import Facet, HPolytope, lattice_points
from stackyfan.kernels import HAVE_COMPILED


def simplex(n: int, k: int) -> HPolytope:
    facets = [Facet(tuple(int(i == j) for j in range(n)), Fraction(0)) for i in range(n)]
    facets.append(Facet(tuple(-1 for _ in range(n)), Fraction(-k)))
    return HPolytope(n, tuple(facets))


def bench(poly: HPolytope, engine: str, repeat: int) -> tuple[float, int]:
    best = float("inf")
    count = -1
    for _ in range(repeat):
        t0 = time.perf_counter()
        pts = lattice_points(poly, engine=engine)
        best = min(best, time.perf_counter() - t0)
        count = len(pts)
    return best, count


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if not HAVE_COMPILED:
        print("compiled kernel not available; timing the fallback against itself")
    cases = [(2, 400), (3, 60), (4, 22), (5, 12)]
    print(f"{'case':>12}  {'points':>8}  {'python':>10}  {'compiled':>10}  {'speedup':>8}")
    for n, k in cases:
        poly = simplex(n, k)
        t_py, c_py = bench(poly, "python", args.repeat)
        t_cy, c_cy = bench(poly, "compiled" if HAVE_COMPILED else "python", args.repeat)
        assert c_py == c_cy, "backends disagree"
        ratio = t_py / t_cy if t_cy > 0 else float("inf")
        print(f"{k}*Delta^{n:<2}  {c_py:>8}  {t_py:>9.4f}s  {t_cy:>9.4f}s  {ratio:>7.1f}x")


if __name__ == "__main__":
    main()
