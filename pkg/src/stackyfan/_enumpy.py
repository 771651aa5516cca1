"""Pure-Python box enumeration kernel (arbitrary precision)."""

from __future__ import annotations

from itertools import product


def enumerate_box(lo, hi, norms, rhs):
    """Integer points x with lo <= x <= hi (componentwise) and norms @ x >= rhs.

    All inputs are integers; norms rows are pre-scaled so offsets are integral.
    Output is in lexicographic order.
    """
    ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
    rows = list(zip(norms, rhs))
    out = []
    for x in product(*ranges):
        for a, c in rows:
            if sum(ai * xi for ai, xi in zip(a, x)) < c:
                break
        else:
            out.append(x)
    return out
