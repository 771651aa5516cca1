"""Backend selection for the lattice-point enumeration kernel.

The compiled kernel works in int64; it is used only when a conservative
bound shows no intermediate value can overflow. The pure-Python kernel is
exact for any size and is the fallback when the extension is missing.
"""

from __future__ import annotations

from math import prod

from . import _enumpy
from .errors import CapExceeded

try:  # pragma: no cover - depends on build environment
    from . import _enumcy

    HAVE_COMPILED = True
except ImportError:  # pragma: no cover
    _enumcy = None
    HAVE_COMPILED = False

DEFAULT_CAP = 10_000_000

# headroom below 2^63-1 for the accumulated dot products
_INT64_SAFE = 2**62


def _fits_int64(lo, hi, norms, rhs):
    for c in rhs:
        if abs(c) >= _INT64_SAFE:
            return False
    for row in norms:
        bound = 0
        for a, l, h in zip(row, lo, hi):
            bound += abs(a) * max(abs(l), abs(h))
        if bound >= _INT64_SAFE:
            return False
    return True


def enumerate_box(lo, hi, norms, rhs, cap: int = DEFAULT_CAP, engine: str | None = None):
    """Integer points of [lo, hi] satisfying norms @ x >= rhs, in lex order.

    Raises CapExceeded if the candidate box holds more than cap points.
    engine forces a backend ("compiled" or "python") when set.
    """
    candidates = prod(max(h - l + 1, 0) for l, h in zip(lo, hi, strict=True))
    if candidates > cap:
        raise CapExceeded(f"enumeration box holds {candidates} candidates, cap is {cap}")
    if candidates == 0:
        return []
    if engine == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled kernel is unavailable")
        return _enumcy.enumerate_box(lo, hi, norms, rhs)
    if engine == "python":
        return _enumpy.enumerate_box(lo, hi, norms, rhs)
    if engine is not None:
        raise ValueError(f"unknown engine {engine!r}")
    if HAVE_COMPILED and _fits_int64(lo, hi, norms, rhs):
        return _enumcy.enumerate_box(lo, hi, norms, rhs)
    return _enumpy.enumerate_box(lo, hi, norms, rhs)
