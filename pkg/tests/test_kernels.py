"""Enumeration kernel: engine parity, caps, and the small-box contract."""

import random

import pytest

from stackyfan import DEFAULT_CAP, HAVE_COMPILED, CapExceeded
from stackyfan.kernels import enumerate_box
from stackyfan._enumpy import enumerate_box as pure_enumerate


def random_instance(rng, n):
    lo = tuple(rng.randint(-4, 0) for _ in range(n))
    hi = tuple(rng.randint(0, 4) for _ in range(n))
    m = rng.randint(0, 3)
    norms = tuple(tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(m))
    # rhs chosen so that some candidates survive and some do not
    rhs = tuple(rng.randint(-2, 6) for _ in range(m))
    return lo, hi, norms, rhs


def test_pure_reference_small_case():
    # x in [0,2]^2 with x0 + x1 <= 2, encoded as -x0 - x1 >= -2
    pts = pure_enumerate((0, 0), (2, 2), ((-1, -1),), (-2,))
    assert pts == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]


def test_engines_agree():
    rng = random.Random(1234)
    for _ in range(150):
        n = rng.randint(0, 4)
        lo, hi, norms, rhs = random_instance(rng, n)
        want = pure_enumerate(lo, hi, norms, rhs)
        got = enumerate_box(lo, hi, norms, rhs)
        assert got == want
        assert enumerate_box(lo, hi, norms, rhs, engine="python") == want
        if HAVE_COMPILED:
            assert enumerate_box(lo, hi, norms, rhs, engine="compiled") == want


def test_zero_dimensional_box():
    assert enumerate_box((), (), (), ()) == [()]
    assert enumerate_box((), (), ((),), (1,)) == []
    assert enumerate_box((), (), ((),), (0,)) == [()]


def test_empty_range_axis():
    assert enumerate_box((1,), (0,), (), ()) == []


def test_cap_enforced():
    with pytest.raises(CapExceeded) as exc:
        enumerate_box((0, 0), (9, 9), (), (), cap=50)
    assert "100" in str(exc.value) and "50" in str(exc.value)
    # exactly at the cap is allowed
    assert len(enumerate_box((0, 0), (9, 9), (), (), cap=100)) == 100


def test_default_cap_is_used():
    side = 4000  # 4001^2 > 10_000_000 default cap
    with pytest.raises(CapExceeded):
        enumerate_box((0, 0), (side, side), ((1, 0),), (side + 1,))


def test_huge_coordinates_fall_back_to_python():
    # beyond the compiled int64 window the python engine must be chosen
    big = 2**70
    pts = enumerate_box((big,), (big + 2,), ((1,),), (big,))
    assert pts == [(big,), (big + 1,), (big + 2,)]


def test_unknown_engine_rejected():
    with pytest.raises(ValueError):
        enumerate_box((0,), (1,), (), (), engine="fortran")


def test_compiled_extension_present_when_built():
    # informational guard: the build in this repository compiles the kernel
    assert isinstance(HAVE_COMPILED, bool)
    assert DEFAULT_CAP == 10_000_000
