"""JSON formats: exact rationals, object round trips, type detection."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from stackyfan import Bundle, Facet, HPolytope, Ray, Subtorus, WeightedFan
from stackyfan.jsonio import (
    FormatError,
    bundle_from_json,
    bundle_to_json,
    detect_type,
    fan_from_json,
    fan_to_json,
    load_json,
    polytope_from_json,
    polytope_to_json,
    rat_from_json,
    rat_to_json,
    subtorus_from_json,
    subtorus_to_json,
)


def p2_obj():
    return {"rank": 2,
            "rays": [[1, 1], [-1, 0], [0, -1]],
            "weights": [3, 2, 2],
            "max_cones": [[0, 1], [0, 2], [1, 2]]}


# ------------------------------------------------------------------ rationals


def test_rat_from_json_ints_and_strings():
    assert rat_from_json(5) == Fraction(5)
    assert rat_from_json(-7) == Fraction(-7)
    assert rat_from_json("3/4") == Fraction(3, 4)
    assert rat_from_json("-9/6") == Fraction(-3, 2)
    assert rat_from_json("12") == Fraction(12)


@pytest.mark.parametrize("bad", [1.5, 0.0, True, False, None, [1], {}, "a/b", "1/0"])
def test_rat_from_json_rejects(bad):
    with pytest.raises(FormatError):
        rat_from_json(bad)


def test_rat_to_json():
    assert rat_to_json(Fraction(3, 4)) == "3/4"
    assert rat_to_json(Fraction(-5, 1)) == -5
    assert rat_to_json(7) == 7
    assert rat_to_json(Fraction(-1, 2)) == "-1/2"


def test_rat_round_trip():
    for x in (Fraction(0), Fraction(17), Fraction(-3, 8), Fraction(22, 7)):
        assert rat_from_json(rat_to_json(x)) == x


# -------------------------------------------------------------------- objects


def test_fan_round_trip():
    fan = fan_from_json(p2_obj())
    assert fan == WeightedFan(2, (Ray((1, 1), 3), Ray((-1, 0), 2), Ray((0, -1), 2)),
                              ((0, 1), (0, 2), (1, 2)))
    assert fan_from_json(fan_to_json(fan)) == fan
    assert set(fan_to_json(fan)) == {"rank", "rays", "weights", "max_cones"}


def test_fan_normalizes_nonprimitive_rays():
    obj = p2_obj()
    obj["rays"][0] = [2, 2]
    assert fan_from_json(obj).rays[0].generator == (1, 1)


@pytest.mark.parametrize("mutate", [
    lambda o: o.pop("rank"),
    lambda o: o.pop("weights"),
    lambda o: o.update(rays=[[1, 1], [-1, 0]]),         # weights length mismatch
    lambda o: o.update(weights=[3, 2, 2.0]),            # float weight
    lambda o: o.update(weights=[3, 2, True]),           # bool weight
    lambda o: o.update(max_cones="nope"),
])
def test_fan_from_json_rejects(mutate):
    obj = p2_obj()
    mutate(obj)
    with pytest.raises((FormatError, TypeError, KeyError)) as exc:
        fan_from_json(obj)
    assert isinstance(exc.value, FormatError)


def test_polytope_round_trip_with_weights():
    poly = HPolytope(1, (Facet((1,), Fraction(1, 2), weight=4),
                         Facet((-1,), Fraction(-5, 2), weight=6)))
    obj = polytope_to_json(poly)
    assert obj["facets"][0] == {"normal": [1], "offset": "1/2", "weight": 4}
    assert polytope_from_json(obj) == poly


def test_polytope_weight_omitted_when_absent():
    poly = HPolytope(1, (Facet((1,), 0), Facet((-1,), -2)))
    obj = polytope_to_json(poly)
    assert all("weight" not in f for f in obj["facets"])
    assert polytope_from_json(obj) == poly


def test_bundle_inline_fan_and_l():
    obj = {"fan": p2_obj(), "l": [1, -1, 0]}
    b = bundle_from_json(obj)
    assert b.l == (1, -1, 0)
    assert bundle_from_json(bundle_to_json(b)) == b


def test_bundle_from_characters():
    # m rows solve <m, w nu> = l on each cone; recover integer ray data
    inline = {"fan": p2_obj(), "l": [3, -3, 0]}
    b = bundle_from_json(inline)
    from stackyfan import to_vertex_characters

    vc = to_vertex_characters(b)
    obj = {"fan": p2_obj(), "m": [[rat_to_json(Fraction(a)) for a in row] for row in vc.m]}
    assert bundle_from_json(obj) == b


def test_bundle_fan_by_path(tmp_path):
    fan_file = tmp_path / "fan.json"
    fan_file.write_text(json.dumps(p2_obj()))
    obj = {"fan": "fan.json", "l": [0, 0, 0]}
    b = bundle_from_json(obj, base=tmp_path)
    assert len(b.fan.rays) == 3


def test_bundle_requires_exactly_one_data_key():
    with pytest.raises(FormatError):
        bundle_from_json({"fan": p2_obj()})
    with pytest.raises(FormatError):
        bundle_from_json({"fan": p2_obj(), "l": [0, 0, 0], "m": []})


def test_subtorus_round_trip():
    sub = Subtorus(((4, 3, 6),))
    assert subtorus_from_json(subtorus_to_json(sub)) == sub
    assert subtorus_to_json(sub) == {"basis": [[4, 3, 6]]}
    trivial = subtorus_from_json({"basis": []}, rank=3)
    assert trivial.dim == 0


# ------------------------------------------------------------ type detection


def test_detect_type():
    assert detect_type(p2_obj()) == "fan"
    assert detect_type(polytope_to_json(HPolytope(1, (Facet((1,), 0),)))) == "polytope"
    assert detect_type({"fan": p2_obj(), "l": [0, 0, 0]}) == "bundle"
    assert detect_type({"basis": [[1, 0]]}) == "subtorus"
    with pytest.raises(FormatError):
        detect_type({"unrelated": 1})
    with pytest.raises(FormatError):
        detect_type([1, 2, 3])


def test_load_json(tmp_path):
    p = tmp_path / "x.json"
    p.write_text('{"basis": [[1, 2]]}')
    assert load_json(p) == {"basis": [[1, 2]]}
    with pytest.raises(FileNotFoundError):
        load_json(tmp_path / "missing.json")
