"""Readers and writers for the JSON interchange formats.

Rationals travel as exact "p/q" strings (plain integers when the
denominator is 1); floats are rejected rather than silently rounded.
Malformed data raises FormatError, which callers treat as an input
error, distinct from the domain errors raised by the constructors.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .fan import Ray, WeightedFan
from .picard import Bundle, VertexCharacters, to_ray_data
from .polytope import Facet, HPolytope
from .reduction import Subtorus


class FormatError(ValueError):
    """The JSON is structurally wrong for the requested type."""


def _require(cond: bool, msg: str):
    if not cond:
        raise FormatError(msg)


def rat_from_json(v) -> Fraction:
    if isinstance(v, int) and not isinstance(v, bool):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad rational literal {v!r}") from exc
    raise FormatError(f"expected an exact rational (int or 'p/q'), got {v!r}")


def rat_to_json(x):
    f = Fraction(x)
    return int(f) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _int_from_json(v) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise FormatError(f"expected an integer, got {v!r}")
    return v


def _int_vec(v) -> tuple[int, ...]:
    _require(isinstance(v, list), f"expected a list of integers, got {v!r}")
    return tuple(_int_from_json(a) for a in v)


def fan_from_json(obj) -> WeightedFan:
    _require(isinstance(obj, dict), "fan must be a JSON object")
    missing = {"rank", "rays", "weights", "max_cones"} - obj.keys()
    _require(not missing, f"fan is missing {sorted(missing)}")
    _require(isinstance(obj["rays"], list), "rays must be a list")
    _require(isinstance(obj["weights"], list), "weights must be a list")
    _require(isinstance(obj["max_cones"], list), "max_cones must be a list")
    rays = [_int_vec(r) for r in obj["rays"]]
    weights = [_int_from_json(w) for w in obj["weights"]]
    _require(len(rays) == len(weights), "rays and weights differ in length")
    cones = tuple(_int_vec(c) for c in obj["max_cones"])
    return WeightedFan(_int_from_json(obj["rank"]),
                       tuple(Ray(g, w) for g, w in zip(rays, weights)), cones)


def fan_to_json(fan: WeightedFan) -> dict:
    return {"rank": fan.rank,
            "rays": [list(r.generator) for r in fan.rays],
            "weights": [r.weight for r in fan.rays],
            "max_cones": [list(c) for c in fan.max_cones]}


def polytope_from_json(obj) -> HPolytope:
    _require(isinstance(obj, dict), "polytope must be a JSON object")
    missing = {"rank", "facets"} - obj.keys()
    _require(not missing, f"polytope is missing {sorted(missing)}")
    _require(isinstance(obj["facets"], list), "facets must be a list")
    facets = []
    for raw in obj["facets"]:
        _require(isinstance(raw, dict), "each facet must be a JSON object")
        _require("normal" in raw and "offset" in raw, "facet needs normal and offset")
        weight = raw.get("weight")
        if weight is not None:
            weight = _int_from_json(weight)
        facets.append(Facet(_int_vec(raw["normal"]), rat_from_json(raw["offset"]), weight))
    return HPolytope(_int_from_json(obj["rank"]), tuple(facets))


def polytope_to_json(poly: HPolytope) -> dict:
    facets = []
    for f in poly.facets:
        d = {"normal": list(f.normal), "offset": rat_to_json(f.offset)}
        if f.weight is not None:
            d["weight"] = f.weight
        facets.append(d)
    return {"rank": poly.rank, "facets": facets}


def bundle_from_json(obj, base: Path | None = None) -> Bundle:
    """Bundle data: a fan (inline or a file path relative to base) plus
    either per-ray integers "l" or per-cone vertex characters "m"."""
    _require(isinstance(obj, dict), "bundle must be a JSON object")
    _require("fan" in obj, "bundle needs a fan")
    ref = obj["fan"]
    if isinstance(ref, str):
        path = Path(ref)
        if base is not None and not path.is_absolute():
            path = Path(base) / path
        fan = fan_from_json(load_json(path))
    else:
        fan = fan_from_json(ref)
    has_l, has_m = "l" in obj, "m" in obj
    _require(has_l != has_m, "bundle needs exactly one of 'l' or 'm'")
    if has_l:
        return Bundle(fan, _int_vec(obj["l"]))
    _require(isinstance(obj["m"], list), "m must be a list of rational vectors")
    m = tuple(tuple(rat_from_json(a) for a in row) for row in obj["m"])
    return to_ray_data(VertexCharacters(fan, m))


def bundle_to_json(bundle: Bundle) -> dict:
    return {"fan": fan_to_json(bundle.fan), "l": list(bundle.l)}


def subtorus_from_json(obj, rank: int | None = None) -> Subtorus:
    _require(isinstance(obj, dict) and "basis" in obj, "subtorus needs a basis")
    _require(isinstance(obj["basis"], list), "basis must be a list of integer rows")
    return Subtorus(tuple(_int_vec(r) for r in obj["basis"]), rank)


def subtorus_to_json(sub: Subtorus) -> dict:
    return {"basis": [list(r) for r in sub.basis]}


def detect_type(obj) -> str:
    """Which interchange type a parsed JSON object is, by its keys."""
    if isinstance(obj, dict):
        if "rays" in obj:
            return "fan"
        if "facets" in obj:
            return "polytope"
        if "fan" in obj:
            return "bundle"
        if "basis" in obj:
            return "subtorus"
    raise FormatError("object is none of fan, polytope, bundle, subtorus")


def load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
