"""Command-line front end.

JSON files in, deterministic table/CSV/JSON out (SVG for the drawing
command). Exit codes: 0 success, 2 domain errors, 1 input and I/O
errors; errors are emitted as one JSON object on stderr either way.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import StackyFanError
from .fan import WeightedFan, validate
from .jsonio import (FormatError, bundle_from_json, detect_type, fan_from_json,
                     fan_to_json, load_json, polytope_from_json, polytope_to_json,
                     rat_to_json, subtorus_from_json)
from .kernels import DEFAULT_CAP
from .orbifold import (cone_cover_lattice, orbifold_fundamental_group,
                       universal_cover, weighted_ray_lattice)
from .picard import (bundles_with_class, chern_class, h0, newton_polytope,
                     torsion_subgroup)
from .prequant import prequantize
from .reduction import Subtorus, bs_values, leaf_h0, qr_rq_report, reduce_at
from .svg import render_fan, render_polytope, render_report

COMMANDS = ("validate", "pi1", "cover-lattices", "universal-cover", "h0", "chern",
            "torsion", "classes", "prequantize", "reduce", "bs", "svg")


@dataclass(frozen=True)
class JobSpec:
    command: str
    fmt: str = "table"
    cap: int = DEFAULT_CAP
    input: str | None = None
    output: str | None = None
    polytope: str | None = None
    bundle: str | None = None
    subtorus: str | None = None
    alpha: str | None = None
    c1: str | None = None

    def __post_init__(self):
        if self.cap < 1:
            raise FormatError("cap must be at least 1")


class _Parser(argparse.ArgumentParser):
    # usage mistakes are input errors (exit 1), not domain errors
    def error(self, message):
        raise FormatError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="stackyfan", description=__doc__.splitlines()[0])
    common = _Parser(add_help=False)
    common.add_argument("--input", "-i", help="primary input JSON file")
    common.add_argument("--output", "-o", help="write output here instead of stdout")
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--cap", type=int, help="lattice-point enumeration cap")
    common.add_argument("--polytope", help="weighted polytope JSON file")
    common.add_argument("--bundle", help="bundle JSON file")
    common.add_argument("--subtorus", help="subtorus JSON file")
    common.add_argument("--alpha", help="moment value, comma-separated rationals")
    common.add_argument("--c1", help="rational class vector, comma-separated")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def parse_args(argv=None) -> JobSpec:
    ns = _build_parser().parse_args(argv)
    cap = ns.cap
    if cap is None:
        env = os.environ.get("STACKYFAN_CAP")
        if env is not None:
            try:
                cap = int(env)
            except ValueError:
                raise FormatError(f"STACKYFAN_CAP must be an integer, got {env!r}")
        else:
            cap = DEFAULT_CAP
    return JobSpec(ns.command, ns.format, cap, ns.input, ns.output,
                   ns.polytope, ns.bundle, ns.subtorus, ns.alpha, ns.c1)


# --------------------------------------------------------------------------
# small emitters


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":")) + "\n"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _table(rows, header=None) -> str:
    rows = [[str(c) for c in row] for row in rows]
    if header:
        rows.insert(0, [str(c) for c in header])
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))] if rows else []
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
             for row in rows]
    return "\n".join(lines) + "\n"


def _vec(v) -> str:
    return "(" + ",".join(rat_text(a) for a in v) + ")"


def rat_text(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _parse_vec(text, what) -> tuple[Fraction, ...]:
    if text is None:
        raise FormatError(f"this command needs {what}")
    parts = [p.strip() for p in text.strip().strip("[]()").split(",")]
    parts = [p for p in parts if p]
    if not parts:
        raise FormatError(f"{what} must be a comma-separated rational vector")
    try:
        return tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"bad rational vector {text!r}")


# --------------------------------------------------------------------------
# input loading


def _fan_arg(spec: JobSpec) -> WeightedFan:
    if spec.input is None:
        raise FormatError("this command needs --input <fan.json>")
    return fan_from_json(load_json(spec.input))


def _poly_arg(spec: JobSpec):
    path = spec.polytope or spec.input
    if path is None:
        raise FormatError("this command needs --polytope <file.json>")
    return polytope_from_json(load_json(path))


def _bundle_arg(spec: JobSpec):
    path = spec.bundle or spec.input
    if path is None:
        return None
    return bundle_from_json(load_json(path), base=Path(path).parent)


def _subtorus_arg(spec: JobSpec, rank: int) -> Subtorus:
    if spec.subtorus is None:
        raise FormatError("this command needs --subtorus <file.json>")
    return subtorus_from_json(load_json(spec.subtorus), rank)


def _reduction_bundle(spec: JobSpec):
    """Bundle for reduce/bs/svg: given directly, or the canonical
    prequantum bundle of --polytope; both together must agree."""
    bundle = None
    if spec.bundle is not None:
        bundle = bundle_from_json(load_json(spec.bundle), base=Path(spec.bundle).parent)
    elif spec.input is not None:
        obj = load_json(spec.input)
        if detect_type(obj) == "bundle":
            bundle = bundle_from_json(obj, base=Path(spec.input).parent)
    if bundle is None:
        poly = _poly_arg(spec)
        res = prequantize(poly, cap=spec.cap)
        if not res.prequantizable:
            raise StackyFanError("polytope is not prequantizable; supply --bundle")
        return res.bundle
    if spec.polytope is not None:
        poly = polytope_from_json(load_json(spec.polytope))
        if set(poly.facets) != set(newton_polytope(bundle).facets):
            raise StackyFanError("--polytope does not match the bundle's polytope")
    return bundle


# --------------------------------------------------------------------------
# commands


def _cmd_validate(spec: JobSpec) -> str:
    rep = validate(_fan_arg(spec))
    obj = {"ok": rep.ok,
           "rays_primitive": list(rep.rays_primitive),
           "weights_positive": list(rep.weights_positive),
           "cones_simplicial": list(rep.cones_simplicial),
           "complete": rep.complete,
           "problems": list(rep.problems)}
    if spec.fmt == "json":
        return _dumps(obj)
    rows = [["ok", rep.ok], ["complete", rep.complete],
            ["rays primitive", all(rep.rays_primitive)],
            ["weights positive", all(rep.weights_positive)],
            ["cones simplicial", all(rep.cones_simplicial)],
            ["cone pairs compatible", all(ok for _, _, ok in rep.pairs_compatible)]]
    rows += [["problem", p] for p in rep.problems]
    if spec.fmt == "csv":
        return _csv_text(("check", "result"), rows)
    return _table(rows)


def _cmd_pi1(spec: JobSpec) -> str:
    group, _ = orbifold_fundamental_group(_fan_arg(spec))
    if spec.fmt == "json":
        return _dumps({"invariant_factors": list(group.invariant_factors)})
    if spec.fmt == "csv":
        return _csv_text(("invariant_factor",), [[d] for d in group.invariant_factors])
    if group.is_trivial:
        return "trivial\n"
    return " x ".join(f"Z/{d}" for d in group.invariant_factors) + "\n"


def _cmd_cover_lattices(spec: JobSpec) -> str:
    fan = _fan_arg(spec)
    entries = [{"cone": list(cone),
                "basis": [list(r) for r in cone_cover_lattice(fan, cone).vectors()]}
               for cone in fan.max_cones]
    glob = [list(r) for r in weighted_ray_lattice(fan).vectors()]
    if spec.fmt == "json":
        return _dumps({"cones": entries, "global_basis": glob})
    rows = [[_vec(e["cone"]), " ".join(_vec(b) for b in e["basis"])] for e in entries]
    rows.append(["global", " ".join(_vec(b) for b in glob)])
    if spec.fmt == "csv":
        return _csv_text(("cone", "basis"), rows)
    return _table(rows, header=("cone", "basis"))


def _cmd_universal_cover(spec: JobSpec) -> str:
    uc = universal_cover(_fan_arg(spec))
    obj = fan_to_json(uc.fan)
    obj["deck_invariant_factors"] = list(uc.deck_group.invariant_factors)
    if spec.fmt == "json":
        return _dumps(obj)
    rows = [[i, _vec(r.generator), r.weight] for i, r in enumerate(uc.fan.rays)]
    if spec.fmt == "csv":
        return _csv_text(("ray", "generator", "weight"), rows)
    deck = ("trivial" if uc.deck_group.is_trivial
            else " x ".join(f"Z/{d}" for d in uc.deck_group.invariant_factors))
    return (_table(rows, header=("ray", "generator", "weight"))
            + f"deck group: {deck}\n")


def _cmd_h0(spec: JobSpec) -> str:
    bundle = _bundle_arg(spec)
    if bundle is None:
        raise FormatError("this command needs --bundle <file.json>")
    count, chars = h0(bundle, cap=spec.cap)
    if spec.fmt == "json":
        return _dumps({"h0": count,
                       "characters": [[rat_to_json(a) for a in ch] for ch in chars]})
    if spec.fmt == "csv":
        n = bundle.fan.rank
        return _csv_text([f"x{i}" for i in range(n)],
                         [[rat_text(a) for a in ch] for ch in chars])
    lines = [f"h0: {count}"] + [_vec(ch) for ch in chars]
    return "\n".join(lines) + "\n"


def _cmd_chern(spec: JobSpec) -> str:
    bundle = _bundle_arg(spec)
    if bundle is None:
        raise FormatError("this command needs --bundle <file.json>")
    rep = chern_class(bundle).rep
    if spec.fmt == "json":
        return _dumps({"chern_class": [rat_to_json(a) for a in rep]})
    if spec.fmt == "csv":
        return _csv_text([f"h{i}" for i in range(len(rep))], [[rat_text(a) for a in rep]])
    return f"chern class: {_vec(rep)}\n"


def _cmd_torsion(spec: JobSpec) -> str:
    group, reps = torsion_subgroup(_fan_arg(spec))
    if spec.fmt == "json":
        return _dumps({"invariant_factors": list(group.invariant_factors),
                       "representatives": [[rat_to_json(a) for a in r] for r in reps]})
    if spec.fmt == "csv":
        return _csv_text(("representative",), [[_vec(r)] for r in reps])
    name = "trivial" if group.is_trivial else " x ".join(
        f"Z/{d}" for d in group.invariant_factors)
    lines = [f"torsion: {name}"] + [_vec(r) for r in reps]
    return "\n".join(lines) + "\n"


def _cmd_classes(spec: JobSpec) -> str:
    fan = _fan_arg(spec)
    h = _parse_vec(spec.c1, "--c1")
    entries = bundles_with_class(fan, h, cap=spec.cap)
    rows = [{"l": list(b.l), "h0": count} for _, b, count in entries]
    if spec.fmt == "json":
        return _dumps({"bundles": rows})
    table = [[_vec(r["l"]), r["h0"]] for r in rows]
    if spec.fmt == "csv":
        return _csv_text(("l", "h0"), table)
    return _table(table, header=("l", "h0"))


def _cmd_prequantize(spec: JobSpec) -> str:
    res = prequantize(_poly_arg(spec), cap=spec.cap)
    if spec.fmt == "json":
        obj = {"prequantizable": res.prequantizable}
        if res.prequantizable:
            obj["t"] = [rat_to_json(a) for a in res.translation]
            obj["fan"] = fan_to_json(res.fan)
            obj["l"] = list(res.bundle.l)
            obj["torsor"] = [{"l": list(b.l), "h0": count} for _, b, count in res.torsor]
        return _dumps(obj)
    if not res.prequantizable:
        if spec.fmt == "csv":
            return _csv_text(("prequantizable",), [["False"]])
        return "prequantizable: False\n"
    rows = [[_vec(b.l), count] for _, b, count in res.torsor]
    if spec.fmt == "csv":
        return _csv_text(("l", "h0"), rows)
    head = (f"prequantizable: True\nt: {_vec(res.translation)}\n"
            f"l: {_vec(res.bundle.l)}\ntorsor:\n")
    return head + _table(rows, header=("l", "h0"))


def _critical_json(crit):
    if not crit:
        return []
    if isinstance(crit[0], Fraction):
        return [rat_to_json(a) for a in crit]
    return [[[rat_to_json(a) for a in pt] for pt in face] for face in crit]


def _cmd_reduce(spec: JobSpec) -> str:
    bundle = _reduction_bundle(spec)
    sub = _subtorus_arg(spec, bundle.fan.rank)
    if spec.alpha is not None:
        alpha = _parse_vec(spec.alpha, "--alpha")
        count = leaf_h0(bundle, sub, alpha, cap=spec.cap)
        try:
            red = reduce_at(newton_polytope(bundle), sub, alpha)
            reduced, failure = polytope_to_json(red.polytope), None
        except StackyFanError as exc:
            reduced, failure = None, f"{type(exc).__name__}: {exc}"
        obj = {"alpha": [rat_to_json(a) for a in alpha], "h0": count,
               "reduced": reduced, "failure": failure}
        if spec.fmt == "json":
            return _dumps(obj)
        rows = [[_vec(alpha), count, failure or "ok"]]
        if spec.fmt == "csv":
            return _csv_text(("alpha", "h0", "status"), rows)
        return _table(rows, header=("alpha", "h0", "status"))
    report = qr_rq_report(bundle, sub, cap=spec.cap)
    if spec.fmt == "json":
        leaves = []
        for leaf in report.leaves:
            entry = {"alpha": [rat_to_json(a) for a in leaf.alpha],
                     "regular": leaf.regular, "h0": leaf.h0,
                     "reduced": None, "failure": leaf.failure}
            if leaf.reduced is not None:
                entry["reduced"] = polytope_to_json(leaf.reduced.polytope)
            leaves.append(entry)
        return _dumps({"p1": None if report.p1 is None else polytope_to_json(report.p1),
                       "critical_values": _critical_json(report.critical_values),
                       "leaves": leaves,
                       "leaf_total": report.leaf_total,
                       "h0_total": report.h0_total,
                       "total_check": report.total_check})
    rows = []
    for leaf in report.leaves:
        if leaf.reduced is not None:
            status = "w=" + _vec(leaf.reduced.polytope.weights())
        else:
            status = leaf.failure
        rows.append([_vec(leaf.alpha), "regular" if leaf.regular else "critical",
                     leaf.h0, status])
    if spec.fmt == "csv":
        out = _csv_text(("alpha", "regularity", "h0", "reduction"), rows)
        return out + f"total,{report.leaf_total},h0,{report.h0_total}\n"
    body = _table(rows, header=("alpha", "regularity", "h0", "reduction"))
    check = "ok" if report.total_check else "MISMATCH"
    return body + (f"total: {report.leaf_total} = h0: {report.h0_total} [{check}]\n")


def _cmd_bs(spec: JobSpec) -> str:
    if spec.bundle is not None:
        poly = newton_polytope(_bundle_arg(spec))
    else:
        path = spec.polytope or spec.input
        if path is None:
            raise FormatError("this command needs --polytope or --bundle")
        obj = load_json(path)
        if detect_type(obj) == "bundle":
            poly = newton_polytope(bundle_from_json(obj, base=Path(path).parent))
        else:
            poly = polytope_from_json(obj)
    sub = _subtorus_arg(spec, poly.rank)
    vals = bs_values(poly, sub, cap=spec.cap)
    if spec.fmt == "json":
        return _dumps({"bs_values": [{"alpha": [rat_to_json(a) for a in alpha],
                                      "regular": reg} for alpha, reg in vals]})
    rows = [[_vec(alpha), "regular" if reg else "critical"] for alpha, reg in vals]
    if spec.fmt == "csv":
        return _csv_text(("alpha", "regularity"), rows)
    return _table(rows, header=("alpha", "regularity"))


def _cmd_svg(spec: JobSpec) -> str:
    if spec.subtorus is not None:
        bundle = _reduction_bundle(spec)
        sub = _subtorus_arg(spec, bundle.fan.rank)
        return render_report(qr_rq_report(bundle, sub, cap=spec.cap))
    if spec.input is None:
        raise FormatError("svg needs --input (fan/polytope/bundle) or --bundle --subtorus")
    obj = load_json(spec.input)
    kind = detect_type(obj)
    if kind == "fan":
        return render_fan(fan_from_json(obj))
    if kind == "polytope":
        return render_polytope(polytope_from_json(obj))
    if kind == "bundle":
        bundle = bundle_from_json(obj, base=Path(spec.input).parent)
        _, chars = h0(bundle, cap=spec.cap)
        return render_polytope(newton_polytope(bundle), marked=chars)
    raise FormatError(f"cannot render a {kind}")


_DISPATCH = {
    "validate": _cmd_validate,
    "pi1": _cmd_pi1,
    "cover-lattices": _cmd_cover_lattices,
    "universal-cover": _cmd_universal_cover,
    "h0": _cmd_h0,
    "chern": _cmd_chern,
    "torsion": _cmd_torsion,
    "classes": _cmd_classes,
    "prequantize": _cmd_prequantize,
    "reduce": _cmd_reduce,
    "bs": _cmd_bs,
    "svg": _cmd_svg,
}


def run(spec: JobSpec) -> str:
    return _DISPATCH[spec.command](spec)


def _emit_error(exc: BaseException):
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)},
                                separators=(",", ":")) + "\n")


def main(argv=None) -> int:
    try:
        spec = parse_args(argv)
        text = run(spec)
        if spec.output:
            Path(spec.output).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except StackyFanError as exc:
        _emit_error(exc)
        return 2
    except (OSError, ValueError) as exc:
        # FormatError, JSON decode errors, missing files, bad flags
        _emit_error(exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
