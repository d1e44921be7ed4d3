"""Batch command-line front end.

JSON in, JSON or CSV out, deterministic ordering, no interactive mode.
Exit codes: 0 success, 2 when the computed verdict is UNDECIDED, 1 on
input errors. The first output line is always the version header.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import corpus
from .doubling import DoubledMap, double_embed
from .errors import PcdynError
from .holonomy import classify
from .models import model_diff
from .partial import indeterminacy_set, power_growth, semi_index, transfix_scan
from .piecewise import (
    PiecewiseMap,
    PseudogroupTag,
    canonicalize,
    compose,
    invert,
)
from .structure import StructureFunction, pullback, solve_invariant

HEADER = "pcdyn/1"

_TAGS = {
    "isom": ("Isom", False, None),
    "isom+": ("Isom", True, None),
    "aff": ("Aff", False, None),
    "aff+": ("Aff", True, None),
    "proj": ("Proj", False, None),
    "proj+": ("Proj", True, None),
    "c0": ("Proj", False, 0),
    "c1": ("Proj", False, 1),
    "c2": ("Proj", False, 2),
}


def _parse_tag(s: str) -> PseudogroupTag:
    try:
        fam, ori, order = _TAGS[s.lower()]
    except KeyError:
        raise PcdynError(f"unknown tag {s!r}; choose from {sorted(_TAGS)}")
    return PseudogroupTag(fam, ori, order)


def _load_map(spec: str) -> PiecewiseMap:
    """A map argument is a JSON file path or a named corpus map."""
    if os.path.exists(spec):
        with open(spec) as fh:
            return PiecewiseMap.from_json(json.load(fh))
    if spec in corpus.NAMED:
        return corpus.named_map(spec)
    raise PcdynError(f"no such file or corpus map: {spec}")


def _load_structure(spec: str) -> StructureFunction:
    if os.path.exists(spec):
        with open(spec) as fh:
            return StructureFunction.from_json(json.load(fh))
    try:
        return corpus.reference_structure(spec)
    except KeyError:
        raise PcdynError(f"no such file or reference structure: {spec}")


def _emit(payload, args, csv_text=None):
    out = sys.stdout
    close = False
    if getattr(args, "out", None):
        out = open(args.out, "w")
        close = True
    try:
        print(HEADER, file=out)
        if args.format == "csv" and csv_text is not None:
            out.write(csv_text)
        elif args.format == "csv":
            for k, v in sorted(_flatten(payload)):
                print(f"{k},{v}", file=out)
        else:
            print(json.dumps(payload, indent=2, sort_keys=True), file=out)
    finally:
        if close:
            out.close()


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}{k}." if prefix else f"{k}.")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield (prefix.rstrip("."), obj)


def _retag(f: PiecewiseMap, tag) -> PiecewiseMap:
    if tag is None:
        return f
    return PiecewiseMap(tag, f.pieces)


# -- command handlers -------------------------------------------------------


def cmd_validate(args):
    report = []
    for spec in args.maps:
        m = _load_map(spec)
        m.validate()
        report.append({"input": spec, "valid": True, "pieces": len(m.pieces),
                       "tag": m.tag.to_json()})
    _emit(report, args)
    return 0


def cmd_canonical(args):
    f = _retag(_load_map(args.map), args.tag and _parse_tag(args.tag))
    _emit(canonicalize(f).to_json(), args)
    return 0


def cmd_compose(args):
    a, b = _load_map(args.a), _load_map(args.b)
    _emit(canonicalize(compose(a, b)).to_json(), args)
    return 0


def cmd_invert(args):
    _emit(canonicalize(invert(_load_map(args.map))).to_json(), args)
    return 0


def cmd_power_growth(args):
    f = _load_map(args.map)
    tag = _parse_tag(args.tag) if args.tag else f.tag
    rep = power_growth(f, tag, N=args.n)
    _emit(rep.to_json(), args, csv_text=rep.to_csv())
    return 2 if rep.verdict == "UNDECIDED" else 0


def cmd_indeterminacy(args):
    f = _load_map(args.map)
    tag = _parse_tag(args.tag) if args.tag else f.tag
    pts = indeterminacy_set(f, tag)
    lm, lp = semi_index(f, tag)
    payload = {"points": [p.to_json() for p in pts],
               "ell_minus": lm, "ell_plus": lp}
    csv = "point\n" + "".join(p.to_json() + "\n" for p in pts)
    _emit(payload, args, csv_text=csv)
    return 0


def cmd_transfix(args):
    gens = [_load_map(s) for s in args.gens]
    tag = _parse_tag(args.tag) if args.tag else gens[0].tag
    for g in gens[1:]:
        tag = tag.join(g.tag)
    rep = transfix_scan(gens, tag, radius=args.radius)
    _emit(rep.to_json(), args)
    return 2 if rep.verdict == "UNDECIDED" else 0


def cmd_lmodel(args):
    _emit(model_diff(_load_map(args.map), args.level).to_json(), args)
    return 0


def cmd_pullback(args):
    f = _load_map(args.map)
    nu = _load_structure(args.nu)
    _emit(pullback(f, nu).to_json(), args)
    return 0


def cmd_solve(args):
    gens = [_load_map(s) for s in args.gens]
    rep = solve_invariant(gens, level=args.level, depth=args.depth)
    _emit(rep.to_json(), args)
    return 2 if rep.status == "UNDECIDED" else 0


def cmd_classify(args):
    nu = _load_structure(args.nu)
    _emit(classify(nu).to_json(), args)
    return 0


def cmd_double(args):
    _emit(double_embed(_load_map(args.map)).to_json(), args)
    return 0


def cmd_selftest(args):
    from . import selftest
    results = selftest.run()
    _emit(results, args)
    return 0 if all(r["passed"] for r in results) else 1


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="pcdyn",
        description="exact piecewise-Moebius circle dynamics toolbox")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--out", help="write the report to this path instead of stdout")
    # the output flags are also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"),
                        default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True,
                            parser_class=lambda **kw: argparse.ArgumentParser(
                                parents=[common], **kw))

    p = sub.add_parser("validate", help="validate map files")
    p.add_argument("maps", nargs="+")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("canonical", help="canonical form of a map")
    p.add_argument("map")
    p.add_argument("--tag")
    p.set_defaults(fn=cmd_canonical)

    p = sub.add_parser("compose", help="composition A after B")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(fn=cmd_compose)

    p = sub.add_parser("invert", help="inverse map")
    p.add_argument("map")
    p.set_defaults(fn=cmd_invert)

    p = sub.add_parser("power-growth", help="semi-index growth of powers")
    p.add_argument("map")
    p.add_argument("--tag")
    p.add_argument("--n", type=int, default=64)
    p.set_defaults(fn=cmd_power_growth)

    p = sub.add_parser("indeterminacy", help="indeterminacy points and semi-indices")
    p.add_argument("map")
    p.add_argument("--tag")
    p.set_defaults(fn=cmd_indeterminacy)

    p = sub.add_parser("transfix", help="scan a generating set for transfixing certificates")
    p.add_argument("gens", nargs="+")
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--tag")
    p.set_defaults(fn=cmd_transfix)

    p = sub.add_parser("lmodel", help="commensurating-model symmetric difference")
    p.add_argument("map")
    p.add_argument("--level", type=int, choices=(0, 1, 2), default=2)
    p.set_defaults(fn=cmd_lmodel)

    p = sub.add_parser("pullback", help="pull a structure function back through a map")
    p.add_argument("map")
    p.add_argument("nu")
    p.set_defaults(fn=cmd_pullback)

    p = sub.add_parser("solve", help="solve for an invariant structure")
    p.add_argument("gens", nargs="+")
    p.add_argument("--level", type=int, choices=(1, 2), default=2)
    p.add_argument("--depth", type=int, default=64)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("classify", help="holonomy class of a structure function")
    p.add_argument("nu")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("double", help="embed into the oriented doubled circle")
    p.add_argument("map")
    p.set_defaults(fn=cmd_double)

    p = sub.add_parser("selftest", help="run the built-in invariant suite")
    p.set_defaults(fn=cmd_selftest)

    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (PcdynError, KeyError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"pcdyn: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
