"""Command-line front end: ``artinqp <command> ...``.

Exit codes: 0 when a verdict (QP or NOT_QP) is decided or a computation
succeeds, 2 for an UNKNOWN verdict, 1 for any error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .alexander import MAX_MINORS, TooManyMinors, TorsionH1, alexander_polynomial, depth_at_character
from .artin import GraphParseError, LabeledGraph, artin_presentation, generator_name, parse_graph
from .groups import FinitePresentation, PresentationError, abelianization, parse_presentation
from .laurent import GF, QQ
from .obstruct import DEFAULT_SEED, UNKNOWN, BatteryOptions, ContradictoryEvidence, run_battery
from .subgroups import (
    SUBGROUPS, IndexTooLarge, RelatorSurvives, coset_data, kernel_presentation, parse_quotient_map,
)
from .torus import MAX_POINTS, TooManyPoints, parse_character


class CliError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None


def _looks_like_graph(text: str) -> bool:
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            return line.split()[0] in ("v", "e")
    return False


def load_group(path: str) -> tuple[FinitePresentation, LabeledGraph | None]:
    """A presentation file, or a graph file read as its Artin presentation."""
    text = _read(path)
    try:
        if _looks_like_graph(text):
            g = parse_graph(text)
            return artin_presentation(g), g
        return parse_presentation(text), None
    except (PresentationError, GraphParseError) as exc:
        raise CliError(f"{path}: {exc}") from None


def _options(args) -> BatteryOptions:
    return BatteryOptions(seed=args.seed, order_bound=args.order_bound, max_minors=args.max_minors,
                          max_points=args.max_points, max_level=args.max_level)


def _emit_report(report, args) -> int:
    out = report.dumps() if args.format == "json" else report.to_text()
    sys.stdout.write(out)
    return 2 if report.verdict == UNKNOWN else 0


def cmd_analyze_graph(args) -> int:
    text = _read(args.graph)
    try:
        g = parse_graph(text)
    except GraphParseError as exc:
        raise CliError(f"{args.graph}: {exc}") from None
    return _emit_report(run_battery(g, _options(args)), args)


def cmd_analyze_pres(args) -> int:
    text = _read(args.presentation)
    try:
        pres = parse_presentation(text)
    except PresentationError as exc:
        raise CliError(f"{args.presentation}: {exc}") from None
    return _emit_report(run_battery(pres, _options(args)), args)


def cmd_kernel(args) -> int:
    pres, g = load_group(args.group)
    aliases = {v: generator_name(v) for v in g.vertices} if g is not None else None
    try:
        phi = parse_quotient_map(_read(args.map), pres.generators, aliases)
        sub = kernel_presentation(pres, phi, simplify=not args.no_simplify, subgroup=args.subgroup)
    except PresentationError as exc:
        raise CliError(f"{args.map}: {exc}") from None
    text = sub.to_text()
    if args.format == "json":
        ab = abelianization(sub)
        doc = {"command": "kernel", "subgroup": args.subgroup, "index": phi_index(pres, phi, args.subgroup),
               "presentation": text, "b1": ab.rank, "torsion": list(ab.torsion)}
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)
    return 0


def phi_index(pres, phi, subgroup: str) -> int:
    cd = coset_data(pres, phi, point=None if subgroup == "kernel" else 0)
    return len(cd.elements)


def cmd_depth(args) -> int:
    pres, _ = load_group(args.group)
    ab = abelianization(pres)
    try:
        xi = parse_character(args.char)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    if xi.n != ab.rank:
        raise CliError(f"character has {xi.n} coordinates but b1 = {ab.rank}")
    res = depth_at_character(pres, xi, ab)
    if args.format == "json":
        doc = {"command": "depth", "character": args.char, "depth": res.depth, "rank": res.rank, "b1": ab.rank}
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(f"{res.depth}\n")
    return 0


def cmd_delta(args) -> int:
    pres, _ = load_group(args.group)
    domain = QQ if args.char == 0 else GF(args.char)
    res = alexander_polynomial(pres, domain=domain, max_minors=args.max_minors)
    if args.format == "json":
        doc = {"command": "delta", "b1": res.rank, "characteristic": args.char, "tilde": res.tilde.format(),
               "delta": res.delta.format(), "stripped": res.stripped}
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(f"b1: {res.rank}\ntilde: {res.tilde.format()}\ndelta: {res.delta.format()}\n"
                         f"stripped: {res.stripped}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="recorded in every report")
    common.add_argument("--order-bound", type=int, default=64, help="largest order of sampled characters")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-minors", type=int, default=MAX_MINORS, help="guard on minors per ideal")
    common.add_argument("--max-points", type=int, default=MAX_POINTS, help="guard on enumerated characters")

    p = argparse.ArgumentParser(prog="artinqp", description="Alexander-type invariants and quasi-projectivity tests")
    p.add_argument("--version", action="version", version=f"artinqp {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze-graph", parents=[common], help="run the battery on an Artin graph file")
    a.add_argument("graph")
    a.add_argument("--max-level", type=int, default=2, help="highest Char_k to enumerate")
    a.set_defaults(func=cmd_analyze_graph)

    a = sub.add_parser("analyze-pres", parents=[common], help="run the battery on a presentation file")
    a.add_argument("presentation")
    a.add_argument("--max-level", type=int, default=2, help="highest Char_k to enumerate")
    a.set_defaults(func=cmd_analyze_pres)

    a = sub.add_parser("kernel", parents=[common], help="presentation of a finite-index subgroup")
    a.add_argument("group", help="presentation or graph file")
    a.add_argument("map", help="map file: lines '<gen> -> (1 2)(3 4)' or '<gen> -> k mod m'")
    a.add_argument("--subgroup", choices=SUBGROUPS, default="kernel",
                   help="kernel of the map, or preimage of the stabilizer of point 1")
    a.add_argument("--no-simplify", action="store_true", help="skip Tietze simplification")
    a.set_defaults(func=cmd_kernel)

    a = sub.add_parser("depth", parents=[common], help="exact dim H^1(G, C_xi) at a torsion character")
    a.add_argument("group", help="presentation or graph file")
    a.add_argument("--char", required=True, help="coordinates on H1/torsion, e.g. 1/2,1/3,0")
    a.set_defaults(func=cmd_depth)

    a = sub.add_parser("delta", parents=[common], help="Alexander polynomial")
    a.add_argument("group", help="presentation or graph file")
    a.add_argument("--char", type=int, default=0, help="field characteristic (0 or a prime)")
    a.set_defaults(func=cmd_delta)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"artinqp: error: {exc}", file=sys.stderr)
    except (RelatorSurvives, IndexTooLarge, TooManyMinors, TooManyPoints, TorsionH1, ValueError) as exc:
        print(f"artinqp: error: {type(exc).__name__}: {exc}", file=sys.stderr)
    except ContradictoryEvidence as exc:
        print(f"artinqp: internal error (contradictory evidence): {exc}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
