"""Command-line entry point.

Exit codes: 0 success / verified claim, 1 verified negative (a claim failed,
a monochromatic clique exists, a set is not separated), 2 usage or input
error, 3 search budget exhausted or a degenerate computation.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from . import formats
from .circle import DenominatorGrowthError, measure
from .coloring import (
    MonochromaticCliqueExists,
    DigestMismatch,
    NotSeparatedPair,
    color_class_dimacs,
    color_complete_graph,
    doubling_coloring,
    emit_certificate,
    find_mono_clique,
    verify_certificate,
)
from .dynamics import bowen_ball, make_times_p
from .separated import (
    DEFAULT_NODE_BUDGET,
    UnsupportedParameters,
    build_separation_graph,
    greedy_max_separated,
    grid,
    is_separated,
    max_separated_exact,
    packing_upper_bound,
)
from .verifiers import (
    EmptyIntersection,
    NoSlack,
    min_expansion_p,
    shadow_orbit,
    transfer_separated,
    verify_ball_measure,
    verify_capacity_circle,
    verify_component_ratio,
    verify_grid_separated,
    verify_translation,
)

log = logging.getLogger("circleramsey")

OUTDIR_ENV = "CIRCLERAMSEY_OUTDIR"

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _rational(s: str) -> Fraction:
    try:
        return formats.parse_rational(s)
    except formats.SchemaError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _map(s: str):
    """A map given as a JSON file, inline JSON, or the shorthand ``xP``."""
    m = re.fullmatch(r"x(\d+)", s)
    if m:
        return make_times_p(int(m.group(1)))
    if os.path.exists(s):
        doc = formats.load_json(s)
    else:
        try:
            doc = json.loads(s)
        except json.JSONDecodeError:
            raise argparse.ArgumentTypeError(f"{s!r} is neither a map file, JSON, nor xP") from None
    try:
        return formats.map_from_json(doc)
    except (formats.SchemaError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _points_file(path: str) -> list[Fraction]:
    doc = formats.load_json(path)
    if isinstance(doc, list):
        return [formats.parse_rational(x, f"[{i}]") for i, x in enumerate(doc)]
    if isinstance(doc, dict) and "points" in doc:
        return list(formats.report_from_json(doc).points)
    raise formats.SchemaError("", "expected a list of rationals or a separated-set report")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="circleramsey", description=__doc__.splitlines()[0])
    ap.add_argument("--format", choices=("json", "text"), default="text")
    ap.add_argument("--out", help=f"report path (default: ${OUTDIR_ENV}/<command>.json if set)")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bowen-ball", help="exact Bowen ball and its measure")
    p.add_argument("--map", type=_map, required=True)
    p.add_argument("--x", type=_rational, default=Fraction(0))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=_rational, required=True)

    sep = sub.add_parser("separated", help="separated-set search and checks").add_subparsers(
        dest="action", required=True
    )
    p = sep.add_parser("search")
    p.add_argument("--map", type=_map, required=True)
    p.add_argument("--grid", type=int, help="candidate grid denominator (default p^n for x -> p x)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    p = sep.add_parser("check")
    p.add_argument("--map", type=_map, required=True)
    p.add_argument("--set", dest="set_file", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=_rational, required=True)

    col = sub.add_parser("color", help="dynamical edge colourings").add_subparsers(dest="action", required=True)
    p = col.add_parser("doubling", help="r-colouring of K_{2^r} from the doubling map")
    p.add_argument("--r", type=int, required=True)
    p = col.add_parser("dyn", help="colour a separated set by least separating index")
    p.add_argument("--map", type=_map, required=True)
    p.add_argument("--set", dest="set_file", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=_rational, required=True)
    p = col.add_parser("dimacs", help="export one colour class")
    p.add_argument("--coloring", required=True)
    p.add_argument("--color", type=int, required=True)

    p = sub.add_parser("clique", help="search a colouring for a monochromatic K_k")
    p.add_argument("--coloring", required=True)
    p.add_argument("--k", type=int, default=3)

    cert = sub.add_parser("certify", help="Ramsey lower-bound certificates").add_subparsers(
        dest="action", required=True
    )
    p = cert.add_parser("emit")
    p.add_argument("--coloring", required=True)
    p.add_argument("--k", type=int, default=2, help="capacity k; certifies no monochromatic K_{k+1}")
    p.add_argument("--samples", type=int, default=10**5, help="random triples for the capacity check")
    p.add_argument("--seed", type=int, default=0)
    p = cert.add_parser("verify")
    p.add_argument("--cert", required=True)
    p.add_argument("--coloring", required=True)

    p = sub.add_parser("verify", help="exact checks for x -> p x maps")
    p.add_argument("claim", choices=("translation", "components", "measure", "grid"))
    g = p.add_mutually_exclusive_group()
    g.add_argument("--l", type=int, help="use p = 6^l")
    g.add_argument("--p", type=int)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=_rational, default=Fraction(1, 6), help="radius (translation only)")
    p.add_argument("--x", type=_rational, action="append", help="sample point (translation; repeatable)")

    p = sub.add_parser("shadow", help="shadow a target sequence by an x -> p x orbit")
    p.add_argument("--targets", required=True)
    p.add_argument("--delta", type=_rational, required=True)
    p.add_argument("--p", type=int)

    p = sub.add_parser("transfer", help="move a separated set of g to some x -> p x")
    p.add_argument("--map-g", dest="map_g", type=_map, required=True)
    p.add_argument("--set", dest="set_file", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=_rational, required=True)

    p = sub.add_parser("capacity", help="check that no three circle points are pairwise > 1/3 apart")
    p.add_argument("--samples", type=int, default=10**5)
    p.add_argument("--seed", type=int, required=True)
    return ap


# each handler returns (exit code, json document, text summary)

def _cmd_bowen_ball(a):
    ball = bowen_ball(a.map, a.x, a.n, a.eps)
    mu = measure(ball)
    doc = {"ball": formats.arcunion_to_json(ball), "measure": formats.fmt(mu)}
    return EXIT_OK, doc, f"B_{a.n}({a.x}, {a.eps}): {len(ball)} arcs, measure {mu}\n{ball}"


def _cmd_separated(a):
    if a.action == "check":
        rep = is_separated(a.map, _points_file(a.set_file), a.n, a.eps)
        code = EXIT_OK if rep.certified else EXIT_NEGATIVE
        return code, formats.report_to_json(rep), f"{rep.size} points, certified: {rep.certified}"
    D = a.grid
    if D is None:
        if a.map.times_p is None:
            raise UsageError("--grid is required for maps other than x -> p x")
        D = a.map.times_p ** a.n
    cands = grid(D)
    if a.exact:
        rep = max_separated_exact(build_separation_graph(a.map, cands, a.n, a.eps), a.budget)
    else:
        rep = greedy_max_separated(a.map, cands, a.n, a.eps)
    doc = formats.report_to_json(rep)
    lines = [f"{rep.method} search on grid 1/{D}: {rep.size} points (lower bound)"]
    if a.eps == Fraction(1, 3) and a.map.times_p is not None:
        try:
            ub = packing_upper_bound(a.map, a.n, a.eps)
            doc["packing_upper_bound"] = ub
            lines.append(f"packing upper bound: {ub}")
        except UnsupportedParameters:
            pass
    code = EXIT_INTERNAL if rep.maximal is False else EXIT_OK
    if rep.maximal is False:
        lines.append("node budget exhausted: size is not proven maximum")
    return code, doc, "\n".join(lines)


def _cmd_color(a):
    if a.action == "doubling":
        c = doubling_coloring(a.r)
    elif a.action == "dyn":
        c = color_complete_graph(a.map, _points_file(a.set_file), a.n, a.eps)
    else:
        c = formats.coloring_from_json(formats.load_json(a.coloring))
        text = color_class_dimacs(c, a.color)
        return EXIT_OK, None, text.rstrip("\n")
    return EXIT_OK, formats.coloring_to_json(c), f"{c.num_colors}-colouring of K_{len(c)}, digest {c.digest()}"


def _cmd_clique(a):
    c = formats.coloring_from_json(formats.load_json(a.coloring))
    hit = find_mono_clique(c, a.k)
    doc = {"k": a.k, "witness": hit}
    if hit is None:
        return EXIT_OK, doc, "none"
    return EXIT_NEGATIVE, doc, f"monochromatic K_{a.k}: {hit} (colour {c.color(hit[0], hit[1])})"


def _cmd_certify(a):
    c = formats.coloring_from_json(formats.load_json(a.coloring))
    if a.action == "emit":
        capacity = verify_capacity_circle(a.samples, a.seed)
        try:
            cert = emit_certificate(c, a.k, capacity)
        except MonochromaticCliqueExists as exc:
            doc = {"error": "monochromatic clique", "witness": exc.witness, "color": exc.color}
            return EXIT_NEGATIVE, doc, str(exc)
        return EXIT_OK, formats.certificate_to_json(cert), cert.claim
    cert = formats.certificate_from_json(formats.load_json(a.cert))
    ok = verify_certificate(cert, c)
    return (EXIT_OK if ok else EXIT_NEGATIVE), {"claim": cert.claim, "valid": ok}, f"{cert.claim}: {'valid' if ok else 'INVALID'}"


def _cmd_verify(a):
    p = 6**a.l if a.l is not None else (a.p if a.p is not None else 6)
    if a.claim == "translation":
        rep = verify_translation(p, a.n, a.eps, a.x or [Fraction(1, 2)])
    elif a.claim == "components":
        rep = verify_component_ratio(p, a.n)
    elif a.claim == "measure":
        rep = verify_ball_measure(p, a.n)
    else:
        rep = verify_grid_separated(a.n)
    code = {"pass": EXIT_OK, "fail": EXIT_NEGATIVE, "unsupported": EXIT_USAGE}[rep.verdict]
    summary = f"{rep.claim_id}: {rep.verdict} " + " ".join(
        f"{k}={formats.encode(v)}" for k, v in rep.parameters.items()
    )
    if rep.exceptions:
        summary += f"\n{len(rep.exceptions)} exception(s) recorded"
    return code, formats.verification_to_json(rep), summary


def _cmd_shadow(a):
    targets = _points_file(a.targets)
    res = shadow_orbit(targets, a.delta, a.p)
    doc = formats.shadow_to_json(res)
    doc["delta"] = formats.fmt(a.delta)
    doc["targets"] = [formats.fmt(t) for t in targets]
    return EXIT_OK, doc, f"y = {res.y} under x -> {res.p}x; deviations {[str(d) for d in res.deviations]}"


def _cmd_transfer(a):
    res = transfer_separated(a.map_g, _points_file(a.set_file), a.n, a.eps)
    doc = formats.transfer_to_json(res)
    return EXIT_OK, doc, f"{len(res.points)} points separated for x -> {res.p}x: {[str(y) for y in res.points]}"


def _cmd_capacity(a):
    rep = verify_capacity_circle(a.samples, a.seed)
    code = EXIT_OK if rep.passed else EXIT_NEGATIVE
    return code, formats.verification_to_json(rep), f"circle capacity at 1/3 is 2: {rep.verdict}"


HANDLERS = {
    "bowen-ball": _cmd_bowen_ball,
    "separated": _cmd_separated,
    "color": _cmd_color,
    "clique": _cmd_clique,
    "certify": _cmd_certify,
    "verify": _cmd_verify,
    "shadow": _cmd_shadow,
    "transfer": _cmd_transfer,
    "capacity": _cmd_capacity,
}


def _parameters(a) -> dict:
    out = {}
    for k, v in sorted(vars(a).items()):
        if k in ("format", "out", "verbose"):
            continue
        if hasattr(v, "to_json"):
            v = v.to_json()
        out[k] = formats.encode(v)
    return out


def _out_path(a) -> Path | None:
    if a.out:
        return Path(a.out)
    outdir = os.environ.get(OUTDIR_ENV)
    if outdir:
        name = a.command + (f"-{a.action}" if getattr(a, "action", None) else "")
        return Path(outdir) / f"{name}.json"
    return None


def main(argv=None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        code, doc, summary = HANDLERS[a.command](a)
    except (UsageError, formats.SchemaError, OSError, ValueError) as exc:
        if isinstance(exc, (NoSlack, NotSeparatedPair)):
            code = EXIT_INTERNAL if isinstance(exc, NoSlack) else EXIT_NEGATIVE
        elif isinstance(exc, DigestMismatch):
            code = EXIT_NEGATIVE
        else:
            code = EXIT_USAGE
        print(f"error: {exc}", file=sys.stderr)
        return code
    except (EmptyIntersection, DenominatorGrowthError, RecursionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL

    if doc is not None:
        doc = {"tool": {**formats.TOOL, "command": a.command, "parameters": _parameters(a)}, **doc}
        text = formats.dumps(doc)
        path = _out_path(a)
        if path is not None:
            formats.write_atomic(path, text)
            stamp = {"report": path.name, "written": datetime.now(timezone.utc).isoformat()}
            formats.write_atomic(path.with_name(path.name + ".meta.json"), formats.dumps(stamp))
        print(text if a.format == "json" else summary, end="" if a.format == "json" else "\n")
    else:
        print(summary)
    return code


if __name__ == "__main__":
    sys.exit(main())
