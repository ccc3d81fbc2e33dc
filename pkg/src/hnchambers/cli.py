"""Command line entry point ``hnchambers``.

Every subcommand writes one JSON document to stdout with a ``provenance``
block echoing the inputs and either a ``result`` or an ``error`` block.
Exit status: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .chambers import chamber_id, decompose, segment_analysis, wall_rays
from .errors import HNChambersError, ParseError
from .lattice import DivClass, format_rational, parse_rational, parse_vector, pair
from .model import SurfaceModel
from .mrc import mrc_polarization
from .stability import Semistable, hn_filtration, slope, wall_value
from .svg import render_chambers_svg
from .zoo import builtin, dumps, load_surface, to_config

log = logging.getLogger("hnchambers")

SEMISTABILITY_SCOPE = "relative to declared candidates"


def _vec_arg(text: str) -> DivClass:
    try:
        return parse_vector(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rat_arg(text: str):
    try:
        return parse_rational(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _vec(v: DivClass) -> list[str]:
    return v.to_strings()


def _sheaf(s) -> dict:
    return {"label": s.label, "rank": s.rank, "c1": _vec(s.c1), "note": s.note}


def _hnf(hnf, model: SurfaceModel, H) -> dict:
    doc = {
        "type": hnf.kind,
        "m": hnf.positive_length,
        "tangent_slope": format_rational(pair(model.lattice, model.tangent_c1, H) / 2),
    }
    if isinstance(hnf, Semistable):
        doc["slope"] = format_rational(hnf.slope)
        doc["semistability"] = SEMISTABILITY_SCOPE
        doc["candidates_tested"] = list(hnf.relative_to)
    else:
        doc["destabilizer"] = _sheaf(hnf.destabilizer)
        doc["mu1"] = format_rational(hnf.mu1)
        doc["mu2"] = format_rational(hnf.mu2)
    return doc


def _chamber(ch) -> dict:
    return {
        "id": ch.id.to_dict(),
        "boundary": [_vec(r) for r in ch.boundary],
        "inclusion": list(ch.inclusion),
        "sample": _vec(ch.sample),
    }


class UsageError(Exception):
    """Bad flag combination or value detected after argument parsing."""


def cmd_slope(args, model):
    try:
        sheaf = model.sheaf(args.sheaf)
    except KeyError:
        labels = ", ".join(["TX"] + [c.label for c in model.candidates])
        raise UsageError(f"--sheaf: unknown sheaf {args.sheaf!r} (choose from {labels})") from None
    return {"sheaf": _sheaf(sheaf), "H": _vec(args.H), "slope": format_rational(slope(sheaf, args.H, model))}


def cmd_hnf(args, model):
    return {"H": _vec(args.H), "hnf": _hnf(hn_filtration(model, args.H), model, args.H)}


def cmd_chamber(args, model):
    cid = chamber_id(model, args.H)
    return {
        "H": _vec(args.H),
        "chamber": cid.to_dict(),
        "wall_values": {L.label: format_rational(wall_value(L, args.H, model)) for L in model.candidates},
        "semistability": SEMISTABILITY_SCOPE,
    }


def cmd_chambers(args, model):
    chambers = decompose(model)
    walls, notes = wall_rays(model)
    doc = {
        "count": len(chambers),
        "chambers": [_chamber(c) for c in chambers],
        "walls": [{"ray": _vec(w.ray), "labels": list(w.labels)} for w in walls],
        "notes": notes,
        "semistability": SEMISTABILITY_SCOPE,
    }
    if args.svg:
        Path(args.svg).write_text(render_chambers_svg(chambers, model.cone, model.name), encoding="utf-8")
        doc["svg"] = args.svg
    return doc


def cmd_segment(args, model):
    rep = segment_analysis(model, args.from_, args.to)
    return {
        "from": _vec(rep.start),
        "to": _vec(rep.end),
        "intervals": [
            {
                "lo": format_rational(iv.lo),
                "hi": format_rational(iv.hi),
                "lo_closed": iv.lo_closed,
                "hi_closed": iv.hi_closed,
                "id": iv.id.to_dict(),
            }
            for iv in rep.intervals
        ],
        "crossings": [format_rational(t) for t in rep.crossings],
    }


def cmd_mrc(args, model):
    if (args.nef is None) != (args.aux is None):
        raise UsageError("--nef and --aux must be given together")
    kwargs = {}
    if args.nef is not None:
        kwargs = {"rc_hint": True, "nef_class": args.nef, "aux_ample": args.aux}
    if args.eps_cap is not None:
        kwargs["eps_cap"] = args.eps_cap
    res = mrc_polarization(model, **kwargs)
    return {
        "route": res.route,
        "polarization": _vec(res.polarization),
        "epsilon": None if res.epsilon is None else format_rational(res.epsilon),
        "interval": None if res.interval is None else [format_rational(x) for x in res.interval],
        "hnf": _hnf(res.hnf, model, res.polarization),
        "m": res.m,
        "foliation": res.foliation,
        "certificate": [
            {"label": e.label, "functional": _vec(e.functional), "value": format_rational(e.value)}
            for e in res.certificate
        ],
        "assumptions": list(res.assumptions),
    }


def cmd_builtin(args, model):
    doc = to_config(model)
    if args.emit:
        Path(args.emit).write_text(dumps(doc), encoding="utf-8")
        return {"emitted": args.emit, "name": model.name}
    return doc


def cmd_validate(args, model):
    return {
        "valid": True,
        "name": model.name,
        "rank": model.rank,
        "candidates": [c.label for c in model.candidates],
        "automorphisms": [a.label for a in model.automorphisms],
    }


COMMANDS = {
    "slope": cmd_slope,
    "hnf": cmd_hnf,
    "chamber": cmd_chamber,
    "chambers": cmd_chambers,
    "segment": cmd_segment,
    "mrc": cmd_mrc,
    "builtin": cmd_builtin,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hnchambers", description="Exact slope stability of surface tangent bundles across the ample cone.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_source(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--builtin", metavar="NAME", help="hirzebruch:<n> or product:<g>")
        g.add_argument("--surface", metavar="PATH", help="surface description file")
        return p

    p = with_source(sub.add_parser("slope", help="slope of a sheaf at H"))
    p.add_argument("--sheaf", required=True, metavar="LABEL", help="candidate label or TX")
    p.add_argument("--H", required=True, type=_vec_arg, metavar="VEC")

    p = with_source(sub.add_parser("hnf", help="Harder-Narasimhan filtration of T_X at H"))
    p.add_argument("--H", required=True, type=_vec_arg, metavar="VEC")

    p = with_source(sub.add_parser("chamber", help="chamber containing H"))
    p.add_argument("--H", required=True, type=_vec_arg, metavar="VEC")

    p = with_source(sub.add_parser("chambers", help="chamber decomposition of the ample cone"))
    p.add_argument("--svg", metavar="PATH")

    p = with_source(sub.add_parser("segment", help="wall crossings along a segment"))
    p.add_argument("--from", dest="from_", required=True, type=_vec_arg, metavar="VEC")
    p.add_argument("--to", required=True, type=_vec_arg, metavar="VEC")

    p = with_source(sub.add_parser("mrc", help="polarization realizing the MRC fibration"))
    p.add_argument("--nef", type=_vec_arg, metavar="VEC", help="very free curve class")
    p.add_argument("--aux", type=_vec_arg, metavar="VEC", help="auxiliary ample class")
    p.add_argument("--eps-cap", dest="eps_cap", type=_rat_arg, metavar="RAT")

    p = sub.add_parser("builtin", help="print or write a builtin surface description")
    p.add_argument("name", metavar="NAME")
    p.add_argument("--emit", metavar="PATH")

    p = sub.add_parser("validate", help="validate a surface description file")
    p.add_argument("--surface", required=True, metavar="PATH")
    return parser


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(name)s: %(message)s")

    if args.command == "builtin":
        source = {"builtin": args.name}
    else:
        source = {"builtin": args.builtin} if getattr(args, "builtin", None) else {"path": args.surface}
    inputs = {
        k: (_vec(v) if isinstance(v, DivClass) else format_rational(v) if k == "eps_cap" and v is not None else v)
        for k, v in sorted(vars(args).items())
        if k not in ("command", "builtin", "surface", "verbose", "name")
    }
    doc = {"provenance": {"tool": f"hnchambers {__version__}", "subcommand": args.command,
                          "surface": source, "inputs": inputs}}
    try:
        if args.command == "builtin" or getattr(args, "builtin", None):
            try:
                model = builtin(args.name if args.command == "builtin" else args.builtin)
            except ParseError as exc:
                flag = "NAME" if args.command == "builtin" else "--builtin"
                raise UsageError(f"{flag}: {exc}") from None
        else:
            model = load_surface(args.surface)
        doc["provenance"]["surface"]["name"] = model.name
        log.info("loaded %s", model.name)
        doc["result"] = COMMANDS[args.command](args, model)
        status = 0
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hnchambers: error: {exc}", file=sys.stderr)
        return 2
    except HNChambersError as exc:
        doc["error"] = {"code": exc.code, "message": str(exc)}
        status = 1
    stdout.write(dumps(doc))
    return status


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
