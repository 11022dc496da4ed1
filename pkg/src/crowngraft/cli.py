"""Command-line front end.  Every subcommand reads one JSON document (file or
stdin) and writes one document or SVG (file or stdout); failures print a JSON
error object on stderr and exit 2 (schema), 3 (domain) or 4 (numerical)."""
from __future__ import annotations

import argparse
import json
import sys
from contextlib import nullcontext

from . import io
from .config import tolerances
from .crown import coords_to_lamination, lamination_to_coords, to_dual_graph
from .errors import CrowngraftError, SchemaError
from .grafting import fiber_enumerate, graft_forward, graft_invert
from .matching import glue_crown_to_surface, minimal_match
from .polygon import coords_to_polygon, fan_triangulation, polygon_to_coords
from .render import render_dual_graph, render_matching, render_polygon, render_tips
from .schwarzian import PolynomialQD, subdominant_solution, tip_estimates


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _polygon_from(doc):
    if "coords" in doc:
        return coords_to_polygon([float(io.decode_real(x)) for x in io.field(doc, "coords", list)])
    return io.decode_polygon(doc)


def _triangulation(doc, n, apex):
    if "triangulation" in doc:
        return io.decode_triangulation(doc["triangulation"], n)
    return fan_triangulation(n, apex)


def cmd_polygon(args, doc):
    poly = _polygon_from(io.check(doc, "polygon"))
    return io.document("polygon", **io.encode_polygon(poly),
                       coords=list(polygon_to_coords(poly).values))


def cmd_graft(args, doc):
    io.check(doc, "graft_input")
    poly = _polygon_from(io.field(doc, "polygon", dict))
    lam = io.decode_diagonals(io.field(doc, "diagonals", dict), poly.n)
    res = graft_forward(poly, lam, order=args.order)
    return io.document("tips", **io.encode_tips(res.tips))


def cmd_ungraft(args, doc):
    conf = io.decode_tips(io.check(doc, "tips"))
    poly, weights = graft_invert(conf, _triangulation(doc, len(conf), args.apex))
    return io.document("graft_input", polygon=io.encode_polygon(poly),
                       diagonals=io.encode_diagonals(weights))


def cmd_fiber(args, doc):
    conf = io.decode_tips(io.check(doc, "tips"))
    elems = fiber_enumerate(conf, _triangulation(doc, len(conf), args.apex), args.nmax)
    return io.document(
        "fiber", polygon=io.encode_polygon(elems[0].polygon),
        elements=[{"turns": list(e.turns), **io.encode_diagonals(e.weighted())} for e in elems])


def cmd_crown(args, doc):
    io.check(doc, ("crown_lamination", "crown_coords"))
    if doc["kind"] == "crown_coords":
        lam = coords_to_lamination(*io.decode_crown_coords(doc))
    else:
        lam = io.decode_lamination(doc)
    if args.dual_graph:
        return io.document("dual_graph", **io.encode_dual_graph(to_dual_graph(lam)))
    if doc["kind"] == "crown_coords":
        return io.document("crown_lamination", **io.encode_lamination(lam))
    return io.document("crown_coords", **io.encode_crown_coords(*lamination_to_coords(lam)))


def cmd_match(args, doc):
    top, bottom = io.decode_rows(io.check(doc, "match_input"))
    return io.document("matching", top=[io.encode_number(w) for w in top],
                       bottom=[io.encode_number(w) for w in bottom],
                       **io.encode_matching(minimal_match(top, bottom)))


def cmd_glue(args, doc):
    scene = io.decode_scene(io.check(doc, "gluing_scene"))
    return io.document("combined_arcs", **io.encode_combined(glue_crown_to_surface(scene)))


def _coeffs(text):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"--coeffs is not JSON: {exc}") from exc
    if not isinstance(raw, list):
        raise SchemaError("--coeffs must be a JSON list a_0, ..., a_{d-2}")
    return [complex(io.decode_point(c).value()) for c in raw]


def cmd_tips(args, doc):
    q = PolynomialQD(args.degree, tuple(_coeffs(args.coeffs)))
    kw = {} if args.tol is None else {"rtol": args.tol, "atol": args.tol}
    rep = tip_estimates(q, R=args.radius, workers=args.workers, **kw)
    if args.trace:
        sample = subdominant_solution(q, 0, rep.seed_radius, 0.0, **kw)
        _write(args.trace, sample.to_csv())
    return io.document(
        "tips", **io.encode_tips(rep.configuration),
        errors=[float(e) for e in rep.errors],
        polynomial={"d": q.d, "coeffs": [io.encode_point(c) for c in q.coeffs]},
        seed_radius=float(rep.seed_radius),
        wronskian_drift=float(rep.wronskian_drift))


def cmd_render(args, doc):
    kind = io.check(doc)["kind"]
    if kind == "polygon":
        return render_polygon(_polygon_from(doc))
    if kind == "graft_input":
        poly = _polygon_from(io.field(doc, "polygon", dict))
        return render_polygon(poly, io.decode_diagonals(io.field(doc, "diagonals", dict), poly.n))
    if kind == "tips":
        return render_tips(io.decode_tips(doc).tips, doc.get("errors"))
    if kind in ("crown_lamination", "crown_coords"):
        lam = (coords_to_lamination(*io.decode_crown_coords(doc)) if kind == "crown_coords"
               else io.decode_lamination(doc))
        return render_dual_graph(to_dual_graph(lam))
    if kind == "matching":
        top, bottom = io.decode_rows(doc)
        return render_matching(top, bottom, minimal_match(top, bottom))
    raise SchemaError(f"nothing to render for kind {kind!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="crowngraft", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, needs_input=True):
        sp = sub.add_parser(name, help=help_text)
        if needs_input:
            sp.add_argument("input", nargs="?", default="-", help="JSON file (default stdin)")
        sp.add_argument("-o", "--output", default="-", help="output file (default stdout)")
        sp.add_argument("--tol", type=float, default=None,
                        help="tolerance override (projective, or ODE rtol/atol for tips)")
        sp.set_defaults(func=func, needs_input=needs_input)
        return sp

    add("polygon", cmd_polygon, "vertices <-> cross-ratio coordinates")
    sp = add("graft", cmd_graft, "graft a polygon along weighted diagonals")
    sp.add_argument("--order", choices=("bfs", "dfs"), default="bfs")
    for name, func, text in (("ungraft", cmd_ungraft, "recover polygon and weights from tips"),
                             ("fiber", cmd_fiber, "enumerate the fiber over a tip configuration")):
        sp = add(name, func, text)
        sp.add_argument("--apex", type=int, default=0,
                        help="fan triangulation apex when the input names none")
        if name == "fiber":
            sp.add_argument("--nmax", type=int, default=1)
    sp = add("crown-coords", cmd_crown, "crown lamination <-> per-cell coordinates")
    sp.add_argument("--dual-graph", action="store_true", help="emit the dual metric graph")
    add("match", cmd_match, "minimal matching of two weighted rows")
    add("glue", cmd_glue, "glue crown arcs to surface arcs")
    sp = add("tips", cmd_tips, "asymptotic values of a polynomial Schwarzian", needs_input=False)
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--coeffs", default="[]", help="JSON list a_0, ..., a_{d-2}")
    sp.add_argument("--radius", type=float, default=None, help="seed radius")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--trace", default=None, help="write the sector-0 solution as CSV")
    add("render", cmd_render, "SVG figure of a document")
    return p


def _fail(exc: Exception, code: int) -> int:
    err = {"schema": io.SCHEMA, "kind": "error", "error": type(exc).__name__,
           "message": str(exc), "exit_code": code}
    sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = io.loads(_read(args.input)) if args.needs_input else None
        ctx = (tolerances(proj=args.tol, det=args.tol)
               if args.tol is not None and args.command != "tips" else nullcontext())
        with ctx:
            result = args.func(args, doc)
        _write(args.output, result if isinstance(result, str) else io.dumps(result))
    except CrowngraftError as exc:
        return _fail(exc, exc.exit_code)
    except (KeyError, TypeError, AttributeError) as exc:
        return _fail(exc, SchemaError.exit_code)
    except (ValueError, ZeroDivisionError) as exc:
        return _fail(exc, 3)
    except OSError as exc:
        return _fail(exc, 2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
