"""JSON interchange documents, versioned under ``"schema": "crowngraft/v1"``.

Points are ``{"re": x, "im": y}`` or the string ``"inf"``.  Exact rationals are
written as integers when integral and as ``"p/q"`` strings otherwise; floats
use Python's shortest round-trip representation.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction

from .crown import (
    CrownLamination,
    CrownShape,
    CuspToBoundary,
    CuspToCusp,
    DualMetricGraph,
    TwistChart,
)
from .errors import SchemaError
from .grafting import TipConfiguration
from .matching import (
    CombinedArcSystem,
    CrownEnd,
    GluingScene,
    MinimalMatching,
    Strand,
    SurfaceArc,
)
from .moebius import MoebiusMap, SpherePoint, sphere
from .polygon import DiagonalSet, IdealPolygon, WeightedDiagonals

SCHEMA = "crowngraft/v1"


def dumps(doc: dict) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def document(kind: str, **fields) -> dict:
    return {"schema": SCHEMA, "kind": kind, **fields}


def loads(text: str, kind=None) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return check(doc, kind)


def check(doc, kind=None) -> dict:
    if not isinstance(doc, dict):
        raise SchemaError("top level must be a JSON object")
    if doc.get("schema") != SCHEMA:
        raise SchemaError(f"expected schema {SCHEMA!r}, got {doc.get('schema')!r}")
    if kind is not None:
        kinds = (kind,) if isinstance(kind, str) else tuple(kind)
        if doc.get("kind") not in kinds:
            raise SchemaError(f"expected kind {' or '.join(kinds)}, got {doc.get('kind')!r}")
    return doc


def field(doc: dict, key: str, types=None):
    if key not in doc:
        raise SchemaError(f"missing field {key!r}")
    value = doc[key]
    if types is not None and not isinstance(value, types):
        raise SchemaError(f"field {key!r} has the wrong type ({type(value).__name__})")
    return value


# --------------------------------------------------------------------------
# numbers and points


def encode_number(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return x
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite number {x!r}")
    return x


def decode_real(v, what="number"):
    if isinstance(v, bool):
        raise SchemaError(f"{what}: expected a number, got a boolean")
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        try:
            return Fraction(v)
        except ValueError as exc:
            raise SchemaError(f"{what}: cannot read {v!r} as a rational") from exc
    raise SchemaError(f"{what}: expected a number, got {type(v).__name__}")


def decode_rational(v, what="weight") -> Fraction:
    if isinstance(v, float):
        raise SchemaError(f"{what}: floats are not accepted here, write {v!r} as a string 'p/q'")
    x = decode_real(v, what)
    return Fraction(x)


def encode_point(p) -> object:
    p = sphere(p)
    if p.is_inf:
        return "inf"
    z = p.value()
    # adding 0.0 turns -0.0 into 0.0
    return {"re": float(z.real) + 0.0, "im": float(z.imag) + 0.0}


def decode_point(v) -> SpherePoint:
    if isinstance(v, str):
        if v.strip().lower() in ("inf", "infinity"):
            return SpherePoint(1, 0)
        raise SchemaError(f"unknown point literal {v!r}")
    if isinstance(v, dict):
        re, im = decode_real(v.get("re", 0), "re"), decode_real(v.get("im", 0), "im")
        return SpherePoint(complex(float(re), float(im)), 1)
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return SpherePoint(complex(v), 1)
    raise SchemaError(f"cannot read point {v!r}")


def encode_map(m: MoebiusMap) -> list:
    return [[encode_point(m.a), encode_point(m.b)], [encode_point(m.c), encode_point(m.d)]]


# --------------------------------------------------------------------------
# polygons, diagonals, tips


def encode_polygon(poly: IdealPolygon) -> dict:
    return {"vertices": [encode_point(v) for v in poly.vertices]}


def decode_polygon(v) -> IdealPolygon:
    verts = field(v, "vertices", list)
    return IdealPolygon(tuple(decode_point(p) for p in verts))


def encode_diagonals(w: WeightedDiagonals) -> dict:
    return {"n": w.n, "diagonals": [{"pair": list(e), "weight": encode_number(w.weights[e])}
                                   for e in w.diagonals.sorted()]}


def decode_diagonals(v, n=None) -> WeightedDiagonals:
    n = field(v, "n", int) if n is None else n
    items = []
    for item in field(v, "diagonals", list):
        pair = field(item, "pair", list)
        if len(pair) != 2 or not all(isinstance(x, int) for x in pair):
            raise SchemaError(f"diagonal pair must be two integers, got {pair!r}")
        items.append((tuple(pair), float(decode_real(item.get("weight", 0), "weight"))))
    return WeightedDiagonals.from_pairs(n, items)


def decode_triangulation(v, n: int) -> DiagonalSet:
    if not isinstance(v, list):
        raise SchemaError("triangulation must be a list of index pairs")
    pairs = []
    for p in v:
        if not (isinstance(p, list) and len(p) == 2 and all(isinstance(x, int) for x in p)):
            raise SchemaError(f"bad diagonal {p!r}")
        pairs.append(tuple(p))
    return DiagonalSet(n, frozenset(pairs))


def encode_tips(conf: TipConfiguration) -> dict:
    return {"d": conf.d, "tips": [encode_point(c) for c in conf]}


def decode_tips(v) -> TipConfiguration:
    return TipConfiguration(tuple(decode_point(p) for p in field(v, "tips", list)))


# --------------------------------------------------------------------------
# crowns


def encode_lamination(lam: CrownLamination) -> dict:
    arcs = []
    for a in lam.chords:
        arcs.append({"type": "cusp_to_cusp", "i": a.i, "j": a.j, "weight": encode_number(a.weight)})
    for a in lam.boundary_arcs:
        arcs.append({"type": "cusp_to_boundary", "cusp": a.cusp, "weight": encode_number(a.weight),
                     "twist": int(a.twist), "offset": encode_number(a.offset)})
    return {"m": lam.m, "arcs": arcs,
            "boundary_leaf_weight": encode_number(lam.boundary_leaf_weight)}


def decode_lamination(v) -> CrownLamination:
    arcs = []
    for a in field(v, "arcs", list):
        kind = field(a, "type", str)
        if kind == "cusp_to_cusp":
            arcs.append(CuspToCusp(field(a, "i", int), field(a, "j", int),
                                   decode_real(field(a, "weight"))))
        elif kind == "cusp_to_boundary":
            arcs.append(CuspToBoundary(field(a, "cusp", int), decode_real(field(a, "weight")),
                                       a.get("twist", 0), decode_real(a.get("offset", 0))))
        else:
            raise SchemaError(f"unknown arc type {kind!r}")
    return CrownLamination(field(v, "m", int), tuple(arcs),
                           decode_real(v.get("boundary_leaf_weight", 0)))


def encode_crown_coords(shape: CrownShape, weights, chart: TwistChart) -> dict:
    return {"shape": {"m": shape.m, "boundary_cusps": list(shape.boundary_cusps),
                      "chords": [list(c) for c in shape.chords]},
            "weights": [encode_number(w) for w in weights],
            "chart": {"l": encode_number(chart.l), "tau": encode_number(chart.tau)}}


def decode_crown_coords(v):
    s = field(v, "shape", dict)
    shape = CrownShape(field(s, "m", int), tuple(s.get("boundary_cusps", ())),
                       tuple(tuple(c) for c in s.get("chords", ())))
    weights = [decode_real(w) for w in field(v, "weights", list)]
    c = field(v, "chart", dict)
    chart = TwistChart(decode_real(field(c, "l")), decode_real(c.get("tau", 0)))
    return shape, weights, chart


def encode_dual_graph(g: DualMetricGraph) -> dict:
    return g.to_json()


def decode_dual_graph(v) -> DualMetricGraph:
    edges = tuple((field(e, "u", int), field(e, "v", int), decode_real(field(e, "length")),
                   tuple(field(e, "dual_to", list))) for e in field(v, "edges", list))
    return DualMetricGraph(
        field(v, "m", int), tuple(tuple(x) for x in field(v, "vertices", list)), edges,
        tuple((field(e, "vertex", int), field(e, "side", int))
              for e in field(v, "infinite_edges", list)),
        tuple(v.get("cycle", ())), decode_real(v.get("basepoint", 0)))


# --------------------------------------------------------------------------
# matchings and gluing


def encode_matching(mm: MinimalMatching) -> dict:
    return {"strands": [{"top": list(s.top), "bottom": list(s.bottom),
                         "weight": encode_number(s.weight)} for s in mm]}


def decode_matching(v) -> MinimalMatching:
    return MinimalMatching(tuple(
        Strand(tuple(field(s, "top", list)), tuple(field(s, "bottom", list)),
               decode_rational(field(s, "weight")))
        for s in field(v, "strands", list)))


def decode_rows(v):
    top = [decode_rational(w) for w in field(v, "top", list)]
    bottom = [decode_rational(w) for w in field(v, "bottom", list)]
    return top, bottom


def encode_scene(scene: GluingScene) -> dict:
    return {"crown": [{"cusp": c.cusp, "weight": encode_number(c.weight),
                       "position": encode_number(c.position), "twist": c.twist}
                      for c in scene.crown],
            "surface": [{"id": s.id, "start": encode_number(s.start), "end": encode_number(s.end),
                         "weight": encode_number(s.weight)} for s in scene.surface],
            "basepoint": encode_number(scene.basepoint),
            "period": encode_number(scene.period)}


def decode_scene(v) -> GluingScene:
    crown = [CrownEnd(field(c, "cusp"), decode_rational(field(c, "weight")),
                      decode_rational(field(c, "position"), "position"), int(c.get("twist", 0)))
             for c in field(v, "crown", list)]
    surface = [SurfaceArc(field(s, "id"), decode_rational(field(s, "start"), "start"),
                          decode_rational(field(s, "end"), "end"),
                          decode_rational(field(s, "weight")))
               for s in field(v, "surface", list)]
    return GluingScene(tuple(crown), tuple(surface),
                       decode_rational(v.get("basepoint", 0), "basepoint"),
                       decode_rational(v.get("period", 1), "period"))


def encode_combined(system: CombinedArcSystem) -> dict:
    return {"arcs": [{"surface_arc": a.surface_id,
                      "start": {"cusp": a.start[0], "twist": a.start[1]},
                      "end": {"cusp": a.end[0], "twist": a.end[1]},
                      "weight": encode_number(a.weight),
                      "lineage": [list(x) for x in a.lineage]} for a in system],
            "stage_one": encode_matching(system.stage_one)["strands"]}
