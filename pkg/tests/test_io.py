import json
import math
from fractions import Fraction

import pytest

from crowngraft import io
from crowngraft.crown import lamination_to_coords, to_dual_graph
from crowngraft.errors import SchemaError
from crowngraft.grafting import TipConfiguration
from crowngraft.matching import minimal_match
from crowngraft.moebius import INF, MoebiusMap, sphere
from crowngraft.polygon import normalize_polygon

from helpers import random_polygon, random_scene, random_weighted
from test_crown import random_lamination


def through_text(doc):
    return json.loads(io.dumps(doc))


def test_dumps_is_canonical():
    text = io.dumps({"b": 1, "a": [0.1, 2]})
    assert text.endswith("\n") and text.index('"a"') < text.index('"b"')
    assert "0.1" in text
    with pytest.raises(ValueError):
        io.dumps({"x": math.nan})


def test_numbers():
    assert io.encode_number(Fraction(3, 4)) == "3/4"
    assert io.encode_number(Fraction(4, 2)) == 2
    assert io.encode_number(0.1) == 0.1
    assert io.decode_real("3/4") == Fraction(3, 4)
    assert io.decode_rational(2) == 2
    with pytest.raises(SchemaError):
        io.decode_rational(0.5)
    with pytest.raises(SchemaError):
        io.decode_real(True)
    with pytest.raises(SchemaError):
        io.decode_real("abc")
    with pytest.raises(ValueError):
        io.encode_number(math.inf)


def test_points():
    assert io.encode_point(INF) == "inf"
    assert io.decode_point("inf") == INF
    enc = io.encode_point(sphere(complex(-0.0, -0.0)))
    assert enc == {"re": 0.0, "im": 0.0} and math.copysign(1, enc["re"]) == 1
    for z in (1 + 2j, -0.25j, 1e-300, 3.0):
        assert io.decode_point(through_text(io.encode_point(sphere(z)))) == sphere(z)
    with pytest.raises(SchemaError):
        io.decode_point("nowhere")


def test_map_encoding():
    m = MoebiusMap(1, 2, 3, 7)
    enc = io.encode_map(m)
    assert len(enc) == 2 and all(len(row) == 2 for row in enc)


def test_schema_checks():
    with pytest.raises(SchemaError):
        io.loads("{not json")
    with pytest.raises(SchemaError):
        io.loads("[]")
    with pytest.raises(SchemaError):
        io.loads('{"schema": "crowngraft/v0", "kind": "tips"}')
    with pytest.raises(SchemaError):
        io.loads('{"schema": "crowngraft/v1", "kind": "tips"}', "polygon")
    with pytest.raises(SchemaError):
        io.field({}, "x")
    with pytest.raises(SchemaError):
        io.field({"x": "1"}, "x", int)


def test_polygon_diagonals_round_trip(rng):
    for _ in range(30):
        n = rng.randint(4, 9)
        poly = random_polygon(rng, n)
        assert io.decode_polygon(through_text(io.encode_polygon(poly))) == poly
        # points computed by maps come back identical after one trip through text
        norm, _ = normalize_polygon(poly)
        text = io.dumps(io.encode_polygon(norm))
        assert io.dumps(io.encode_polygon(io.decode_polygon(json.loads(text)))) == text
        w = random_weighted(rng, n)
        assert io.decode_diagonals(through_text(io.encode_diagonals(w))) == w


def test_tips_round_trip(rng):
    conf = TipConfiguration((sphere(0), INF, sphere(1), sphere(0.5 + 0.25j)))
    assert io.decode_tips(through_text(io.encode_tips(conf))) == conf


def test_triangulation_decoding():
    tri = io.decode_triangulation([[0, 2], [0, 3]], 5)
    assert tri.is_triangulation()
    with pytest.raises(SchemaError):
        io.decode_triangulation([[0, 2, 4]], 5)
    with pytest.raises(SchemaError):
        io.decode_triangulation({"a": 1}, 5)


def test_crown_round_trips(rng):
    for _ in range(60):
        lam = random_lamination(rng, rng.randint(1, 6))
        assert io.decode_lamination(through_text(io.encode_lamination(lam))) == lam
        coords = lamination_to_coords(lam)
        back = io.decode_crown_coords(through_text(io.encode_crown_coords(*coords)))
        assert back == coords
        g = to_dual_graph(lam)
        assert io.decode_dual_graph(through_text(io.encode_dual_graph(g))) == g


def test_lamination_type_errors():
    doc = {"m": 4, "arcs": [{"type": "loop"}]}
    with pytest.raises(SchemaError):
        io.decode_lamination(doc)


def test_matching_and_scene_round_trip(rng):
    for _ in range(30):
        scene = random_scene(rng)
        assert io.decode_scene(through_text(io.encode_scene(scene))) == scene
    mm = minimal_match([Fraction(5, 2), 1], [1, Fraction(5, 2)])
    assert io.decode_matching(through_text(io.encode_matching(mm))) == mm


def test_scene_rejects_floats():
    doc = {"crown": [{"cusp": 1, "weight": 2, "position": 0.5}],
           "surface": [{"id": "l", "start": "1/4", "end": "3/4", "weight": 1}]}
    with pytest.raises(SchemaError):
        io.decode_scene(doc)
