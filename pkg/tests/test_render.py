import json
import xml.etree.ElementTree as ET

from crowngraft import io
from crowngraft.crown import CrownLamination, CuspToCusp, to_dual_graph
from crowngraft.matching import minimal_match
from crowngraft.render import chart, render_dual_graph, render_matching, render_polygon, render_tips
from crowngraft.moebius import INF, sphere

NS = "{http://www.w3.org/2000/svg}"


def parse(svg):
    return ET.fromstring(svg)


def test_chart():
    assert chart(INF) is None
    assert chart(sphere(0)) == 0
    assert abs(chart(sphere(1e9))) < 1


def test_empty_crown_figure():
    svg = render_dual_graph(to_dual_graph(CrownLamination(4)))
    root = parse(svg)
    stubs = [e for e in root.iter(NS + "line") if e.get("stroke-dasharray") == "4,3"]
    assert len(stubs) == 4
    assert len(root.findall(NS + "circle")) == 2  # disk and the single region


def test_pentagon_weight_label(fixtures):
    doc = json.loads((fixtures / "pentagon_one_diagonal.json").read_text())
    poly = io.decode_polygon(doc["polygon"]) if "vertices" in doc["polygon"] else None
    from crowngraft.polygon import coords_to_polygon
    poly = poly or coords_to_polygon(doc["polygon"]["coords"])
    svg = render_polygon(poly, io.decode_diagonals(doc["diagonals"]))
    texts = [t.text for t in parse(svg).iter(NS + "text")]
    assert "1.25" in texts
    assert sum(1 for e in parse(svg).iter(NS + "line")) == 1


def test_tips_figure(fixtures):
    doc = json.loads((fixtures / "tips_z2.json").read_text())
    svg = render_tips(io.decode_tips(doc).tips, doc["errors"])
    root = parse(svg)
    labels = [t.text for t in root.iter(NS + "text")]
    assert sorted(labels) == ["c0", "c1=∞", "c2", "c3"]
    # infinity is a square glyph on the boundary; the others get dots and error rings
    assert len(root.findall(NS + "rect")) == 2
    rings = [c for c in root.iter(NS + "circle") if c.get("stroke-dasharray") == "2,2"]
    assert len(rings) == 3


def test_matching_figure():
    mm = minimal_match([2, 2], [1, 3])
    root = parse(render_matching([2, 2], [1, 3], mm))
    bands = [p for p in root.iter(NS + "polygon")]
    assert len(bands) == 3


def test_deterministic():
    lam = CrownLamination(5, (CuspToCusp(1, 3, 2), CuspToCusp(1, 4, 1)))
    assert render_dual_graph(to_dual_graph(lam)) == render_dual_graph(to_dual_graph(lam))
