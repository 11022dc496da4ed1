import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from crowngraft.errors import BasepointCollision, UnbalancedRows
from crowngraft.matching import (
    ArcRow,
    CrownEnd,
    GluingScene,
    SurfaceArc,
    brute_force_match,
    glue_crown_to_surface,
    is_minimal,
    minimal_match,
    restriction_totals,
    slide_off_basepoint,
)

from helpers import random_scene

F = Fraction


def compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def test_greedy_examples():
    assert minimal_match([3], [3]).weights == (3,)
    assert minimal_match([2, 2], [1, 3]).weights == (1, 1, 2)
    mm = minimal_match([F(7, 2)], [1, F(1, 2), 2])
    assert mm.weights == (1, F(1, 2), 2)
    assert [s.top for s in mm] == [(0, 0), (0, 1), (0, 2)]


def test_brute_force_examples():
    (only,) = brute_force_match([1, 1], [1, 1])
    assert only.key() == ((0, 0, 1), (1, 1, 1))
    (only,) = brute_force_match([2], [1, 1])
    assert only.weights == (1, 1)
    assert brute_force_match([1], [2]) == []


def test_exact_weights_only():
    with pytest.raises(TypeError):
        minimal_match([0.5, 0.5], [1])
    with pytest.raises(ValueError):
        minimal_match([0, 1], [1])
    with pytest.raises(UnbalancedRows):
        minimal_match([1, 2], [2])
    assert minimal_match(["1/3", "2/3"], [1]).weights == (F(1, 3), F(2, 3))


def test_exhaustive_small():
    for total in range(1, 7):
        for n in range(1, 4):
            for m in range(1, 4):
                for a in compositions(total, n):
                    for b in compositions(total, m):
                        if max(a + b) > 5:
                            continue
                        got = brute_force_match(a, b, weight_grid=1)
                        assert len(got) == 1
                        assert got[0].key() == minimal_match(a, b).key()


weights = st.lists(st.fractions(min_value=F(1, 12), max_value=5, max_denominator=12),
                   min_size=1, max_size=6)


@given(weights, weights)
def test_greedy_is_minimal(a, b):
    # rescale b so the rows balance exactly
    scale = sum(a) / sum(b)
    b = [x * scale for x in b]
    mm = minimal_match(a, b)
    assert is_minimal(a, b, mm)
    assert len(mm) <= len(a) + len(b) - 1
    assert all(isinstance(s.weight, Fraction) for s in mm)


def test_is_minimal_rejects():
    a, b = [2, 2], [1, 3]
    good = minimal_match(a, b)
    assert is_minimal(a, b, good)
    from crowngraft.matching import MinimalMatching, Strand
    split = MinimalMatching((Strand((0, 0), (0, 0), F(1, 2)), Strand((0, 1), (0, 1), F(1, 2)),
                             *good.strands[1:]))
    assert not is_minimal(a, b, split)
    crossing = MinimalMatching((Strand((0, 0), (1, 0), 2), Strand((1, 0), (0, 0), 1),
                                Strand((1, 1), (1, 1), 1)))
    assert not is_minimal(a, b, crossing)


def test_rows():
    row = ArcRow((1, 2), ("x", "y"))
    assert row.total == 3 and row.reversed().origins == ("y", "x")
    with pytest.raises(ValueError):
        ArcRow((1, 2), ("x",))


# -- gluing -----------------------------------------------------------------

def test_single_crown_arc_feeds_both_ends():
    scene = GluingScene((CrownEnd(1, 2, F(1, 2)),), (SurfaceArc("l", F(1, 4), F(3, 4), 1),))
    out = glue_crown_to_surface(scene)
    (arc,) = out.arcs
    assert arc.weight == 1 and arc.start == arc.end == (1, 0)
    # the two ends are different split copies of the crown arc
    assert arc.lineage[0][0] == arc.lineage[1][0] == 0
    assert arc.lineage[0][1] != arc.lineage[1][1]
    assert out.stage_one.weights == (1, 1)


def test_aligned_weights_do_not_split():
    surface = (SurfaceArc("A", F(1, 10), F(3, 10), 1), SurfaceArc("B", F(5, 10), F(7, 10), 2))
    crown = (CrownEnd(1, 1, F(1, 20)), CrownEnd(2, 1, F(2, 10)),
             CrownEnd(3, 2, F(45, 100)), CrownEnd(4, 2, F(6, 10)))
    out = glue_crown_to_surface(GluingScene(crown, surface))
    assert len(out) == 2 and len(out.stage_one) == 4
    assert {(a.surface_id, a.start[0], a.end[0]) for a in out} == {("A", 1, 2), ("B", 3, 4)}


def test_scene_validation():
    s = (SurfaceArc("A", F(1, 4), F(1, 2), 1),)
    with pytest.raises(BasepointCollision):
        GluingScene((CrownEnd(1, 2, 0),), s)
    with pytest.raises(BasepointCollision):
        GluingScene((CrownEnd(1, 2, F(1, 3)),), (SurfaceArc("A", 0, F(1, 2), 1),))
    with pytest.raises(ValueError):
        GluingScene((), (SurfaceArc("A", F(1, 4), F(1, 2), 1), SurfaceArc("B", F(1, 2), F(3, 4), 1)))
    with pytest.raises(UnbalancedRows):
        glue_crown_to_surface(GluingScene((CrownEnd(1, 1, F(1, 3)),), s))
    with pytest.raises(TypeError):
        CrownEnd(1, 0.5, F(1, 3))


def test_slide_off_basepoint():
    crown = (CrownEnd(1, 2, 0), CrownEnd(2, 2, F(1, 2)))
    surface = (SurfaceArc("A", 0, F(1, 4), 1), SurfaceArc("B", F(3, 8), F(3, 4), 1))
    with pytest.raises(BasepointCollision):
        GluingScene(crown, surface)
    raw = GluingScene.__new__(GluingScene)
    object.__setattr__(raw, "crown", crown)
    object.__setattr__(raw, "surface", surface)
    object.__setattr__(raw, "basepoint", F(0))
    object.__setattr__(raw, "period", F(1))
    slid = slide_off_basepoint(raw, F(1, 100))
    assert sorted(c.position for c in slid.crown) == [F(1, 100), F(1, 2), F(99, 100)]
    assert sum(c.weight for c in slid.crown) == 4
    assert slid.surface[0].start == F(1, 100)
    out = glue_crown_to_surface(slid)
    assert sum(a.weight for a in out) == 2


def test_random_scenes(rng):
    for _ in range(100):
        scene = random_scene(rng)
        out = glue_crown_to_surface(scene)
        crown, surface = restriction_totals(out)
        assert {k: crown[k] for k in range(len(scene.crown))} == \
            {k: c.weight for k, c in enumerate(scene.crown)}
        assert dict(surface) == {s.id: s.weight for s in scene.surface}
        sigs = out.signatures()
        assert len(sigs) == len(set(sigs))
        for mm in out.stage_two.values():
            assert all(isinstance(x.weight, Fraction) for x in mm)


def test_basepoint_choice_preserves_totals(rng):
    for _ in range(30):
        scene = random_scene(rng)
        pts = {c.position for c in scene.crown} | {p for s in scene.surface for p in (s.start, s.end)}
        base = next(F(k, 97) for k in range(1, 97) if F(k, 97) not in pts)
        moved = glue_crown_to_surface(GluingScene(scene.crown, scene.surface, base))
        orig = glue_crown_to_surface(scene)
        assert restriction_totals(moved) == restriction_totals(orig)
