"""Minimal matchings of weighted arc rows across a rectangle, and the two-stage
gluing of crown arcs to surface arcs along a shared boundary curve.

All weights are exact rationals.  Floats are refused because the case split
(equal, larger, smaller) must be decided exactly.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Hashable

from .errors import BasepointCollision, UnbalancedRows


def exact(x, what: str = "weight") -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (Rational, str)):
        raise TypeError(f"{what} must be an int, Fraction or rational string, got {x!r}")
    return Fraction(x)


def _positive(x, what="weight") -> Fraction:
    x = exact(x, what)
    if x <= 0:
        raise ValueError(f"{what} must be positive, got {x}")
    return x


@dataclass(frozen=True)
class ArcRow:
    """Weighted arcs incident on one edge of a rectangle, left to right."""

    weights: tuple
    origins: tuple = None

    def __post_init__(self):
        w = tuple(_positive(x) for x in self.weights)
        o = tuple(range(len(w))) if self.origins is None else tuple(self.origins)
        if len(o) != len(w):
            raise ValueError("one origin per weight is required")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "origins", o)

    def __len__(self):
        return len(self.weights)

    @property
    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def reversed(self) -> "ArcRow":
        return ArcRow(self.weights[::-1], self.origins[::-1])


def _row(x) -> ArcRow:
    return x if isinstance(x, ArcRow) else ArcRow(tuple(x))


@dataclass(frozen=True)
class Strand:
    """``top`` and ``bottom`` are ``(origin, split ordinal)`` pairs."""

    top: tuple
    bottom: tuple
    weight: Fraction


@dataclass(frozen=True)
class MinimalMatching:
    strands: tuple

    def __len__(self):
        return len(self.strands)

    def __iter__(self):
        return iter(self.strands)

    @property
    def weights(self) -> tuple:
        return tuple(s.weight for s in self.strands)

    def key(self) -> tuple:
        """Origins and weights only; equal keys mean equal matchings."""
        return tuple((s.top[0], s.bottom[0], s.weight) for s in self.strands)

    def to_json(self) -> list:
        return [{"top": list(s.top), "bottom": list(s.bottom), "weight": str(s.weight)}
                for s in self.strands]


def _check_balanced(a: ArcRow, b: ArcRow):
    if a.total != b.total:
        raise UnbalancedRows(f"row totals differ: {a.total} vs {b.total}")


def minimal_match(a, b) -> MinimalMatching:
    """Greedy left-to-right pairing: match the two leftmost unpaired pieces,
    splitting whichever is heavier."""
    a, b = _row(a), _row(b)
    _check_balanced(a, b)
    strands = []
    i = j = 0
    ra = a.weights[0] if len(a) else None
    rb = b.weights[0] if len(b) else None
    na, nb = Counter(), Counter()
    while i < len(a) and j < len(b):
        w = min(ra, rb)
        oa, ob = a.origins[i], b.origins[j]
        strands.append(Strand((oa, na[i]), (ob, nb[j]), w))
        na[i] += 1
        nb[j] += 1
        ra, rb = ra - w, rb - w
        if ra == 0:
            i += 1
            ra = a.weights[i] if i < len(a) else None
        if rb == 0:
            j += 1
            rb = b.weights[j] if j < len(b) else None
    return MinimalMatching(tuple(strands))


def is_minimal(a, b, matching: MinimalMatching) -> bool:
    """Check non-crossing, exact conservation and the no-double-split rule."""
    a, b = _row(a), _row(b)
    ta = {o: k for k, o in enumerate(a.origins)}
    tb = {o: k for k, o in enumerate(b.origins)}
    pos = [(ta[s.top[0]], tb[s.bottom[0]]) for s in matching]
    if any(p[0] > q[0] or p[1] > q[1] for p, q in zip(pos, pos[1:])):
        return False
    if any(s.weight <= 0 for s in matching):
        return False
    sa, sb = Counter(), Counter()
    for (x, y), s in zip(pos, matching):
        sa[x] += s.weight
        sb[y] += s.weight
    if any(sa[k] != w for k, w in enumerate(a.weights)):
        return False
    if any(sb[k] != w for k, w in enumerate(b.weights)):
        return False
    return all(p != q for p, q in zip(pos, pos[1:]))


def brute_force_match(a, b, weight_grid=Fraction(1, 2)) -> list:
    """Every non-crossing, conserving, minimal matching whose strand weights are
    positive multiples of ``weight_grid``.

    Strands are drawn one at a time between any top and bottom arcs at or to
    the right of the previous strand's arcs; partial sequences are dropped as
    soon as they overspend an arc, leave one behind unfinished, or repeat the
    previous pair.
    """
    a, b = _row(a), _row(b)
    grid = _positive(weight_grid, "weight_grid")
    if a.total != b.total:
        return []
    out = []
    n, m = len(a), len(b)

    def done_through(spent, row, k):
        return all(spent[x] == row.weights[x] for x in range(k))

    def extend(path, sa, sb):
        if path:
            i0, j0 = path[-1][0], path[-1][1]
        else:
            i0 = j0 = 0
        if path and all(sa[x] == a.weights[x] for x in range(n)) \
                and all(sb[y] == b.weights[y] for y in range(m)):
            out.append(path)
            return
        for i in range(i0, n):
            if not done_through(sa, a, i):
                break
            for j in range(j0, m):
                if not done_through(sb, b, j):
                    break
                if path and (i, j) == (i0, j0):
                    continue
                room = min(a.weights[i] - sa[i], b.weights[j] - sb[j])
                w = grid
                while w <= room:
                    sa[i] += w
                    sb[j] += w
                    extend(path + [(i, j, w)], sa, sb)
                    sa[i] -= w
                    sb[j] -= w
                    w += grid

    extend([], Counter(), Counter())
    results = []
    for path in out:
        na, nb = Counter(), Counter()
        strands = []
        for i, j, w in path:
            strands.append(Strand((a.origins[i], na[i]), (b.origins[j], nb[j]), w))
            na[i] += 1
            nb[j] += 1
        results.append(MinimalMatching(tuple(strands)))
    return results


# --------------------------------------------------------------------------
# gluing


@dataclass(frozen=True)
class CrownEnd:
    """An arc from boundary cusp ``cusp`` meeting the curve at ``position``."""

    cusp: Hashable
    weight: Fraction
    position: Fraction
    twist: int = 0

    def __post_init__(self):
        object.__setattr__(self, "weight", _positive(self.weight))
        object.__setattr__(self, "position", exact(self.position, "position"))


@dataclass(frozen=True)
class SurfaceArc:
    """An arc of the surface side with both endpoints on the curve."""

    id: Hashable
    start: Fraction
    end: Fraction
    weight: Fraction

    def __post_init__(self):
        object.__setattr__(self, "weight", _positive(self.weight))
        object.__setattr__(self, "start", exact(self.start, "position"))
        object.__setattr__(self, "end", exact(self.end, "position"))
        if self.start == self.end:
            raise ValueError(f"surface arc {self.id!r} has coincident endpoints")


@dataclass(frozen=True)
class GluingScene:
    """Crown arcs and surface arcs meeting a closed curve of length ``period``
    parametrized by ``[0, period)``; rows are read starting just after
    ``basepoint``."""

    crown: tuple
    surface: tuple
    basepoint: Fraction = Fraction(0)
    period: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "crown", tuple(self.crown))
        object.__setattr__(self, "surface", tuple(self.surface))
        period = _positive(self.period, "period")
        base = exact(self.basepoint, "basepoint") % period
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "basepoint", base)
        ends = [p for s in self.surface for p in (s.start % period, s.end % period)]
        if len(set(ends)) != len(ends):
            raise ValueError("surface arc endpoints must be pairwise distinct")
        if len({s.id for s in self.surface}) != len(self.surface):
            raise ValueError("surface arc ids must be unique")
        if len({c.position % period for c in self.crown}) != len(self.crown):
            raise ValueError("crown arc positions must be pairwise distinct")
        for c in self.crown:
            if c.position % period == base:
                raise BasepointCollision(f"crown arc at cusp {c.cusp!r} ends at the basepoint")
        for s in self.surface:
            if base in (s.start % period, s.end % period):
                raise BasepointCollision(f"surface arc {s.id!r} ends at the basepoint")

    def rank(self, x) -> Fraction:
        """Distance travelled from the basepoint to ``x`` along the curve."""
        return (x - self.basepoint) % self.period

    def ordered_crown(self) -> list:
        return sorted(self.crown, key=lambda c: self.rank(c.position))

    def points(self) -> list:
        """Surface endpoints ``[(rank, arc, which)]`` in order from the basepoint."""
        pts = [(self.rank(s.start), s, "start") for s in self.surface]
        pts += [(self.rank(s.end), s, "end") for s in self.surface]
        return sorted(pts, key=lambda t: t[0])

    @property
    def balanced(self) -> bool:
        return sum(c.weight for c in self.crown) == 2 * sum(s.weight for s in self.surface)


def slide_off_basepoint(scene: GluingScene, delta) -> GluingScene:
    """Resolve basepoint collisions.

    A surface endpoint at the basepoint slides forward by ``delta`` (a proper
    homotopy).  A crown arc at the basepoint is split into two copies of half
    the weight at ``basepoint - delta`` and ``basepoint + delta``, so the
    measure on either side of the basepoint is unchanged.  ``delta`` must be
    smaller than the gap to every other endpoint.
    """
    delta = _positive(delta, "delta")
    base, period = scene.basepoint, scene.period
    crown = []
    for c in scene.crown:
        if c.position % period == base:
            half = c.weight / 2
            crown.append(CrownEnd(c.cusp, half, (base - delta) % period, c.twist))
            crown.append(CrownEnd(c.cusp, half, (base + delta) % period, c.twist))
        else:
            crown.append(c)
    surface = []
    for s in scene.surface:
        start = (base + delta) % period if s.start % period == base else s.start
        end = (base + delta) % period if s.end % period == base else s.end
        surface.append(SurfaceArc(s.id, start, end, s.weight))
    return GluingScene(tuple(crown), tuple(surface), base, period)


@dataclass(frozen=True)
class CombinedArc:
    """Arc from a crown cusp through surface arc ``surface_id`` back to a cusp.

    ``start`` and ``end`` are ``(cusp, twist)`` at the surface arc's start and
    end points; ``lineage`` records which crown arcs (by index in the scene)
    the two ends come from and the stage-one strand ordinals.
    """

    surface_id: Hashable
    start: tuple
    end: tuple
    weight: Fraction
    lineage: tuple

    @property
    def signature(self) -> tuple:
        return (self.surface_id, self.start, self.end)


@dataclass(frozen=True)
class CombinedArcSystem:
    arcs: tuple
    stage_one: MinimalMatching
    stage_two: dict

    def __len__(self):
        return len(self.arcs)

    def __iter__(self):
        return iter(self.arcs)

    def signatures(self) -> list:
        return [a.signature for a in self.arcs]


def glue_crown_to_surface(scene: GluingScene) -> CombinedArcSystem:
    """Split and match crown arcs with surface arcs in two stages.

    Stage one matches the crown arcs against the surface half-arcs around the
    curve cut open at the basepoint.  Stage two matches, for each surface arc,
    the crown pieces received at its start against those received at its end,
    the latter read in reverse.
    """
    if not scene.balanced:
        raise UnbalancedRows("crown weight differs from twice the surface weight")
    crown = scene.ordered_crown()
    index = {id(c): k for k, c in enumerate(scene.crown)}
    points = scene.points()
    top = ArcRow(tuple(c.weight for c in crown), tuple(index[id(c)] for c in crown))
    bottom = ArcRow(tuple(s.weight for _, s, _ in points), tuple(range(len(points))))
    stage_one = minimal_match(top, bottom)

    received = {k: [] for k in range(len(points))}
    for n, st in enumerate(stage_one):
        received[st.bottom[0]].append((n, st))
    where = {(s.id, which): k for k, (_, s, which) in enumerate(points)}

    arcs, stage_two = [], {}
    for s in scene.surface:
        pieces_i = received[where[(s.id, "start")]]
        pieces_j = received[where[(s.id, "end")]]
        row_i = ArcRow(tuple(st.weight for _, st in pieces_i), tuple(n for n, _ in pieces_i))
        row_j = ArcRow(tuple(st.weight for _, st in pieces_j), tuple(n for n, _ in pieces_j))
        mm = minimal_match(row_i, row_j.reversed())
        stage_two[s.id] = mm
        for st in mm:
            gi = scene.crown[stage_one.strands[st.top[0]].top[0]]
            gj = scene.crown[stage_one.strands[st.bottom[0]].top[0]]
            arcs.append(CombinedArc(
                s.id, (gi.cusp, gi.twist), (gj.cusp, gj.twist), st.weight,
                ((stage_one.strands[st.top[0]].top[0], st.top[0]),
                 (stage_one.strands[st.bottom[0]].top[0], st.bottom[0]))))
    return CombinedArcSystem(tuple(arcs), stage_one, stage_two)


def restriction_totals(system: CombinedArcSystem):
    """Weights summed per crown arc index (both ends) and per surface arc id."""
    crown, surface = Counter(), Counter()
    for a in system:
        crown[a.lineage[0][0]] += a.weight
        crown[a.lineage[1][0]] += a.weight
        surface[a.surface_id] += a.weight
    return crown, surface
