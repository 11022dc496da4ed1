"""Marked ideal polygons in the disk model, their cross-ratio coordinates, and
diagonal combinatorics (crossing test, completion, dual trees).

Vertices are indexed ``0 .. n-1`` with ``n = d + 2`` and sit counterclockwise
on the unit circle.  A diagonal is an index pair ``(i, j)`` with ``i < j`` that
is not a side of the polygon.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .config import get_tolerances
from .errors import (
    CoordOutOfRange,
    CrossingDiagonals,
    InvalidPolygon,
    NotATriangulation,
)
from .moebius import INF, MoebiusMap, SpherePoint, map_from_triples, chi, sphere

ANCHORS = (SpherePoint(-1, 1), SpherePoint(1, 1), SpherePoint(1j, 1))
_CHI_FRAME = (INF, SpherePoint(-1, 1), SpherePoint(0, 1))
TWO_PI = 2.0 * math.pi


def _ccw_offset(z: complex, base: float) -> float:
    return (math.atan2(z.imag, z.real) - base) % TWO_PI


@dataclass(frozen=True)
class IdealPolygon:
    vertices: tuple

    def __post_init__(self):
        verts = tuple(sphere(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        n = len(verts)
        if n < 4:
            raise InvalidPolygon(f"an ideal polygon here needs at least 4 vertices, got {n}")
        tol = get_tolerances()
        for k, v in enumerate(verts):
            if v.is_inf or abs(abs(v.value()) - 1.0) > tol.circle:
                raise InvalidPolygon(f"vertex {k} is not on the unit circle: {v!r}")
        zs = [v.value() for v in verts]
        base = math.atan2(zs[0].imag, zs[0].real)
        prev = 0.0
        for k in range(1, n):
            off = _ccw_offset(zs[k], base)
            if off <= prev or verts[k].isclose(verts[k - 1], tol.proj):
                raise InvalidPolygon(f"vertices are not in strict counterclockwise order at index {k}")
            prev = off
        if verts[-1].isclose(verts[0], tol.proj):
            raise InvalidPolygon("last vertex coincides with the first")

    @classmethod
    def from_angles(cls, angles: Iterable[float]) -> "IdealPolygon":
        return cls(tuple(SpherePoint(complex(math.cos(t), math.sin(t)), 1) for t in angles))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def d(self) -> int:
        return len(self.vertices) - 2

    def values(self) -> list:
        return [v.value() for v in self.vertices]

    def isclose(self, other: "IdealPolygon", eps: float = 1e-9) -> bool:
        return self.n == other.n and all(
            abs(a - b) < eps for a, b in zip(self.values(), other.values()))


@dataclass(frozen=True)
class CrossRatioCoords:
    """The ``d - 1`` cross-ratios ``chi(a_j, a_j+1, a_j+2, a_j+3)``."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(x) for x in self.values))
        if len(self.values) < 1:
            raise CoordOutOfRange("need at least one coordinate (d >= 2)")

    @property
    def d(self) -> int:
        return len(self.values) + 1

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, k):
        return self.values[k]


def _snap(p: SpherePoint) -> SpherePoint:
    z = p.value()
    return SpherePoint(z / abs(z), 1)


def normalize_polygon(poly: IdealPolygon):
    """Move ``a0, a1, a2`` to ``-1, 1, i``; returns ``(polygon, map)``."""
    m = map_from_triples(*poly.vertices[:3], *ANCHORS)
    verts = list(ANCHORS) + [_snap(m(v)) for v in poly.vertices[3:]]
    return IdealPolygon(tuple(verts)), m


def polygon_to_coords(poly: IdealPolygon) -> CrossRatioCoords:
    vs = poly.vertices
    vals = []
    for j in range(poly.d - 1):
        x = chi(vs[j], vs[j + 1], vs[j + 2], vs[j + 3])
        vals.append(x.real)
    return CrossRatioCoords(tuple(vals))


def fourth_point(known: Mapping[int, SpherePoint], value: float) -> SpherePoint:
    """Solve ``chi(x0, x1, x2, x3) = value`` for the one missing slot.

    ``known`` maps three of the slot indices 0..3 to points.
    """
    model = dict(enumerate(_CHI_FRAME + (sphere(value),)))
    slots = sorted(known)
    if len(slots) != 3:
        raise ValueError("exactly three known points are required")
    (missing,) = set(range(4)) - set(slots)
    m = map_from_triples(*(known[s] for s in slots), *(model[s] for s in slots))
    return m.inverse()(model[missing])


def coords_to_polygon(coords) -> IdealPolygon:
    """Rebuild the normalized polygon from its cross-ratio coordinates."""
    if not isinstance(coords, CrossRatioCoords):
        coords = CrossRatioCoords(tuple(coords))
    verts = list(ANCHORS)
    base = math.pi
    prev = _ccw_offset(verts[2].value(), base)
    for j, x in enumerate(coords):
        if not (math.isfinite(x) and x > 0):
            raise CoordOutOfRange(f"coordinate {j} = {x!r} is not a positive real")
        v = fourth_point({0: verts[j], 1: verts[j + 1], 2: verts[j + 2]}, x)
        if v.is_inf:
            raise CoordOutOfRange(f"coordinate {j} sends a vertex to infinity")
        v = _snap(v)
        off = _ccw_offset(v.value(), base)
        # the new vertex must land strictly between its predecessor and a0
        if not (prev < off < TWO_PI) or v.isclose(verts[0]) or v.isclose(verts[-1]):
            raise CoordOutOfRange(
                f"coordinate {j} = {x!r} places vertex {j + 3} outside its admissible arc")
        verts.append(v)
        prev = off
    return IdealPolygon(tuple(verts))


# --------------------------------------------------------------------------
# diagonals


def crosses(e, f) -> bool:
    """True when chords ``e`` and ``f`` strictly interleave on the circle."""
    i, j = sorted(e)
    k, l = sorted(f)
    return i < k < j < l or k < i < l < j


def _canonical_diagonal(pair, n):
    i, j = sorted(int(x) for x in pair)
    if not (0 <= i < j < n):
        raise ValueError(f"diagonal {pair!r} out of range for an {n}-gon")
    if j - i == 1 or (i == 0 and j == n - 1):
        raise ValueError(f"{pair!r} is a side of the {n}-gon, not a diagonal")
    return (i, j)


@dataclass(frozen=True)
class DiagonalSet:
    n: int
    diagonals: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        n = int(self.n)
        if n < 4:
            raise ValueError("polygons here have at least 4 vertices")
        diags = frozenset(_canonical_diagonal(p, n) for p in self.diagonals)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "diagonals", diags)
        for e, f in combinations(sorted(diags), 2):
            if crosses(e, f):
                raise CrossingDiagonals(f"diagonals {e} and {f} cross")

    @property
    def d(self) -> int:
        return self.n - 2

    def sorted(self) -> list:
        return sorted(self.diagonals)

    def is_triangulation(self) -> bool:
        return len(self.diagonals) == self.n - 3

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self):
        return len(self.diagonals)

    def __contains__(self, pair):
        return tuple(sorted(pair)) in self.diagonals


@dataclass(frozen=True)
class WeightedDiagonals:
    """Finite non-negative weights on a set of diagonals.

    Sides of the polygon carry infinite weight implicitly and never appear here.
    """

    diagonals: DiagonalSet
    weights: Mapping

    def __post_init__(self):
        w = {}
        for pair, x in dict(self.weights).items():
            key = tuple(sorted(pair))
            if key not in self.diagonals:
                raise ValueError(f"weight given for {pair!r}, which is not in the diagonal set")
            x = float(x)
            if not math.isfinite(x) or x < 0:
                raise ValueError(f"weight of {pair!r} must be finite and >= 0, got {x!r}")
            w[key] = x
        for pair in self.diagonals:
            w.setdefault(pair, 0.0)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_pairs(cls, n: int, items) -> "WeightedDiagonals":
        items = list(items.items() if isinstance(items, Mapping) else items)
        ds = DiagonalSet(n, frozenset(p for p, _ in items))
        return cls(ds, {tuple(sorted(p)): w for p, w in items})

    @property
    def n(self) -> int:
        return self.diagonals.n

    def weight(self, pair) -> float:
        return self.weights.get(tuple(sorted(pair)), 0.0)


def complete_to_triangulation(ds: DiagonalSet) -> DiagonalSet:
    """Greedy completion: scan candidate diagonals lexicographically and keep
    every one that crosses nothing already chosen."""
    chosen = set(ds.diagonals)
    n = ds.n
    for i in range(n):
        for j in range(i + 2, n):
            if (i, j) in chosen or (i == 0 and j == n - 1):
                continue
            if not any(crosses((i, j), e) for e in chosen):
                chosen.add((i, j))
    return DiagonalSet(n, frozenset(chosen))


def fan_triangulation(n: int, apex: int = 0) -> DiagonalSet:
    others = [(apex + k) % n for k in range(2, n - 1)]
    return DiagonalSet(n, frozenset(tuple(sorted((apex, v))) for v in others))


@dataclass(frozen=True)
class DualTree:
    """Triangles of a triangulation and the diagonals they share.

    ``edges`` holds ``(t, u, diagonal)`` with triangle indices ``t < u``.
    """

    n: int
    triangles: tuple
    edges: tuple

    def neighbors(self, t: int):
        for a, b, diag in self.edges:
            if a == t:
                yield b, diag
            elif b == t:
                yield a, diag

    def triangle_with(self, *vertices) -> int:
        for k, tri in enumerate(self.triangles):
            if all(v in tri for v in vertices):
                return k
        raise KeyError(vertices)

    def sides_of(self, diag):
        """The two triangles adjacent to ``diag``."""
        for a, b, e in self.edges:
            if e == diag:
                return a, b
        raise KeyError(diag)

    def is_tree(self) -> bool:
        if len(self.edges) != len(self.triangles) - 1:
            return False
        seen, stack = {0}, [0]
        while stack:
            t = stack.pop()
            for u, _ in self.neighbors(t):
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == len(self.triangles)


def dual_tree(tri) -> DualTree:
    """Dual tree of a full triangulation: nodes are triangles, edges are the
    diagonals between them."""
    if not isinstance(tri, DiagonalSet):
        n, pairs = tri
        try:
            tri = DiagonalSet(n, frozenset(pairs))
        except CrossingDiagonals as exc:
            raise NotATriangulation(str(exc)) from exc
    n = tri.n
    if not tri.is_triangulation():
        raise NotATriangulation(f"{len(tri)} diagonals given, a triangulation of an "
                                f"{n}-gon has {n - 3}")
    edges = set(tri.diagonals) | {(k, k + 1) for k in range(n - 1)} | {(0, n - 1)}
    triangles = tuple(t for t in combinations(range(n), 3)
                      if (t[0], t[1]) in edges and (t[1], t[2]) in edges and (t[0], t[2]) in edges)
    index = {}
    for k, t in enumerate(triangles):
        for e in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2])):
            index.setdefault(e, []).append(k)
    tree_edges = tuple(sorted((index[e][0], index[e][1], e) for e in tri.diagonals))
    return DualTree(n, triangles, tree_edges)
