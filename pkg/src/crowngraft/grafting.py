"""Grafting ideal polygons along weighted diagonals, and its inverse.

The forward map bends the polygon along each diagonal by an elliptic element
and accumulates the bends over the dual tree of a triangulation, starting at
the triangle that contains the side ``(a0, a1)``.  The inverse reads each
bending angle off the argument of a quadrilateral cross-ratio.
"""
from __future__ import annotations

import cmath
import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .config import get_tolerances
from .errors import (
    ConfigurationInvalid,
    DegenerateQuadrilateral,
    DegenerateTriple,
    NotATriangulation,
)
from .moebius import (
    IDENTITY, INF, ONE, ZERO, MoebiusMap, SpherePoint, chi, elliptic, map_from_triples, sphere,
)
from .polygon import (
    ANCHORS,
    DiagonalSet,
    DualTree,
    IdealPolygon,
    WeightedDiagonals,
    complete_to_triangulation,
    dual_tree,
    fourth_point,
    normalize_polygon,
)

TWO_PI = 2.0 * math.pi
# recovered angles this close below 2*pi are the positive-real branch, i.e. 0
_BRANCH_SNAP = 1e-11


@dataclass(frozen=True)
class TipConfiguration:
    """Cyclically ordered tuple of ``d + 2`` points of the sphere.

    Cyclically adjacent tips must differ and at least three must be distinct.
    """

    tips: tuple

    def __post_init__(self):
        tips = tuple(sphere(c) for c in self.tips)
        object.__setattr__(self, "tips", tips)
        n = len(tips)
        if n < 4:
            raise ConfigurationInvalid(f"need at least 4 tips (d >= 2), got {n}")
        eps = get_tolerances().proj
        for k in range(n):
            if tips[k].isclose(tips[(k + 1) % n], eps):
                raise ConfigurationInvalid(f"adjacent tips {k} and {(k + 1) % n} coincide")
        if _first_distinct_triple(tips, eps) is None:
            raise ConfigurationInvalid("fewer than three distinct tips")

    @property
    def d(self) -> int:
        return len(self.tips) - 2

    def __len__(self):
        return len(self.tips)

    def __iter__(self):
        return iter(self.tips)

    def __getitem__(self, k):
        return self.tips[k]

    def values(self) -> list:
        return [c.value() for c in self.tips]

    def transform(self, m: MoebiusMap) -> "TipConfiguration":
        return TipConfiguration(tuple(m(c) for c in self.tips))


def _first_distinct_triple(tips, eps):
    chosen = [0]
    for k in range(1, len(tips)):
        if all(not tips[k].isclose(tips[c], eps) for c in chosen):
            chosen.append(k)
            if len(chosen) == 3:
                return tuple(chosen)
    return None


def normalize_tips(conf: TipConfiguration):
    """Send the first three pairwise-distinct tips to ``0, inf, 1``."""
    idx = _first_distinct_triple(conf.tips, get_tolerances().proj)
    m = map_from_triples(*(conf.tips[k] for k in idx), ZERO, INF, ONE)
    return conf.transform(m), m


def tip_deviation(c1: TipConfiguration, c2: TipConfiguration, normalize: bool = True) -> float:
    """Largest projective discrepancy ``|z1 w2 - z2 w1|`` between matching tips."""
    if len(c1) != len(c2):
        raise ValueError("configurations have different sizes")
    if normalize:
        c1, _ = normalize_tips(c1)
        c2, _ = normalize_tips(c2)
    return max(abs(p.z1 * q.z2 - p.z2 * q.z1) for p, q in zip(c1.tips, c2.tips))


@dataclass(frozen=True)
class GraftResult:
    tips: TipConfiguration
    triangle_maps: Mapping           # triangle (i, j, k) -> cumulative MoebiusMap
    triangulation: WeightedDiagonals  # input weights plus zero-weight completion
    root: tuple


def _bend(poly_vertices, diag, child_triangle, weight):
    """Elliptic for crossing ``diag`` into ``child_triangle``, oriented so the
    child lies to the right of the axis."""
    i, j = diag
    (k,) = set(child_triangle) - {i, j}
    ai, aj = poly_vertices[i], poly_vertices[j]
    # with counterclockwise vertices, the arc i < k < j lies right of i -> j
    if i < k < j:
        return elliptic(ai, aj, weight)
    return elliptic(aj, ai, weight)


def _traverse(tree: DualTree, root: int, order: str):
    """Yield ``(parent, child, diagonal)`` in BFS or DFS order from ``root``."""
    seen = {root}
    frontier = deque([root])
    while frontier:
        t = frontier.popleft() if order == "bfs" else frontier.pop()
        for u, diag in sorted(tree.neighbors(t)):
            if u not in seen:
                seen.add(u)
                frontier.append(u)
                yield t, u, diag


def graft_forward(poly: IdealPolygon, lam: WeightedDiagonals, root=None,
                  order: str = "bfs") -> GraftResult:
    """Graft ``poly`` along the weighted diagonals ``lam``.

    ``root`` optionally names a triangle ``(i, j, k)`` of the completed
    triangulation to hold fixed; by default it is the one containing side
    ``(0, 1)``.  The tips only change by a global Moebius map when the root
    moves.
    """
    if lam.n != poly.n:
        raise ValueError(f"diagonals are for an {lam.n}-gon, polygon has {poly.n} vertices")
    if order not in ("bfs", "dfs"):
        raise ValueError("order must be 'bfs' or 'dfs'")
    full = complete_to_triangulation(lam.diagonals)
    tree = dual_tree(full)
    r = tree.triangle_with(0, 1) if root is None else tree.triangles.index(tuple(sorted(root)))
    verts = poly.vertices
    maps = {r: IDENTITY}
    for parent, child, diag in _traverse(tree, r, order):
        w = lam.weight(diag)
        bend = _bend(verts, diag, tree.triangles[child], w) if w else IDENTITY
        maps[child] = maps[parent] if bend is IDENTITY else maps[parent] @ bend
    tips = [None] * poly.n
    for t, m in sorted(maps.items()):
        for v in tree.triangles[t]:
            if tips[v] is None:
                tips[v] = verts[v] if m is IDENTITY else m(verts[v])
    weights = {e: lam.weight(e) for e in full}
    return GraftResult(
        tips=TipConfiguration(tuple(tips)),
        triangle_maps={tree.triangles[t]: m for t, m in maps.items()},
        triangulation=WeightedDiagonals(full, weights),
        root=tree.triangles[r],
    )


def _quadrilateral(tree: DualTree, diag):
    """Vertices ``(i, j, k, m)`` of the quadrilateral around ``diag = (i, k)``
    in induced cyclic order: ``j`` inside the arc ``i..k``, ``m`` outside."""
    i, k = diag
    a, b = tree.sides_of(diag)
    thirds = [(set(tree.triangles[t]) - {i, k}).pop() for t in (a, b)]
    j = next(v for v in thirds if i < v < k)
    m = next(v for v in thirds if not i < v < k)
    return i, j, k, m


def quadrilateral_cross_ratio(conf: TipConfiguration, quad) -> complex:
    i, j, k, m = quad
    try:
        lam = chi(conf[i], conf[j], conf[k], conf[m])
    except DegenerateTriple as exc:
        raise DegenerateQuadrilateral(f"quadrilateral {quad}: {exc}") from exc
    if lam == math.inf or abs(lam) < get_tolerances().proj or not cmath.isfinite(lam):
        raise DegenerateQuadrilateral(f"cross-ratio of quadrilateral {quad} is {lam!r}")
    return complex(lam)


def bending_angle(lam: complex) -> float:
    """The angle ``w`` in ``[0, 2 pi)`` with ``lam = |lam| exp(-i w)``.

    Angles within ``1e-11`` of the branch cut on either side become exactly 0.
    """
    w = (-cmath.phase(lam)) % TWO_PI
    if w < _BRANCH_SNAP or TWO_PI - w < _BRANCH_SNAP:
        w = 0.0
    return w


def graft_invert(conf: TipConfiguration, tri: DiagonalSet):
    """Recover ``(polygon, weights)`` with ``graft_forward`` landing on ``conf``.

    ``tri`` must triangulate the ``(d + 2)``-gon.  The polygon comes back
    normalized; weights lie in ``[0, 2 pi)`` and include every diagonal of
    ``tri``.
    """
    if not isinstance(conf, TipConfiguration):
        conf = TipConfiguration(tuple(conf))
    if tri.n != len(conf):
        raise ValueError(f"triangulation is for an {tri.n}-gon, got {len(conf)} tips")
    if not tri.is_triangulation():
        raise NotATriangulation(f"{len(tri)} diagonals do not triangulate an {tri.n}-gon")
    tree = dual_tree(tri)
    quads, moduli, weights = {}, {}, {}
    for diag in tri:
        quad = _quadrilateral(tree, diag)
        lam = quadrilateral_cross_ratio(conf, quad)
        quads[diag] = quad
        moduli[diag] = abs(lam)
        weights[diag] = bending_angle(lam)

    root = tree.triangle_with(0, 1)
    pos = dict(zip(tree.triangles[root], ANCHORS))
    for _, child, diag in _traverse(tree, root, "bfs"):
        quad = quads[diag]
        known = {slot: pos[v] for slot, v in enumerate(quad) if v in pos}
        (missing,) = (v for v in quad if v not in pos)
        pos[missing] = fourth_point(known, moduli[diag])
    verts = tuple(SpherePoint(pos[v].value() / abs(pos[v].value()), 1) for v in range(tri.n))
    poly, _ = normalize_polygon(IdealPolygon(verts))
    return poly, WeightedDiagonals(tri, weights)


@dataclass(frozen=True)
class FiberElement:
    diagonals: DiagonalSet
    base_weights: Mapping     # diagonal -> [0, 2 pi)
    turns: tuple              # n_i >= 0, aligned with sorted diagonals
    polygon: IdealPolygon

    @property
    def weights(self) -> dict:
        return {e: self.base_weights[e] + TWO_PI * n
                for e, n in zip(self.diagonals.sorted(), self.turns)}

    def weighted(self) -> WeightedDiagonals:
        return WeightedDiagonals(self.diagonals, self.weights)


def fiber_enumerate(conf: TipConfiguration, tri: DiagonalSet, nmax: int) -> list:
    """All fiber elements over ``conf`` for ``tri`` with ``0 <= n_i <= nmax``,
    in lexicographic order of ``(n_1, ..., n_{d-1})``."""
    if nmax < 0:
        raise ValueError("nmax must be >= 0")
    poly, base = graft_invert(conf, tri)
    diags = tri.sorted()
    return [FiberElement(tri, dict(base.weights), turns, poly)
            for turns in itertools.product(range(nmax + 1), repeat=len(diags))]


def fiber_check(element: FiberElement, conf: TipConfiguration) -> float:
    """Deviation between ``conf`` and the re-grafted fiber element."""
    return tip_deviation(graft_forward(element.polygon, element.weighted()).tips, conf)
