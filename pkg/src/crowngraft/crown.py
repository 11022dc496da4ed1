"""Measured laminations on a hyperbolic crown with ``m`` boundary cusps.

Cusps are labelled ``1..m`` in cyclic order; side ``s`` is the geodesic side
between cusps ``s`` and ``s + 1`` (side ``m`` closes the chain back to cusp 1).
A cusp-to-cusp arc ``(i, j)`` cuts off the disk bounded by sides
``i, i+1, ..., j-1``; the crown boundary stays on the other side.

Weights may be ints, floats or :class:`fractions.Fraction`; arithmetic is
carried out in whatever type is given, so Fraction inputs round-trip exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import accumulate
from numbers import Real

from .errors import NonPositiveBoundaryMeasure, NotRealizable, ShapeMismatch


def _positive(x, what):
    if not isinstance(x, Real) or not x > 0 or (isinstance(x, float) and not math.isfinite(x)):
        raise ValueError(f"{what} must be a positive real, got {x!r}")
    return x


@dataclass(frozen=True)
class CuspToBoundary:
    cusp: int
    weight: Real
    twist: int = 0
    offset: Real = 0

    def __post_init__(self):
        _positive(self.weight, "arc weight")
        if isinstance(self.twist, bool) or int(self.twist) != self.twist:
            raise ValueError(f"twist must be an integer, got {self.twist!r}")
        if self.offset < 0:
            raise ValueError("boundary offset must be >= 0")


@dataclass(frozen=True)
class CuspToCusp:
    i: int
    j: int
    weight: Real

    def __post_init__(self):
        _positive(self.weight, "arc weight")


def side_set(i: int, j: int, m: int) -> frozenset:
    """Sides enclosed by the arc from cusp ``i`` ascending to cusp ``j``."""
    span = (j - i) % m
    return frozenset((i - 1 + k) % m + 1 for k in range(span))


def _adjacent(i, j, m):
    return (j - i) % m in (0, 1, m - 1)


@dataclass(frozen=True)
class CrownLamination:
    """Finitely many weighted arcs on a crown, plus possibly the crown boundary
    itself as a leaf of weight ``boundary_leaf_weight``.

    Boundary arcs form one band along the crown boundary: in cusp order, each
    starts where the previous one ends, all with the same integer twist.
    """

    m: int
    arcs: tuple = ()
    boundary_leaf_weight: Real = 0

    def __post_init__(self):
        m = int(self.m)
        if m < 1:
            raise ValueError("a crown has at least one boundary cusp")
        arcs = tuple(self.arcs)
        for a in arcs:
            if not isinstance(a, (CuspToBoundary, CuspToCusp)):
                raise TypeError(f"not a crown arc: {a!r}")
        # canonical order: chords by (i, j), then boundary arcs by cusp
        arcs = tuple(sorted(arcs, key=lambda a: (1, a.cusp, 0) if isinstance(a, CuspToBoundary)
                            else (0, a.i, a.j)))
        object.__setattr__(self, "arcs", arcs)
        if self.boundary_leaf_weight < 0:
            raise ValueError("boundary leaf weight must be >= 0")
        seen_cusps, seen_pairs = set(), set()
        for a in arcs:
            if isinstance(a, CuspToBoundary):
                if not 1 <= a.cusp <= m:
                    raise ValueError(f"cusp {a.cusp} out of range 1..{m}")
                if a.cusp in seen_cusps:
                    raise ValueError(f"more than one boundary arc at cusp {a.cusp}")
                seen_cusps.add(a.cusp)
            elif isinstance(a, CuspToCusp):
                if not (1 <= a.i <= m and 1 <= a.j <= m):
                    raise ValueError(f"arc ({a.i}, {a.j}) out of range 1..{m}")
                if _adjacent(a.i, a.j, m):
                    raise ValueError(f"cusps {a.i} and {a.j} are adjacent")
                if (a.i, a.j) in seen_pairs:
                    raise ValueError(f"parallel copies of arc ({a.i}, {a.j}); merge their weights")
                seen_pairs.add((a.i, a.j))
            else:
                raise TypeError(f"not a crown arc: {a!r}")
        if self.boundary_leaf_weight > 0 and seen_cusps:
            raise NotRealizable("the crown boundary cannot be a leaf while arcs cross it")
        band = self.boundary_arcs
        if band:
            if len({a.twist for a in band}) != 1:
                raise NotRealizable("boundary arcs carry different integer twists")
            l = sum(a.weight for a in band)
            if not 0 <= band[0].offset < l:
                raise NotRealizable("first boundary offset must lie in [0, l)")
            for prev, nxt in zip(band, band[1:]):
                if nxt.offset != prev.offset + prev.weight:
                    raise NotRealizable(f"boundary arc at cusp {nxt.cusp} does not start where "
                                        f"the arc at cusp {prev.cusp} ends")
        _layout(m, tuple(sorted(seen_cusps)), self.chords)

    @property
    def boundary_arcs(self) -> tuple:
        return tuple(sorted((a for a in self.arcs if isinstance(a, CuspToBoundary)),
                            key=lambda a: a.cusp))

    @property
    def chords(self) -> tuple:
        return tuple(sorted((a for a in self.arcs if isinstance(a, CuspToCusp)),
                            key=lambda a: (a.i, a.j)))

    def shape(self) -> "CrownShape":
        return CrownShape(self.m, tuple(a.cusp for a in self.boundary_arcs),
                          tuple((a.i, a.j) for a in self.chords))


def boundary_measure(lam: CrownLamination):
    """Transverse measure ``l`` of the crown boundary, negative for a leaf."""
    band = lam.boundary_arcs
    if band:
        return sum(a.weight for a in band)
    return -lam.boundary_leaf_weight


# --------------------------------------------------------------------------
# combinatorial layout: regions of the complement


def _layout(m, boundary_cusps, chords):
    """Place every chord in a complementary region of the boundary arcs.

    Returns ``(owner, parent, sides)``: ``owner[k]`` is the sector start cusp (or
    ``None`` without boundary arcs) containing chord ``k``, and ``parent[k]`` is
    the index of the smallest chord strictly enclosing it, or ``None``.
    """
    if isinstance(chords, tuple) and chords and isinstance(chords[0], CuspToCusp):
        pairs = [(c.i, c.j) for c in chords]
    else:
        pairs = list(chords)
    sides = [side_set(i, j, m) for i, j in pairs]
    owner = []
    for (i, j), s in zip(pairs, sides):
        hit = [b for b in boundary_cusps if (b - 2) % m + 1 in s and b in s]
        if hit:
            raise NotRealizable(f"arc ({i}, {j}) crosses the boundary arc at cusp {hit[0]}")
        if boundary_cusps:
            # sector starting at the last boundary cusp at or before i
            start = max((b for b in boundary_cusps if b <= i), default=boundary_cusps[-1])
            owner.append(start)
        else:
            owner.append(None)
    for a in range(len(sides)):
        for b in range(a + 1, len(sides)):
            sa, sb = sides[a], sides[b]
            if sa & sb and not (sa <= sb or sb <= sa):
                raise NotRealizable(f"arcs {pairs[a]} and {pairs[b]} cross")
    parent = []
    for a, sa in enumerate(sides):
        enclosing = [b for b, sb in enumerate(sides) if b != a and sa < sb]
        parent.append(min(enclosing, key=lambda b: len(sides[b])) if enclosing else None)
    return owner, parent, sides


@dataclass(frozen=True)
class CrownShape:
    """Topological type of an arc system: which cusps reach the boundary and
    which cusp-to-cusp arcs are present."""

    m: int
    boundary_cusps: tuple = ()
    chords: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "boundary_cusps", tuple(sorted(set(self.boundary_cusps))))
        object.__setattr__(self, "chords", tuple(sorted(tuple(c) for c in self.chords)))
        if len(set(self.chords)) != len(self.chords):
            raise ShapeMismatch("repeated chord in shape")
        for i, j in self.chords:
            if _adjacent(i, j, self.m):
                raise ShapeMismatch(f"cusps {i} and {j} are adjacent")
        _layout(self.m, self.boundary_cusps, self.chords)

    @property
    def free_edge_count(self) -> int:
        """Edge lengths not already fixed by the boundary measure."""
        return len(self.chords) + max(len(self.boundary_cusps) - 1, 0)

    @property
    def finite_edge_count(self) -> int:
        return len(self.chords) + len(self.boundary_cusps)


# --------------------------------------------------------------------------
# twist chart


@dataclass(frozen=True)
class TwistChart:
    """Boundary measure ``l`` (any sign) and twist ``tau``.

    For ``l <= 0`` the twist is irrelevant; :meth:`canonical` sets it to 0.
    """

    l: Real
    tau: Real = 0

    def canonical(self) -> "TwistChart":
        if self.l <= 0:
            return TwistChart(self.l, 0)
        return self

    def equivalent(self, other: "TwistChart") -> bool:
        return self.canonical() == other.canonical()


def chart_split(chart: TwistChart):
    """``tau = t l + s`` with integer ``t`` and ``0 <= s < l``."""
    l, tau = chart.l, chart.tau
    if not l > 0:
        raise NonPositiveBoundaryMeasure(f"twist split needs l > 0, got {l!r}")
    t = math.floor(tau / l)
    s = tau - t * l
    if not 0 <= s < l:
        # float rounding right at a wedge boundary
        t = round(tau / l)
        s = max(tau - t * l, 0 * s)
    return t, s


def chart_join(t: int, s, l) -> TwistChart:
    if not l > 0:
        raise NonPositiveBoundaryMeasure(f"twist join needs l > 0, got {l!r}")
    if not 0 <= s < l:
        raise ValueError(f"offset {s!r} outside [0, {l!r})")
    return TwistChart(l, t * l + s)


def wedge_index(chart: TwistChart) -> int:
    """Index ``j`` of the wedge ``j l <= tau <= (j + 1) l``; shared boundary
    points go to the wedge they start."""
    return chart_split(chart)[0]


def in_wedge(chart: TwistChart, j: int) -> bool:
    return j * chart.l <= chart.tau <= (j + 1) * chart.l


# --------------------------------------------------------------------------
# per-cell chart


def coords_to_lamination(shape: CrownShape, weights, chart: TwistChart) -> CrownLamination:
    """Build the lamination of a fixed shape from its free edge lengths and chart.

    ``weights`` lists chord weights in sorted chord order, then boundary-arc
    weights for all but the last boundary cusp; the last one is ``l`` minus the
    others.  Without boundary arcs ``l`` must be ``<= 0`` and becomes a leaf of
    weight ``-l``.
    """
    weights = list(weights)
    if len(weights) != shape.free_edge_count:
        raise ShapeMismatch(f"shape has {shape.free_edge_count} free edges, "
                            f"{len(weights)} weights given")
    for w in weights:
        if not w > 0:
            raise ShapeMismatch(f"edge weights must be positive, got {w!r}")
    nc = len(shape.chords)
    arcs = [CuspToCusp(i, j, w) for (i, j), w in zip(shape.chords, weights[:nc])]
    l = chart.l
    if shape.boundary_cusps:
        if not l > 0:
            raise ShapeMismatch(f"shape has boundary arcs but l = {l!r} is not positive")
        bw = weights[nc:]
        last = l - sum(bw)
        if not last > 0:
            raise ShapeMismatch("boundary weights exceed the boundary measure")
        bw.append(last)
        t, s = chart_split(chart)
        offsets = [s + c for c in accumulate([0] + bw[:-1])]
        arcs += [CuspToBoundary(c, w, t, o)
                 for c, w, o in zip(shape.boundary_cusps, bw, offsets)]
        return CrownLamination(shape.m, tuple(arcs))
    if l > 0:
        raise ShapeMismatch(f"l = {l!r} > 0 needs at least one boundary arc in the shape")
    return CrownLamination(shape.m, tuple(arcs), boundary_leaf_weight=-l)


def lamination_to_coords(lam: CrownLamination):
    """Inverse of :func:`coords_to_lamination`: ``(shape, weights, chart)``."""
    shape = lam.shape()
    weights = [a.weight for a in lam.chords]
    band = lam.boundary_arcs
    l = boundary_measure(lam)
    if band:
        weights += [a.weight for a in band[:-1]]
        chart = TwistChart(l, band[0].twist * l + band[0].offset)
    else:
        chart = TwistChart(l, 0)
    return shape, weights, chart


# --------------------------------------------------------------------------
# dual metric graph


@dataclass(frozen=True)
class DualMetricGraph:
    """Graph dual to the arc system.

    ``vertices`` are region labels: ``("chord", i, j)`` for the disk cut off by
    a chord, ``("sector", b)`` for the region between the boundary arc at cusp
    ``b`` and the next one, ``("core",)`` for the annular region when no arc
    reaches the boundary, ``("hole",)`` for the far end of the boundary-leaf
    edge.  ``edges`` are ``(u, v, length, dual_to)`` with vertex indices;
    ``infinite_edges`` are ``(vertex, side)``.  ``cycle`` lists the edge
    indices of the boundary cycle in cusp order, and ``basepoint`` the offset
    of the band along it.
    """

    m: int
    vertices: tuple
    edges: tuple
    infinite_edges: tuple
    cycle: tuple = ()
    basepoint: Real = 0

    def degree(self, v: int) -> int:
        deg = sum(1 for x, _ in self.infinite_edges if x == v)
        for a, b, _, _ in self.edges:
            deg += (a == v) + (b == v)
        return deg

    @property
    def cycle_length(self):
        return sum(self.edges[k][2] for k in self.cycle)

    def shape(self) -> CrownShape:
        cusps = [lab[1] for _, _, _, lab in self.edges if lab[0] == "boundary"]
        chords = [(lab[1], lab[2]) for _, _, _, lab in self.edges if lab[0] == "chord"]
        return CrownShape(self.m, tuple(cusps), tuple(chords))

    def edge_lengths(self) -> dict:
        return {lab: length for _, _, length, lab in self.edges}

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "vertices": [list(v) for v in self.vertices],
            "edges": [{"u": a, "v": b, "length": _num(w), "dual_to": list(lab)}
                      for a, b, w, lab in self.edges],
            "infinite_edges": [{"vertex": v, "side": s} for v, s in self.infinite_edges],
            "cycle": list(self.cycle),
            "basepoint": _num(self.basepoint),
        }


def _num(x):
    """JSON-safe number: ints and floats as-is, other rationals as ``"p/q"``."""
    if isinstance(x, (int, float)):
        return x
    if getattr(x, "denominator", None) == 1:
        return int(x)
    if hasattr(x, "denominator"):
        return f"{x.numerator}/{x.denominator}"
    return float(x)


def to_dual_graph(lam: CrownLamination) -> DualMetricGraph:
    m = lam.m
    band = lam.boundary_arcs
    cusps = tuple(a.cusp for a in band)
    chords = lam.chords
    owner, parent, sides = _layout(m, cusps, chords)

    vertices = []
    if cusps:
        outer = {}
        for b in cusps:
            outer[b] = len(vertices)
            vertices.append(("sector", b))
    else:
        core = len(vertices)
        vertices.append(("core",))
    chord_vertex = []
    for c in chords:
        chord_vertex.append(len(vertices))
        vertices.append(("chord", c.i, c.j))

    def region_of(k):
        """Region just outside chord ``k``."""
        if parent[k] is not None:
            return chord_vertex[parent[k]]
        return outer[owner[k]] if cusps else core

    edges = []
    for k, c in enumerate(chords):
        edges.append((region_of(k), chord_vertex[k], c.weight, ("chord", c.i, c.j)))
    cycle = []
    for r, a in enumerate(band):
        prev = cusps[r - 1]
        cycle.append(len(edges))
        edges.append((outer[prev], outer[a.cusp], a.weight, ("boundary", a.cusp)))
    if lam.boundary_leaf_weight > 0:
        hole = len(vertices)
        vertices.append(("hole",))
        edges.append((core, hole, lam.boundary_leaf_weight, ("leaf",)))

    infinite = []
    for s in range(1, m + 1):
        inside = [k for k, ss in enumerate(sides) if s in ss]
        if inside:
            k = min(inside, key=lambda k: len(sides[k]))
            infinite.append((chord_vertex[k], s))
        elif cusps:
            start = max((b for b in cusps if b <= s), default=cusps[-1])
            infinite.append((outer[start], s))
        else:
            infinite.append((core, s))
    return DualMetricGraph(m, tuple(vertices), tuple(edges), tuple(infinite),
                           tuple(cycle), band[0].offset if band else 0)
