"""Random instance generators shared by the test modules."""
import functools
import itertools
import math
from fractions import Fraction

from crowngraft.polygon import DiagonalSet, IdealPolygon, WeightedDiagonals, crosses

TWO_PI = 2 * math.pi


def random_polygon(rng, n, spread=0.5):
    """Vertices with angular gaps in ``[1 - spread, 1 + spread]`` times the
    mean gap, randomly rotated."""
    gaps = [rng.uniform(1 - spread, 1 + spread) for _ in range(n)]
    total = sum(gaps)
    start = rng.uniform(0, TWO_PI)
    angles, t = [], start
    for g in gaps:
        angles.append(t)
        t += TWO_PI * g / total
    return IdealPolygon.from_angles(angles)


def uniform_polygon(rng, n):
    """Vertices at independent uniform angles (possibly badly clustered)."""
    angles = sorted(rng.uniform(0, TWO_PI) for _ in range(n))
    return IdealPolygon.from_angles(angles)


def all_diagonals(n):
    return [(i, j) for i in range(n) for j in range(i + 2, n) if not (i == 0 and j == n - 1)]


def random_triangulation(rng, n):
    cands = all_diagonals(n)
    rng.shuffle(cands)
    chosen = []
    for e in cands:
        if not any(crosses(e, f) for f in chosen):
            chosen.append(e)
    return DiagonalSet(n, frozenset(chosen))


def random_weighted(rng, n, keep=0.7, low=0.0, high=TWO_PI):
    tri = random_triangulation(rng, n)
    items = [(e, rng.uniform(low, high)) for e in tri.sorted() if rng.random() < keep]
    if not items:
        e = tri.sorted()[0]
        items = [(e, rng.uniform(low, high))]
    return WeightedDiagonals.from_pairs(n, items)


def side_set(i, j, m):
    return frozenset((i - 1 + k) % m + 1 for k in range((j - i) % m))


def realizable(m, boundary, chords):
    """Independent non-crossing test on the sets of enclosed crown sides."""
    for i, j in chords:
        s = side_set(i, j, m)
        if any(((b - 2) % m + 1) in s and b in s for b in boundary):
            return False
    for a, b in itertools.combinations(chords, 2):
        sa, sb = side_set(*a, m), side_set(*b, m)
        if sa & sb and not (sa <= sb or sb <= sa):
            return False
    return True


def crown_candidates(m):
    chords = [(i, j) for i in range(1, m + 1) for j in range(1, m + 1)
              if (j - i) % m not in (0, 1, m - 1)]
    return [("b", c) for c in range(1, m + 1)] + [("c", c) for c in chords]


@functools.lru_cache(maxsize=None)
def all_shapes(m):
    """Every realizable arc system on an ``m``-cusp crown as ``(boundary, chords)``."""
    cands = crown_candidates(m)
    out = []
    for r in range(len(cands) + 1):
        for sub in itertools.combinations(cands, r):
            b = tuple(x for t, x in sub if t == "b")
            c = tuple(x for t, x in sub if t == "c")
            if realizable(m, b, c):
                out.append((b, c))
    return tuple(out)


def random_shape(rng, m):
    """A random realizable arc system built by greedy insertion."""
    cands = crown_candidates(m)
    rng.shuffle(cands)
    keep = rng.randint(0, len(cands))
    b, c = [], []
    for t, x in cands[:keep]:
        nb, nc = (b + [x], c) if t == "b" else (b, c + [x])
        if realizable(m, nb, nc):
            b, c = nb, nc
    return tuple(sorted(b)), tuple(c)


def dyadic(rng, lo=1, hi=64, denom=16):
    return Fraction(rng.randint(lo, hi), denom)


def random_scene(rng, max_cusps=3, max_surface=3, grid=8):
    """Balanced gluing scene: crown arcs from distinct cusps with random twists,
    surface arcs with distinct endpoints, all positions on a ``1/(4 grid)``
    lattice in ``(0, 1)`` away from the basepoint 0."""
    from crowngraft.matching import CrownEnd, GluingScene, SurfaceArc

    ns = rng.randint(1, max_surface)
    nc = rng.randint(1, max_cusps)
    sw = [Fraction(rng.randint(1, grid), rng.choice([1, 2, 4])) for _ in range(ns)]
    total = 2 * sum(sw)
    # split 2 * sum(sw) into nc positive parts on the 1/8 lattice
    units = int(total * 8)
    while units < nc:
        sw[0] += 1
        total = 2 * sum(sw)
        units = int(total * 8)
    cuts = sorted(rng.sample(range(1, units), nc - 1))
    parts = [Fraction(b - a, 8) for a, b in zip([0] + cuts, cuts + [units])]
    slots = rng.sample(range(1, 4 * grid), 2 * ns + nc)
    pos = [Fraction(s, 4 * grid) for s in slots]
    surface = tuple(SurfaceArc(f"s{k}", pos[2 * k], pos[2 * k + 1], w) for k, w in enumerate(sw))
    cusps = rng.sample(range(1, max_cusps + 1), nc)
    crown = tuple(CrownEnd(c, w, pos[2 * ns + k], rng.randint(-2, 2))
                  for k, (c, w) in enumerate(zip(cusps, parts)))
    return GluingScene(crown, surface)
