"""Points of the Riemann sphere and Moebius maps in homogeneous coordinates.

A point is a pair ``(z1 : z2)``; infinity is ``(1 : 0)``.  Maps are stored as
unimodular 2x2 complex matrices, so every element of PSL(2, C) has exactly two
representatives and comparisons are made up to sign.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .config import get_tolerances
from .errors import DegenerateAxis, DegenerateMap, DegenerateTriple

__all__ = [
    "SpherePoint",
    "MoebiusMap",
    "INF",
    "ZERO",
    "ONE",
    "sphere",
    "map_from_triples",
    "chi",
    "elliptic",
    "chordal_distance",
]


@dataclass(frozen=True)
class SpherePoint:
    """Homogeneous point ``(z1 : z2)``.

    The pair is canonicalized so the larger-modulus coordinate equals exactly
    1; two points built from the same complex number are therefore identical.
    Use :meth:`isclose` for projective comparison at a tolerance.
    """

    z1: complex
    z2: complex
    # the affine coordinate exactly as given, so value() round-trips it
    _affine: object = field(default=None, init=False, compare=False, repr=False)

    def __post_init__(self):
        z1, z2 = complex(self.z1), complex(self.z2)
        if z1 == 0 and z2 == 0:
            raise ValueError("(0 : 0) is not a point of the sphere")
        if not (cmath.isfinite(z1) and cmath.isfinite(z2)):
            raise ValueError("homogeneous coordinates must be finite")
        if z2 == 1:
            object.__setattr__(self, "_affine", z1)
        if abs(z1) >= abs(z2):
            z1, z2 = 1 + 0j, z2 / z1
        else:
            z1, z2 = z1 / z2, 1 + 0j
        object.__setattr__(self, "z1", z1)
        object.__setattr__(self, "z2", z2)

    @classmethod
    def from_complex(cls, z) -> "SpherePoint":
        if isinstance(z, SpherePoint):
            return z
        if isinstance(z, str):
            if z.strip().lower() in ("inf", "infinity", "oo"):
                return cls(1, 0)
            z = complex(z.replace(" ", ""))
        z = complex(z)
        if cmath.isinf(z):
            return cls(1, 0)
        return cls(z, 1)

    @property
    def is_inf(self) -> bool:
        return self.z2 == 0

    def value(self):
        """The affine coordinate as a complex number, or ``math.inf``."""
        if self.z2 == 0:
            return math.inf
        if self._affine is not None:
            return self._affine
        return self.z1 / self.z2

    def isclose(self, other: "SpherePoint", eps: float | None = None) -> bool:
        if eps is None:
            eps = get_tolerances().proj
        return abs(self.z1 * other.z2 - self.z2 * other.z1) < eps

    def __repr__(self):
        if self.is_inf:
            return "SpherePoint(inf)"
        return f"SpherePoint({self.value()!r})"


INF = SpherePoint(1, 0)
ZERO = SpherePoint(0, 1)
ONE = SpherePoint(1, 1)


def sphere(z) -> SpherePoint:
    """Coerce a complex number, ``math.inf``, ``"inf"`` or a point to a point."""
    return SpherePoint.from_complex(z)


def chordal_distance(p: SpherePoint, q: SpherePoint) -> float:
    """Chordal metric on the unit sphere; at most 2, and 2 only for antipodes."""
    num = abs(p.z1 * q.z2 - p.z2 * q.z1)
    den = math.hypot(abs(p.z1), abs(p.z2)) * math.hypot(abs(q.z1), abs(q.z2))
    return 2.0 * num / den


@dataclass(frozen=True)
class MoebiusMap:
    """``z -> (a z + b) / (c z + d)`` normalized to ``a d - b c = 1``."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        a, b, c, d = (complex(x) for x in (self.a, self.b, self.c, self.d))
        det = a * d - b * c
        scale = max(abs(a), abs(b), abs(c), abs(d))
        if scale == 0 or not cmath.isfinite(det) or abs(det) <= 1e-14 * scale * scale:
            raise DegenerateMap(f"singular matrix (det={det!r})")
        s = cmath.sqrt(det)
        a, b, c, d = a / s, b / s, c / s, d / s
        if abs(a * d - b * c - 1) > max(get_tolerances().det, 1e-12 * scale * scale / abs(det)):
            raise DegenerateMap("normalization lost precision")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_matrix(cls, m) -> "MoebiusMap":
        (a, b), (c, d) = m
        return cls(a, b, c, d)

    @property
    def matrix(self):
        return ((self.a, self.b), (self.c, self.d))

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __call__(self, p: SpherePoint) -> SpherePoint:
        return SpherePoint(self.a * p.z1 + self.b * p.z2, self.c * p.z1 + self.d * p.z2)

    apply = __call__

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        """Composition: ``(self @ other)(p) == self(other(p))``."""
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return MoebiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def isclose(self, other: "MoebiusMap", eps: float | None = None) -> bool:
        """Equality in PSL(2, C), i.e. up to the sign of the matrix."""
        if eps is None:
            eps = get_tolerances().proj
        diff = max(abs(self.a - other.a), abs(self.b - other.b),
                   abs(self.c - other.c), abs(self.d - other.d))
        summ = max(abs(self.a + other.a), abs(self.b + other.b),
                   abs(self.c + other.c), abs(self.d + other.d))
        return min(diff, summ) < eps

    def is_identity(self, eps: float | None = None) -> bool:
        return self.isclose(IDENTITY, eps)


IDENTITY = MoebiusMap.identity()


def _check_distinct(points, eps):
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if points[i].isclose(points[j], eps):
                raise DegenerateTriple(f"points {i} and {j} coincide: {points[i]!r}")


def _standard_frame(p1: SpherePoint, p2: SpherePoint, p3: SpherePoint) -> MoebiusMap:
    # columns are scaled representatives of p2 and p1, so (1:0) -> p2,
    # (0:1) -> p1 and (1:1) -> alpha*p2 + beta*p1 = p3
    det = p2.z1 * p1.z2 - p1.z1 * p2.z2
    alpha = (p3.z1 * p1.z2 - p1.z1 * p3.z2) / det
    beta = (p2.z1 * p3.z2 - p3.z1 * p2.z2) / det
    return MoebiusMap(alpha * p2.z1, beta * p1.z1, alpha * p2.z2, beta * p1.z2)


def map_from_triples(p1, p2, p3, q1, q2, q3, eps: float | None = None) -> MoebiusMap:
    """The unique Moebius map sending ``p_i`` to ``q_i``."""
    if eps is None:
        eps = get_tolerances().proj
    ps = [sphere(p) for p in (p1, p2, p3)]
    qs = [sphere(q) for q in (q1, q2, q3)]
    _check_distinct(ps, eps)
    _check_distinct(qs, eps)
    return _standard_frame(*qs) @ _standard_frame(*ps).inverse()


_CHI_FRAME = (INF, SpherePoint(-1, 1), ZERO)


def chi(a, b, c, d):
    """Cross-ratio normalized so that ``chi(inf, -1, 0, x) == x``.

    It is the image of ``d`` under the map taking ``(a, b, c)`` to
    ``(inf, -1, 0)``.  Returns a complex number, or ``math.inf``.
    """
    m = map_from_triples(a, b, c, *_CHI_FRAME)
    return m(sphere(d)).value()


_AUX_POINTS = (ZERO, ONE, SpherePoint(1j, 1))


def elliptic(p, q, t: float) -> MoebiusMap:
    """Rotation by angle ``t`` about the axis from ``p`` to ``q``.

    Conjugate of ``z -> exp(-i t) z`` by the map taking ``p, q`` to ``0, inf``;
    seen from ``p`` it turns clockwise.  Swapping ``p`` and ``q`` reverses it.
    """
    p, q = sphere(p), sphere(q)
    eps = get_tolerances().proj
    if p.isclose(q, eps):
        raise DegenerateAxis(f"axis endpoints coincide: {p!r}")
    r = next(x for x in _AUX_POINTS if not x.isclose(p, eps) and not x.isclose(q, eps))
    frame = map_from_triples(p, q, r, ZERO, INF, ONE)
    half = cmath.exp(-0.5j * t)
    rot = MoebiusMap(half, 0, 0, 1 / half)
    return frame.inverse() @ rot @ frame
