"""Polynomial Schwarzian equations ``u'' + q u / 2 = 0``: Stokes geometry,
subdominant solutions, and the asymptotic values (tips) of ``f = Y0 / Y1``.

For monic ``q = z^d + ...`` the solution decaying along the ray at angle
``theta_k = pi (2k + 1) / (d + 2)`` is ``Y_k``; the tip ``c_k`` is the limit of
``f`` along that ray.  ``Y_0`` is integrated inward from a WKB seed, ``Y_1``
likewise, and both are carried back out along every ray from the origin.
"""
from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernel
from .config import get_tolerances
from .errors import (
    ConfigurationInvalid,
    CriticalPointOnStencil,
    NoConvergence,
    SeedRadiusTooSmall,
    StepFailure,
)
from .grafting import TipConfiguration, _first_distinct_triple, normalize_tips
from .moebius import INF, ONE, ZERO, SpherePoint, chordal_distance

# WKB seeds are rejected when |Q'| / |Q|^(3/2) exceeds this
_WKB_LIMIT = 0.05
# growth of log|u| allowed between rescalings
_LOG_STEP = 40.0


@dataclass(frozen=True)
class PolynomialQD:
    """Monic centered ``q = z^d + a_{d-2} z^{d-2} + ... + a_0``.

    ``coeffs`` lists ``a_0, ..., a_{d-2}``; missing trailing entries are 0.
    """

    d: int
    coeffs: tuple = ()

    def __post_init__(self):
        d = int(self.d)
        if d < 2:
            raise ValueError(f"degree must be >= 2, got {self.d!r}")
        cs = tuple(complex(c) for c in self.coeffs)
        if len(cs) > d - 1:
            raise ValueError(f"a degree-{d} polynomial takes at most {d - 1} coefficients")
        cs = cs + (0j,) * (d - 1 - len(cs))
        if not all(cmath.isfinite(c) for c in cs):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def monomial(cls, d: int) -> "PolynomialQD":
        return cls(d)

    def descending(self) -> list:
        """All coefficients from ``z^d`` down to the constant term."""
        return [1 + 0j, 0j] + list(reversed(self.coeffs))

    def __call__(self, z: complex) -> complex:
        v = 0j
        for c in self.descending():
            v = v * z + c
        return v

    def derivative(self, z: complex) -> complex:
        v = 0j
        cs = self.descending()
        n = len(cs) - 1
        for k, c in enumerate(cs[:-1]):
            v = v * z + (n - k) * c
        return v

    def root_bound(self) -> float:
        """Every zero of ``q`` lies in the disk of this radius (Fujiwara)."""
        b = [abs(a) ** (1.0 / (self.d - j)) for j, a in enumerate(self.coeffs) if a]
        return 2.0 * max(b) if b else 0.0


# --------------------------------------------------------------------------
# Stokes geometry, exact in units of pi


@dataclass(frozen=True)
class StokesGeometry:
    """Ray angles as :class:`Fraction` multiples of ``pi`` in ``[0, 2)``."""

    d: int
    stokes_ray_angles: tuple
    anti_stokes_ray_angles: tuple
    sectors: tuple  # (lower, upper) bounding Stokes rays of S_k, upper may exceed 2

    @property
    def sector_count(self) -> int:
        return len(self.sectors)

    def radians(self, which: str = "stokes") -> list:
        src = self.stokes_ray_angles if which == "stokes" else self.anti_stokes_ray_angles
        return [float(a) * math.pi for a in src]


def stokes_geometry(d: int) -> StokesGeometry:
    if d < 1:
        raise ValueError("d must be >= 1")
    n = d + 2
    stokes = tuple(sorted(Fraction(2 * k + 1, n) % 2 for k in range(n)))
    anti = tuple(Fraction(2 * k, n) for k in range(n))
    sectors = tuple((Fraction(2 * k - 1, n), Fraction(2 * k + 1, n)) for k in range(n))
    return StokesGeometry(d, stokes, anti, sectors)


def tip_angle(d: int, k: int) -> float:
    """Direction along which ``Y_k`` decays for ``u'' + q u / 2 = 0``."""
    return math.pi * (2 * k + 1) / (d + 2)


# --------------------------------------------------------------------------
# integration along paths


@dataclass
class SolutionSample:
    """Solutions along a polygonal path.

    ``values[i, n]`` is ``(u, u')`` of solution ``n`` at ``path[i]`` divided by
    ``exp(log_scale[i, n])``; rescaling keeps huge growth representable.
    """

    path: np.ndarray
    values: np.ndarray
    log_scale: np.ndarray
    steps: int = 0
    rejected: int = 0
    step_sizes: list = field(default_factory=list)

    def log_abs_u(self, n: int = 0) -> np.ndarray:
        return np.log(np.abs(self.values[:, n, 0])) + self.log_scale[:, n]

    def u(self, n: int = 0) -> np.ndarray:
        return self.values[:, n, 0] * np.exp(self.log_scale[:, n])

    def du(self, n: int = 0) -> np.ndarray:
        return self.values[:, n, 1] * np.exp(self.log_scale[:, n])

    def to_csv(self, n: int = 0) -> str:
        rows = ["z_re,z_im,u_re,u_im,du_re,du_im"]
        for z, u, du in zip(self.path, self.u(n), self.du(n)):
            rows.append(",".join(repr(float(x)) for x in
                                 (z.real, z.imag, u.real, u.imag, du.real, du.imag)))
        return "\n".join(rows) + "\n"


def _backend(name):
    if name is None:
        return kernel.integrate_segment
    found = kernel.backends()
    if name not in found:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(found)}")
    return found[name]


def integrate_path(q: PolynomialQD, y0, path, rtol: float | None = None,
                   atol: float | None = None, backend: str | None = None) -> SolutionSample:
    """Carry the rows ``(u, u')`` of ``y0`` along straight segments through
    ``path``, renormalizing each row at every node."""
    tol = get_tolerances()
    rtol = tol.ode_rtol if rtol is None else rtol
    atol = tol.ode_atol if atol is None else atol
    step = _backend(backend)
    coeffs = np.array(q.descending(), dtype=complex)
    path = np.asarray(path, dtype=complex)
    y = np.array(y0, dtype=complex).reshape(-1, 2)
    norms = np.max(np.abs(y), axis=1)
    y = y / norms[:, None]
    logs = np.log(norms)
    values, scales = [y.copy()], [logs.copy()]
    steps = rejected = 0
    sizes = []
    h = 0.0
    for za, zb in zip(path[:-1], path[1:]):
        y, h, ns, nr, status = step(coeffs, za, zb, y, rtol, atol, h)
        steps += ns
        rejected += nr
        sizes.append(h * abs(zb - za))
        if status:
            raise StepFailure(f"integration from {za} to {zb} failed",
                              {"status": int(status), "steps": int(ns), "rejected": int(nr),
                               "last_step": float(h * abs(zb - za))})
        norms = np.max(np.abs(y), axis=1)
        if not np.all(np.isfinite(norms)) or np.any(norms == 0):
            raise StepFailure(f"solution left the representable range near {zb}",
                              {"z": complex(zb)})
        y = y / norms[:, None]
        logs = logs + np.log(norms)
        values.append(y.copy())
        scales.append(logs.copy())
    return SolutionSample(path, np.array(values), np.array(scales), steps, rejected, sizes)


def _action(q: PolynomialQD, r: float) -> float:
    """Rough size of the WKB exponent at radius ``r``."""
    p = (q.d + 2) / 2
    return r ** p / (p * math.sqrt(2.0))


def _radius_for_action(q: PolynomialQD, target: float) -> float:
    p = (q.d + 2) / 2
    return (target * p * math.sqrt(2.0)) ** (1.0 / p)


def _ray_radii(q: PolynomialQD, r_hi: float, r_lo: float, marks=()) -> list:
    """Descending radii from ``r_hi`` to ``r_lo`` with the exponent changing by
    at most ``_LOG_STEP`` between neighbours, including every radius in ``marks``."""
    p = (q.d + 2) / 2
    radii = [r_hi]
    r = r_hi
    while r > r_lo:
        s = _action(q, r)
        r = max(r / 1.5, r - _LOG_STEP * r / (p * max(s, 1e-300)), r_lo)
        if r - r_lo < 1e-12 * max(r_hi, 1.0):
            r = r_lo
        radii.append(r)
    radii = sorted(set(radii) | {m for m in marks if r_lo <= m <= r_hi}, reverse=True)
    return radii


def wkb_seed(q: PolynomialQD, z0: complex, theta: float):
    """``(u, u')`` of the solution decaying outward along ``arg z = theta``,
    normalized to ``u(z0) = 1``."""
    Q = -0.5 * q(z0)
    dQ = -0.5 * q.derivative(z0)
    if abs(Q) == 0 or abs(dQ) / abs(Q) ** 1.5 > _WKB_LIMIT:
        raise SeedRadiusTooSmall(
            f"WKB seed at |z| = {abs(z0):.4g} is outside its validity range "
            f"(|Q'|/|Q|^1.5 = {abs(dQ) / abs(Q) ** 1.5 if Q else math.inf:.3g})")
    root = cmath.sqrt(Q)
    if (root * cmath.exp(1j * theta)).real < 0:
        root = -root
    if (root * cmath.exp(1j * theta)).real <= 0.5 * abs(root):
        raise SeedRadiusTooSmall(f"seed direction {theta:.4g} is not a decay direction")
    return (1 + 0j, -(root + dQ / (4 * Q)))


def subdominant_solution(q: PolynomialQD, k: int, R: float, r_stop: float = 0.0,
                         rtol: float | None = None, atol: float | None = None,
                         backend: str | None = None, radii=None) -> SolutionSample:
    """``Y_k`` sampled along its decay ray from ``|z| = R`` inward to ``r_stop``.

    ``radii`` optionally fixes the descending sample radii (first ``R``, last
    ``r_stop``).
    """
    if not 0 <= r_stop < R:
        raise ValueError("need 0 <= r_stop < R")
    theta = tip_angle(q.d, k)
    direction = cmath.exp(1j * theta)
    seed = wkb_seed(q, R * direction, theta)
    if radii is None:
        radii = _ray_radii(q, R, r_stop)
    elif radii[0] != R or radii[-1] != r_stop:
        raise ValueError("radii must run from R down to r_stop")
    return integrate_path(q, [seed], [r * direction for r in radii], rtol, atol, backend)


# --------------------------------------------------------------------------
# tips


@dataclass(frozen=True)
class TipEstimate:
    sector: int
    value: SpherePoint
    error: float
    samples: tuple = ()  # (radius, SpherePoint) in increasing radius


@dataclass(frozen=True)
class TipReport:
    q: PolynomialQD
    estimates: tuple
    configuration: TipConfiguration
    seed_radius: float
    wronskian_drift: float
    normalization: object  # MoebiusMap applied to the raw ratios

    @property
    def errors(self) -> list:
        return [e.error for e in self.estimates]


def _ratio(u0, l0, u1, l1) -> SpherePoint:
    """``(u0 e^l0) / (u1 e^l1)`` as a sphere point without overflow."""
    x = l0 - l1
    if x > 0:
        return SpherePoint(u0, u1 * math.exp(-x)) if x < 745 else SpherePoint(1, 0)
    return SpherePoint(u0 * math.exp(x), u1) if x > -745 else SpherePoint(0, 1)


def _wronskian_drift(a: SolutionSample, ia, la0, b: SolutionSample, ib, lb0):
    """Largest relative change of ``W`` between rows of two samples on the same
    radii (``a`` listed outward, ``b`` outward)."""
    w = []
    for k in range(len(a.path)):
        (u0, du0), (u1, du1) = a.values[k, ia], b.values[k, ib]
        core = u0 * du1 - du0 * u1
        w.append((core, a.log_scale[k, ia] - la0 + b.log_scale[k, ib] - lb0))
    ref = w[0][0] * math.exp(w[0][1])
    return max(abs(c * math.exp(l) / ref - 1) for c, l in w)


def tip_estimates(q: PolynomialQD, R: float | None = None, rtol: float | None = None,
                  atol: float | None = None, samples: int = 4, factor: float = 1.5,
                  conv_tol: float = 1e-6, backend: str | None = None,
                  workers: int = 1, action: float = 18.0) -> TipReport:
    """Estimate all ``d + 2`` tips with per-tip error bars.

    ``f = Y0 / Y1`` is sampled along each tip ray at ``samples`` radii spaced by
    ``factor``; with an explicit seed radius ``R`` they are ``R / factor^j``
    for ``j = 1..samples``.  The reported error is twice the chordal change over the
    last radius step, in the chart where the tips are normalized, and never less
    than ``10 rtol``.  Without ``R``, the second-outermost sample radius is
    where the WKB exponent reaches ``action``, pushed out past the zeros of
    ``q``.
    """
    tol = get_tolerances()
    rtol = tol.ode_rtol if rtol is None else rtol
    atol = tol.ode_atol if atol is None else atol
    if samples < 4:
        raise ValueError("at least 4 radii are needed")
    d = q.d
    if R is None:
        r_top = factor * max(_radius_for_action(q, action), 1.5 * q.root_bound(), 1.0)
        # past r_top the seed's error in the growing direction dies off like
        # exp(-2 * extra action); 15 leaves it far below rtol
        R = _radius_for_action(q, _action(q, r_top) + 15.0)
        radii = sorted(r_top / factor ** j for j in range(samples))
    else:
        radii = sorted(R / factor ** j for j in range(1, samples + 1))
    grid = sorted(_ray_radii(q, radii[-1], 0.0, radii))  # ascending, starts at 0
    theta = [tip_angle(d, k) for k in range(d + 2)]

    down = _ray_radii(q, R, grid[-1])[:-1] + grid[::-1]
    offset = len(down) - len(grid)
    inward = [subdominant_solution(q, k, R, 0.0, rtol, atol, backend, down) for k in (0, 1)]
    origin = np.array([s.values[-1, 0] for s in inward])
    # log scale of each Y_k at the origin is reset to 0
    seed_logs = [s.log_scale[-1, 0] for s in inward]

    def outward(k):
        ray = [r * cmath.exp(1j * theta[k]) for r in grid]
        return integrate_path(q, origin, ray, rtol, atol, backend)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            out = list(pool.map(outward, range(d + 2)))
    else:
        out = [outward(k) for k in range(d + 2)]

    idx = {r: n for n, r in enumerate(grid)}
    raw = []
    for k in range(d + 2):
        seq = []
        for r in radii:
            n = idx[r]
            u0, l0 = out[k].values[n, 0, 0], out[k].log_scale[n, 0]
            u1, l1 = out[k].values[n, 1, 0], out[k].log_scale[n, 1]
            if k in (0, 1):
                # the decaying solution is taken from its inward pass
                s = inward[k]
                m = offset + len(grid) - 1 - n
                uk = s.values[m, 0, 0]
                lk = s.log_scale[m, 0] - seed_logs[k]
                if k == 0:
                    u0, l0 = uk, lk
                else:
                    u1, l1 = uk, lk
            seq.append(_ratio(u0, l0, u1, l1))
        raw.append(seq)

    # normalize with the outermost values, then measure convergence in that chart
    outer = TipConfiguration(tuple(seq[-1] for seq in raw))
    _, norm = normalize_tips(outer)
    anchors = dict(zip(_first_distinct_triple(outer.tips, get_tolerances().proj), (ZERO, INF, ONE)))
    floor = 10 * rtol
    estimates = []
    for k, seq in enumerate(raw):
        seq = [norm(p) for p in seq]
        steps = [chordal_distance(a, b) for a, b in zip(seq, seq[1:])]
        if steps[-1] > conv_tol or not steps[-1] <= max(steps[-2], floor):
            raise NoConvergence(k, f"tip {k} did not stabilize: successive changes {steps}")
        value = seq[-1]
        if k in anchors and chordal_distance(value, anchors[k]) < 1e-14:
            value = anchors[k]  # exact by construction, up to rounding
        estimates.append(TipEstimate(k, value, max(2 * steps[-1], floor),
                                     tuple(zip(radii, seq))))
    # normalizing by uncertain tips spreads their error to every tip
    spread = sum(sorted(e.error for e in estimates)[-3:])
    estimates = [TipEstimate(e.sector, e.value, e.error + spread, e.samples) for e in estimates]

    for k in range(d + 2):
        a, b = estimates[k], estimates[(k + 1) % (d + 2)]
        if chordal_distance(a.value, b.value) <= a.error + b.error:
            raise ConfigurationInvalid(f"tips {k} and {(k + 1) % (d + 2)} are "
                                       "indistinguishable at the error scale")
    conf = TipConfiguration(tuple(e.value for e in estimates))

    drift = 0.0
    for k in (0, 1):
        s = inward[k]
        n_in = len(grid)
        tail = SolutionSample(s.path[-n_in:][::-1], s.values[-n_in:][::-1],
                              s.log_scale[-n_in:][::-1])
        drift = max(drift, _wronskian_drift(tail, 0, tail.log_scale[0, 0],
                                            out[k], 1 - k, 0.0))
    return TipReport(q, tuple(estimates), conf, R, drift, norm)


def tips(q: PolynomialQD, **params) -> TipConfiguration:
    return tip_estimates(q, **params).configuration


def wronskian_tips(q: PolynomialQD, R: float, rtol: float | None = None,
                   atol: float | None = None, backend: str | None = None) -> list:
    """Tips from ``c_k = W(Y0, Y_k) / W(Y1, Y_k)`` at the origin, with every
    ``Y_k`` integrated inward from its own seed.  Independent of the
    ratio-limit construction; unnormalized."""
    ys = [subdominant_solution(q, k, R, 0.0, rtol, atol, backend).values[-1, 0]
          for k in range(q.d + 2)]
    (a, da), (b, db) = ys[0], ys[1]
    out = []
    for u, du in ys:
        out.append(SpherePoint(a * du - da * u, b * du - db * u))
    return out


# --------------------------------------------------------------------------
# Schwarzian derivative by finite differences


def _stencil(order: int, half: int = 4) -> np.ndarray:
    offs = np.arange(-half, half + 1, dtype=float)
    V = np.vander(offs, increasing=True).T
    rhs = np.zeros(len(offs))
    rhs[order] = math.factorial(order)
    return np.linalg.solve(V, rhs)


_W9 = [_stencil(k, 4) for k in (1, 2, 3)]
_W7 = [np.concatenate(([0.0], _stencil(k, 3), [0.0])) for k in (1, 2, 3)]


def _schwarzian_at(g, h, weights):
    d1, d2, d3 = (w @ g / h ** (k + 1) for k, w in enumerate(weights))
    if abs(d1) * h <= 1e-8 * np.max(np.abs(g)):
        return None
    return d3 / d1 - 1.5 * (d2 / d1) ** 2


def schwarzian_fd(f, h: float) -> np.ndarray:
    """Schwarzian of holomorphic samples ``f[row, col]`` spaced ``h`` along the
    columns (the real direction).

    Uses 9-point central differences, so the first and last four columns come
    back as NaN.  Both ``f`` and ``1 / f`` (same Schwarzian) are differenced and
    the one whose 9-point and 7-point results agree better is kept, which keeps
    poles of either away from the stencil.
    """
    f = np.asarray(f, dtype=complex)
    if f.ndim == 1:
        f = f[None, :]
    rows, cols = f.shape
    out = np.full(f.shape, np.nan + 0j)
    for i in range(rows):
        for j in range(4, cols - 4):
            best = None
            for g in (f[i, j - 4:j + 5], None):
                if g is None:
                    with np.errstate(divide="ignore", invalid="ignore"):
                        g = 1 / f[i, j - 4:j + 5]
                if not np.all(np.isfinite(g)):
                    continue
                s9, s7 = _schwarzian_at(g, h, _W9), _schwarzian_at(g, h, _W7)
                if s9 is None or s7 is None:
                    continue
                if best is None or abs(s9 - s7) < best[1]:
                    best = (s9, abs(s9 - s7))
            if best is None:
                raise CriticalPointOnStencil(
                    f"derivative vanishes or pole on the stencil at node ({i}, {j})")
            out[i, j] = best[0]
    return out


def developing_map_grid(q: PolynomialQD, xs, ys, rtol: float | None = None,
                        atol: float | None = None, backend: str | None = None) -> np.ndarray:
    """``f = u_a / u_b`` on the grid ``x + i y``, with ``u_a(0) = 1, u_a'(0) = 0``
    and ``u_b(0) = 0, u_b'(0) = 1``.  Paths go up the imaginary axis, then
    along each row."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    start = np.array([[1, 0], [0, 1]], dtype=complex)
    out = np.empty((len(ys), len(xs)), dtype=complex)
    for i, y in enumerate(ys):
        col = integrate_path(q, start, [0, 1j * y], rtol, atol, backend)
        here = col.values[-1] * np.exp(col.log_scale[-1])[:, None]
        for direction in (1, -1):
            sel = [j for j in range(len(xs)) if (xs[j] >= 0) == (direction > 0)]
            sel.sort(key=lambda j: abs(xs[j]))
            path = [1j * y] + [xs[j] + 1j * y for j in sel]
            if len(path) == 1:
                continue
            row = integrate_path(q, here, path, rtol, atol, backend)
            for n, j in enumerate(sel, start=1):
                (ua, _), (ub, _) = row.values[n]
                la, lb = row.log_scale[n]
                out[i, j] = ua / ub * math.exp(la - lb)
    return out
