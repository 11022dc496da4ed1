import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from crowngraft import kernel
from crowngraft.errors import CriticalPointOnStencil, NoConvergence, SeedRadiusTooSmall
from crowngraft.grafting import TipConfiguration, normalize_tips, tip_deviation
from crowngraft.moebius import chordal_distance, map_from_triples
from crowngraft.schwarzian import (
    PolynomialQD,
    developing_map_grid,
    integrate_path,
    schwarzian_fd,
    stokes_geometry,
    subdominant_solution,
    tip_angle,
    tip_estimates,
    wkb_seed,
    wronskian_tips,
)

Z2 = PolynomialQD(2)


@pytest.fixture(scope="module")
def z2_report():
    return tip_estimates(Z2)


def test_polynomial():
    q = PolynomialQD(4, (1, 2j))
    # coefficients run a_0, a_1, ...; a_2 defaults to 0
    assert q.descending() == [1, 0, 0, 2j, 1]
    z = 0.3 - 0.7j
    assert q(z) == pytest.approx(z ** 4 + 2j * z + 1)
    assert q.derivative(z) == pytest.approx(4 * z ** 3 + 2j)
    roots = np.roots(q.descending())
    assert max(abs(roots)) <= q.root_bound()
    with pytest.raises(ValueError):
        PolynomialQD(1)
    with pytest.raises(ValueError):
        PolynomialQD(2, (1, 2))


def test_stokes_examples():
    g = stokes_geometry(2)
    assert g.sector_count == 4
    assert g.stokes_ray_angles == tuple(Fraction(k, 4) for k in (1, 3, 5, 7))
    assert g.anti_stokes_ray_angles == tuple(Fraction(k, 2) for k in range(4))
    g = stokes_geometry(1)
    assert g.sector_count == 3
    assert g.anti_stokes_ray_angles == (0, Fraction(2, 3), Fraction(4, 3))


def test_stokes_counts_exact():
    for d in range(1, 21):
        g = stokes_geometry(d)
        n = d + 2
        assert g.sector_count == len(g.stokes_ray_angles) == len(g.anti_stokes_ray_angles) == n
        assert all(isinstance(a, Fraction) for a in g.stokes_ray_angles + g.anti_stokes_ray_angles)
        for k, (lo, hi) in enumerate(g.sectors):
            assert hi - lo == Fraction(2, n)
            assert (lo + hi) / 2 == g.anti_stokes_ray_angles[k]


def test_wkb_seed_validity():
    with pytest.raises(SeedRadiusTooSmall):
        wkb_seed(Z2, 0.5 * cmath.exp(0.25j * math.pi), 0.25 * math.pi)
    with pytest.raises(SeedRadiusTooSmall):
        wkb_seed(Z2, 8 + 0j, 0.0)
    u, du = wkb_seed(Z2, 8 * cmath.exp(0.25j * math.pi), 0.25 * math.pi)
    assert u == 1 and (du * cmath.exp(0.25j * math.pi)).real < 0


def rhs(q):
    def f(z_real, y, za, zb):
        z = za + z_real * (zb - za)
        u, du = y[0], y[1]
        return (zb - za) * np.array([du, -0.5 * q(z) * u])
    return f


@pytest.mark.parametrize("name", sorted(kernel.backends()))
def test_kernel_against_scipy(name):
    q = PolynomialQD(3, (0.5, -1j))
    za, zb = 0.2 + 0.1j, 1.7 - 0.9j
    y0 = np.array([[1 + 0.5j, -0.3j], [0.2, 1.0]])
    y, h, steps, rejected, status = kernel.backends()[name](
        np.array(q.descending(), dtype=complex), za, zb, y0.copy(), 1e-12, 1e-12, 0.0)
    assert status == 0 and steps > 0
    for row in range(2):
        ref = solve_ivp(rhs(q), (0, 1), y0[row], method="DOP853", rtol=1e-13, atol=1e-13,
                        args=(za, zb))
        assert np.max(np.abs(y[row] - ref.y[:, -1])) < 1e-9


def test_backends_agree():
    found = kernel.backends()
    if len(found) < 2:
        pytest.skip("compiled backend not built")
    q = PolynomialQD(4, (1, 0.5j, -2))
    path = [0, 1 + 1j, 2.5 + 0.5j, 3j]
    a = integrate_path(q, [[1, 0], [0, 1]], path, backend="python")
    b = integrate_path(q, [[1, 0], [0, 1]], path, backend="cython")
    assert np.array_equal(a.values, b.values) and a.steps == b.steps


def wronskian(sample, k):
    (u0, du0), (u1, du1) = sample.values[k]
    return (u0 * du1 - du0 * u1) * math.exp(sample.log_scale[k].sum())


def test_wronskian_constant_along_path():
    q = PolynomialQD(3, (1j, 0.3))
    path = [0, 1, 2 + 1j, 1 + 3j, -2j]
    s = integrate_path(q, [[1, 0], [0, 1]], path)
    w = [wronskian(s, k) for k in range(len(path))]
    assert max(abs(x / w[0] - 1) for x in w) < 1e-6


def test_decay_and_growth():
    d = 2
    R = 10.0
    s = subdominant_solution(Z2, 0, R)
    radii = np.abs(s.path)
    logs = s.log_abs_u()
    outer = radii >= 1.5
    # listed inward: |Y_0| grows as r decreases, i.e. decays outward
    assert np.all(np.diff(logs[outer]) > 0)
    at_origin = s.values[-1] * np.exp(s.log_scale[-1])[:, None]
    theta1 = tip_angle(d, 1)
    ray = [r * cmath.exp(1j * theta1) for r in np.linspace(0, R, 30)]
    grow = integrate_path(Z2, at_origin, ray).log_abs_u()
    assert np.all(np.diff(grow[10:]) > 0)
    assert grow[-1] - grow[0] > 10


def test_tip_count_and_errors(z2_report):
    rep = z2_report
    assert len(rep.configuration) == 4
    assert all(0 < e < 1e-6 for e in rep.errors)
    assert rep.wronskian_drift < 1e-6
    vals = rep.configuration.values()
    assert vals[0] == 0 and vals[1] == math.inf and vals[2] == 1
    assert abs(vals[3] - 0.5) < 1e-8


@pytest.mark.parametrize("q", [PolynomialQD(3), PolynomialQD(4, (1,)), PolynomialQD(5, (0.5j, 0, 1))])
def test_tip_count_general(q):
    rep = tip_estimates(q)
    assert len(rep.configuration) == q.d + 2
    conf = rep.configuration
    for k in range(q.d + 2):
        assert chordal_distance(conf[k], conf[(k + 1) % (q.d + 2)]) > 1e-3


@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_monomial_symmetry(d):
    conf = tip_estimates(PolynomialQD(d)).configuration
    n = d + 2
    m = map_from_triples(conf[0], conf[1], conf[2], conf[1], conf[2], conf[3])
    residual = max(chordal_distance(m(conf[k]), conf[(k + 1) % n]) for k in range(n))
    assert residual < 1e-4


def test_golden_ratio_fixture():
    # q = z^3: the fourth and fifth tips are the golden-ratio points
    vals = tip_estimates(PolynomialQD(3)).configuration.values()
    phi = (math.sqrt(5) - 1) / 2
    assert abs(vals[3] - phi) < 1e-8 and abs(vals[4] - phi ** 2) < 1e-8


def test_seed_radius_independence(z2_report):
    for q, base in ((Z2, z2_report), (PolynomialQD(4, (1,)), None)):
        base = base or tip_estimates(q)
        other = tip_estimates(q, R=2 * base.seed_radius)
        errs = [max(a, b) for a, b in zip(base.errors, other.errors)]
        for k, (a, b) in enumerate(zip(base.configuration, other.configuration)):
            assert chordal_distance(a, b) < errs[k]


def test_wronskian_cross_check():
    q = PolynomialQD(4, (1,))
    rep = tip_estimates(q)
    other = TipConfiguration(tuple(wronskian_tips(q, rep.seed_radius)))
    assert tip_deviation(rep.configuration, other) < 1e-7


def test_workers_match_serial(z2_report):
    par = tip_estimates(Z2, workers=3)
    assert par.configuration == z2_report.configuration


def test_failure_modes():
    with pytest.raises(SeedRadiusTooSmall):
        tip_estimates(Z2, R=0.8)
    with pytest.raises(NoConvergence):
        tip_estimates(Z2, conv_tol=1e-30)
    with pytest.raises(ValueError):
        tip_estimates(Z2, samples=3)


def test_csv_trace():
    text = subdominant_solution(Z2, 0, 10.0).to_csv()
    lines = text.splitlines()
    assert lines[0] == "z_re,z_im,u_re,u_im,du_re,du_im"
    assert len(lines[1].split(",")) == 6


# -- finite-difference Schwarzian ---------------------------------------------

def grid(h, lo=-1.0, hi=1.0, rows=(-0.5, 0.0, 0.5)):
    xs = np.arange(lo, hi + h / 2, h)
    return xs, np.array(rows), xs[None, :] + 1j * np.array(rows)[:, None]


def test_schwarzian_of_moebius():
    xs, ys, z = grid(0.02)
    for f in ((2 * z + 1) / (z - 3 + 1j), (1j * z - 2) / (0.5 * z + 4j)):
        s = schwarzian_fd(f, 0.02)[:, 4:-4]
        assert np.max(np.abs(s)) < 1e-6


def test_schwarzian_of_exp():
    xs, ys, z = grid(0.02)
    s = schwarzian_fd(np.exp(z), 0.02)[:, 4:-4]
    assert np.max(np.abs(s + 0.5)) < 1e-6


def test_schwarzian_of_power():
    # S(z^a) = (1 - a^2) / (2 z^2)
    xs, ys, z = grid(0.01, 1.0, 2.0, rows=(0.3,))
    s = schwarzian_fd(z ** 3, 0.01)[:, 4:-4]
    assert np.max(np.abs(s - (1 - 9) / (2 * z[:, 4:-4] ** 2))) < 1e-6


def test_schwarzian_nan_margins_and_constant():
    xs, ys, z = grid(0.1)
    s = schwarzian_fd(np.exp(z), 0.1)
    assert np.all(np.isnan(s[:, :4])) and np.all(np.isnan(s[:, -4:]))
    with pytest.raises(CriticalPointOnStencil):
        schwarzian_fd(np.ones(20, dtype=complex), 0.1)


def test_developing_map_schwarzian():
    h = 0.05
    xs = np.arange(-1.5, 1.5 + h / 2, h)
    ys = np.array([-1.0, -0.5, 0.5, 1.0])
    f = developing_map_grid(Z2, xs, ys)
    s = schwarzian_fd(f, h)
    z = xs[None, :] + 1j * ys[:, None]
    mask = ~np.isnan(s) & (np.abs(z) >= 0.5) & (np.abs(z) <= 1.5)
    assert mask.sum() > 50
    rel = np.abs(s[mask] - z[mask] ** 2) / np.abs(z[mask] ** 2)
    assert np.max(rel) < 1e-3


def test_pure_python_fallback_selected_by_env():
    import os
    import subprocess
    import sys
    code = "from crowngraft import kernel; print(kernel.BACKEND)"
    env = {**os.environ, "CROWNGRAFT_PURE_PYTHON": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True).stdout.strip()
    assert out == "python"
    env["CROWNGRAFT_PURE_PYTHON"] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True).stdout.strip()
    assert out == ("cython" if "cython" in kernel.backends() else "python")
