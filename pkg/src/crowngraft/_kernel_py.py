"""Pure-Python Dormand-Prince 5(4) stepper for u'' + q u / 2 = 0 along a
straight segment of the complex plane.

Mirrors the compiled kernel exactly; used when the extension is unavailable
or when CROWNGRAFT_PURE_PYTHON is set.
"""
import math

import numpy as np

C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
# fifth-order weights minus embedded fourth-order weights
E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

OK, MAX_STEPS, BAD_STEP = 0, 1, 2


def _rhs(coeffs, z, L, ys):
    q = 0j
    for c in coeffs:
        q = q * z + c
    hq = -0.5 * q * L
    return [(L * du, hq * u) for u, du in ys]


def integrate_segment(coeffs, za, zb, y, rtol, atol, h=0.0, max_steps=1_000_000):
    """Advance every row ``(u, u')`` of ``y`` from ``za`` to ``zb``.

    ``coeffs`` are the coefficients of q in descending powers.  ``h`` is an
    initial step as a fraction of the segment (0 picks one).  Returns
    ``(y_new, h_last, steps, rejected, status)``.
    """
    coeffs = [complex(c) for c in coeffs]
    za, zb = complex(za), complex(zb)
    L = zb - za
    ys = [(complex(r[0]), complex(r[1])) for r in np.asarray(y)]
    if L == 0:
        return np.array(ys, dtype=complex).reshape(-1, 2), h, 0, 0, OK
    if h <= 0:
        h = 0.05
    s = 0.0
    steps = rejected = 0
    k1 = _rhs(coeffs, za, L, ys)
    while s < 1.0:
        if steps + rejected >= max_steps:
            return np.array(ys, dtype=complex).reshape(-1, 2), h, steps, rejected, MAX_STEPS
        last = s + h >= 1.0
        if last:
            h = 1.0 - s
        ks = [k1]
        for i in range(1, 7):
            row = A[i]
            stage = []
            for n, (u, du) in enumerate(ys):
                au, adu = u, du
                for j, a in enumerate(row):
                    if a:
                        au += h * a * ks[j][n][0]
                        adu += h * a * ks[j][n][1]
                stage.append((au, adu))
            if i == 6:
                ynew = stage
            ks.append(_rhs(coeffs, za + (s + C[i] * h) * L, L, stage))
        err = 0.0
        for n, (u, du) in enumerate(ys):
            eu = edu = 0j
            for j, e in enumerate(E):
                if e:
                    eu += e * ks[j][n][0]
                    edu += e * ks[j][n][1]
            nu, ndu = ynew[n]
            scale = atol + rtol * max(abs(u), abs(du), abs(nu), abs(ndu))
            err = max(err, h * max(abs(eu), abs(edu)) / scale)
        if not math.isfinite(err):
            return np.array(ys, dtype=complex).reshape(-1, 2), h, steps, rejected, BAD_STEP
        if err <= 1.0:
            s = 1.0 if last else s + h
            ys = ynew
            k1 = ks[6]
            steps += 1
            fac = 5.0 if err == 0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        else:
            rejected += 1
            fac = max(0.2, 0.9 * err ** -0.2)
        h *= fac
        if h < 1e-14:
            return np.array(ys, dtype=complex).reshape(-1, 2), h, steps, rejected, BAD_STEP
    return np.array(ys, dtype=complex).reshape(-1, 2), h, steps, rejected, OK
