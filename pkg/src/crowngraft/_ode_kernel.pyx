# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dormand-Prince 5(4) stepper; same contract as ``_kernel_py``."""
from libc.math cimport isfinite, pow
from libc.stdlib cimport malloc, free

import numpy as np

cdef double C[7]
C[:] = [0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0]
cdef double A[7][6]
A[0][:] = [0, 0, 0, 0, 0, 0]
A[1][:] = [1.0 / 5, 0, 0, 0, 0, 0]
A[2][:] = [3.0 / 40, 9.0 / 40, 0, 0, 0, 0]
A[3][:] = [44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0]
A[4][:] = [19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0]
A[5][:] = [9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0]
A[6][:] = [35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84]
cdef double E[7]
E[:] = [71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920, -17253.0 / 339200, 22.0 / 525, -1.0 / 40]


cdef inline double cabs_(double complex z) nogil:
    return abs(z)


cdef inline void rhs(const double complex* coeffs, int nc, double complex z,
                     double complex L, const double complex* y, double complex* out,
                     int nsol) nogil:
    cdef double complex q = 0
    cdef int i
    for i in range(nc):
        q = q * z + coeffs[i]
    cdef double complex hq = -0.5 * q * L
    for i in range(nsol):
        out[2 * i] = L * y[2 * i + 1]
        out[2 * i + 1] = hq * y[2 * i]


cdef int step_loop(const double complex* coeffs, int nc, double complex za,
                   double complex L, double complex* y, int nsol, double rtol,
                   double atol, double* h_io, long max_steps, long* steps_out,
                   long* rej_out) nogil:
    cdef int m = 2 * nsol
    cdef double complex* k = <double complex*> malloc(7 * m * sizeof(double complex))
    cdef double complex* tmp = <double complex*> malloc(m * sizeof(double complex))
    cdef double complex* ynew = <double complex*> malloc(m * sizeof(double complex))
    cdef double s = 0.0, h = h_io[0], err, scale, fac, e1, e2, mag
    cdef long steps = 0, rejected = 0
    cdef int i, j, n, status = 0
    cdef bint last
    cdef double complex eu, edu
    if h <= 0:
        h = 0.05
    rhs(coeffs, nc, za, L, y, k, nsol)
    while s < 1.0:
        if steps + rejected >= max_steps:
            status = 1
            break
        last = s + h >= 1.0
        if last:
            h = 1.0 - s
        for i in range(1, 7):
            for n in range(m):
                tmp[n] = y[n]
                for j in range(i):
                    if A[i][j] != 0:
                        tmp[n] = tmp[n] + h * A[i][j] * k[j * m + n]
            if i == 6:
                for n in range(m):
                    ynew[n] = tmp[n]
            rhs(coeffs, nc, za + (s + C[i] * h) * L, L, tmp, k + i * m, nsol)
        err = 0.0
        for n in range(nsol):
            eu = 0
            edu = 0
            for j in range(7):
                if E[j] != 0:
                    eu = eu + E[j] * k[j * m + 2 * n]
                    edu = edu + E[j] * k[j * m + 2 * n + 1]
            mag = cabs_(y[2 * n])
            mag = max(mag, cabs_(y[2 * n + 1]))
            mag = max(mag, cabs_(ynew[2 * n]))
            mag = max(mag, cabs_(ynew[2 * n + 1]))
            scale = atol + rtol * mag
            e1 = cabs_(eu)
            e2 = cabs_(edu)
            err = max(err, h * max(e1, e2) / scale)
        if not isfinite(err):
            status = 2
            break
        if err <= 1.0:
            s = 1.0 if last else s + h
            for n in range(m):
                y[n] = ynew[n]
                k[n] = k[6 * m + n]
            steps += 1
            if err == 0:
                fac = 5.0
            else:
                fac = min(5.0, max(0.2, 0.9 * pow(err, -0.2)))
        else:
            rejected += 1
            fac = max(0.2, 0.9 * pow(err, -0.2))
        h *= fac
        if h < 1e-14:
            status = 2
            break
    free(k)
    free(tmp)
    free(ynew)
    h_io[0] = h
    steps_out[0] = steps
    rej_out[0] = rejected
    return status


def integrate_segment(coeffs, za, zb, y, double rtol, double atol, double h=0.0,
                      long max_steps=1_000_000):
    cdef double complex[::1] cv = np.ascontiguousarray(coeffs, dtype=np.complex128)
    arr = np.array(y, dtype=np.complex128).reshape(-1, 2).copy()
    cdef double complex[:, ::1] yv = arr
    cdef double complex a = complex(za)
    cdef double complex L = complex(zb) - a
    cdef int nsol = yv.shape[0]
    cdef long steps = 0, rejected = 0
    cdef int status = 0
    cdef double hh = h
    if L == 0 or nsol == 0:
        return arr, h, 0, 0, 0
    with nogil:
        status = step_loop(&cv[0], cv.shape[0], a, L, &yv[0, 0], nsol, rtol, atol,
                           &hh, max_steps, &steps, &rejected)
    return arr, hh, steps, rejected, status
