"""Compare the compiled and pure-Python ODE kernels.

Times a batch of straight-segment integrations and one full tip computation
per backend, and checks that both backends agree.
"""
import argparse
import time

import numpy as np

from crowngraft.kernel import backends
from crowngraft.schwarzian import PolynomialQD, tip_estimates


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def segments(step, n):
    coeffs = np.array([1, 0, 0.5, -1j, 2], dtype=complex)
    y = np.array([[1, 0], [0, 1]], dtype=complex)
    ends = [3 * np.exp(2j * np.pi * k / n) for k in range(n)]
    return [step(coeffs, 0j, z, y, 1e-10, 1e-10)[0] for z in ends]


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--segments", type=int, default=64)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--degree", type=int, default=4)
    args = p.parse_args(argv)

    found = backends()
    q = PolynomialQD(args.degree)
    results = {}
    print(f"{'backend':<8} {'segments [s]':>13} {'tips [s]':>10}")
    for name, step in found.items():
        t_seg, ys = best_of(lambda: segments(step, args.segments), args.repeat)
        t_tip, rep = best_of(lambda: tip_estimates(q, backend=name), args.repeat)
        results[name] = (t_seg, t_tip, ys, rep)
        print(f"{name:<8} {t_seg:>13.4f} {t_tip:>10.4f}")
    if "cython" in results:
        py, cy = results["python"], results["cython"]
        diff = max(float(np.max(np.abs(a - b))) for a, b in zip(py[2], cy[2]))
        print(f"speedup: segments x{py[0] / cy[0]:.1f}, tips x{py[1] / cy[1]:.1f}")
        print(f"max |python - cython| over segment endpoints: {diff:.2e}")
    else:
        print("compiled kernel not built; only the Python backend was timed")


if __name__ == "__main__":
    main()
