"""Process-wide numerical tolerances.

``CROWNGRAFT_TOL`` in the environment overrides the projective/determinant
tolerance at import time; :func:`set_tolerances` changes it afterwards.
"""
import os
from contextlib import contextmanager
from dataclasses import dataclass, replace

ENV_TOL = "CROWNGRAFT_TOL"


@dataclass(frozen=True)
class Tolerances:
    proj: float = 1e-10    # projective equality of sphere points
    det: float = 1e-10     # |det - 1| after normalization
    circle: float = 1e-9   # |z| = 1 for polygon vertices
    ode_rtol: float = 1e-10
    ode_atol: float = 1e-10


def _from_env():
    raw = os.environ.get(ENV_TOL)
    if not raw:
        return Tolerances()
    eps = float(raw)
    return Tolerances(proj=eps, det=eps)


_current = _from_env()


def get_tolerances():
    return _current


def set_tolerances(**kwargs):
    global _current
    _current = replace(_current, **kwargs)
    return _current


@contextmanager
def tolerances(**kwargs):
    global _current
    saved = _current
    _current = replace(_current, **kwargs)
    try:
        yield _current
    finally:
        _current = saved
