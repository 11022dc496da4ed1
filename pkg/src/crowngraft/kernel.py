"""Backend selection for the ODE stepper.

The compiled extension is used when it imports; setting the environment
variable ``CROWNGRAFT_PURE_PYTHON`` to a non-empty value other than ``0``
forces the pure-Python implementation.
"""
import os

from . import _kernel_py

BACKEND = "python"
integrate_segment = _kernel_py.integrate_segment

if os.environ.get("CROWNGRAFT_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _ode_kernel
    except ImportError:
        pass
    else:
        integrate_segment = _ode_kernel.integrate_segment
        BACKEND = "cython"


def backends() -> dict:
    """Every importable backend by name."""
    found = {"python": _kernel_py.integrate_segment}
    try:
        from . import _ode_kernel
    except ImportError:
        pass
    else:
        found["cython"] = _ode_kernel.integrate_segment
    return found
