"""Kernel backend selection.

The compiled Cython extension is preferred when importable; the pure
NumPy/Python module is the fallback.  Set ``HYPOSOLVE_PURE=1`` to force the
fallback (used by the backend benchmark and parity tests).
"""

import os

from . import _kernels_py

if os.environ.get("HYPOSOLVE_PURE", "") == "1":
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        kernels = _kernels_py

BACKEND = kernels.BACKEND


def get_kernels(name=None):
    """Return a kernel module by name ("compiled" or "pure"); default active one.

    Raises ImportError if the compiled extension is requested but missing.
    """
    if name is None:
        return kernels
    if name == "pure":
        return _kernels_py
    if name == "compiled":
        from . import _kernels  # type: ignore[attr-defined]
        return _kernels
    raise ValueError(f"unknown backend {name!r}")
