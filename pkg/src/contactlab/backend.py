"""Kernel backend selection.

The hot kernels in :mod:`contactlab._kernels` are compiled with numba when
available.  Set ``CONTACTLAB_BACKEND=numpy`` to force the pure NumPy/Python
fallback (same source, uncompiled), ``numba`` to require compilation, or
leave unset / ``auto`` to compile when numba imports cleanly.

The flag is read once at import time; kernels are bound when the package
loads, so the variable must be set before importing contactlab.
"""

from __future__ import annotations

import os

ENV_VAR = "CONTACTLAB_BACKEND"

try:
    from numba import njit as _njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _njit = None
    HAVE_NUMBA = False

_active: str | None = None


def active_backend() -> str:
    """The backend actually in use: 'numba' or 'numpy'."""
    global _active
    if _active is None:
        requested = os.environ.get(ENV_VAR, "auto").lower()
        if requested not in ("auto", "numba", "numpy"):
            raise ValueError(
                f"{ENV_VAR} must be 'auto', 'numba' or 'numpy', got {requested!r}")
        if requested == "numba" and not HAVE_NUMBA:
            raise RuntimeError(f"{ENV_VAR}=numba but numba is not importable")
        if requested == "numpy":
            _active = "numpy"
        else:
            _active = "numba" if HAVE_NUMBA else "numpy"
    return _active


def maybe_njit(fn):
    """Compile ``fn`` with numba on the numba backend, return it unchanged otherwise."""
    if active_backend() == "numba":
        return _njit(cache=True)(fn)
    return fn


def python_impl(fn):
    """The uncompiled source of a kernel (dispatcher or plain function)."""
    return getattr(fn, "py_func", fn)
