"""Select the compiled kernel core or its NumPy fallback at import time.

Set ``AXIVORT_BACKEND=python`` or ``AXIVORT_BACKEND=compiled`` to force a
choice (the latter raises if the extension is missing).
"""

from __future__ import annotations

import os

from . import _kernels_py

_FORCE = os.environ.get("AXIVORT_BACKEND", "auto").lower()

if _FORCE == "python":
    _impl = _kernels_py
    _BACKEND = "python"
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[no-redef]

        _BACKEND = "compiled"
    except ImportError:
        if _FORCE == "compiled":
            raise
        _impl = _kernels_py
        _BACKEND = "python"


def backend_name() -> str:
    return _BACKEND


def get_impl(name: str | None = None):
    """Return the active kernel module, or a specific one by name."""
    if name in (None, "auto"):
        return _impl
    if name == "python":
        return _kernels_py
    if name == "compiled":
        from . import _kernels_cy

        return _kernels_cy
    raise ValueError(f"unknown backend {name!r}")


bs_profiles_row = _impl.bs_profiles_row
naive_velocity = _impl.naive_velocity
