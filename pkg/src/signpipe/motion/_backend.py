"""Picks the compiled spline kernels when built, else the NumPy fallback.

Set ``SIGNPIPE_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _spline_py

try:
    from . import _spline_ext
except ImportError:
    _spline_ext = None


def available() -> dict:
    backends = {"python": _spline_py}
    if _spline_ext is not None:
        backends["cython"] = _spline_ext
    return backends


if _spline_ext is not None and os.environ.get("SIGNPIPE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    kernels = _spline_ext
    NAME = "cython"
else:
    kernels = _spline_py
    NAME = "python"
