"""Kernel selection: compiled extension when importable, NumPy otherwise.

Set ``SNEXTREMES_BACKEND=python`` to force the fallback.
"""
import os

from . import _fallback

BACKEND = "python"
kernels = _fallback

if os.environ.get("SNEXTREMES_BACKEND", "").lower() != "python":
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        kernels = _compiled
        BACKEND = "compiled"


def get_kernels(name=None):
    """Return the kernel module for ``name`` ('compiled'/'python'), default active."""
    if name is None:
        return kernels
    if name == "python":
        return _fallback
    if name == "compiled":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown backend {name!r}")
