"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``LONGHAUL_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
if os.environ.get("LONGHAUL_PURE_PYTHON") != "1":
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
else:
    _impl = _pykernels

sssp = _impl.sssp
astar = _impl.astar

__all__ = ["BACKEND", "sssp", "astar"]
