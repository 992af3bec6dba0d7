"""BFS kernel selection: compiled extension when usable, else pure Python.

The compiled kernel packs an element into one 64-bit key, so it only
applies when width * bits_per_entry <= 63.  Set LOGDIAM_PURE=1 to force
the Python kernel (useful for benchmarking and debugging).
"""

from __future__ import annotations

import os

from . import _bfs_py


def _load_compiled():
    if os.environ.get("LOGDIAM_PURE"):
        return None
    try:
        from . import _bfs_cy  # built by setup.py when Cython is present

        return _bfs_cy
    except ImportError:
        return None


_COMPILED = _load_compiled()


def packable(q: int, width: int) -> bool:
    bits = max(1, (q - 1).bit_length())
    return width * bits <= 63


def compiled_available() -> bool:
    return _COMPILED is not None


def kernel_for(q: int, width: int):
    """The kernel module to use for elements of the given shape."""
    if _COMPILED is not None and packable(q, width):
        return _COMPILED
    return _bfs_py
