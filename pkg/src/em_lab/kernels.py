"""Kernel selection: the compiled extension if it imports, else pure Python.

Set ``EM_LAB_PURE=1`` to force the pure-Python kernels.
"""

from __future__ import annotations

import os
from math import comb

from . import _kernels_py

_compiled = None
if os.environ.get("EM_LAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"

_INT64_LIMIT = 2 ** 62


def fundamental_counts(colors, strict, table) -> list[int]:
    width = len(table[0]) if len(table) else 0
    n = len(colors)
    # the compiled kernel counts in int64; huge sequence spaces take the exact path
    if _compiled is not None and comb(width + n, n) < _INT64_LIMIT:
        return _compiled.fundamental_counts(colors, strict, table)
    return _kernels_py.fundamental_counts(colors, strict, table)
