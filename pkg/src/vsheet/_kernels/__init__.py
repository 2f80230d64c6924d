"""Kernel backend selection.

Prefers the compiled extension when importable; falls back to the numpy
implementation otherwise.  Set VSHEET_PURE_PYTHON=1 to force the fallback.
Both backends expose the same array API: branch_sqrt_table, elastic_table.
"""
import os

from . import _fallback

_impl = None
if os.environ.get("VSHEET_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _core as _impl
    except ImportError:
        _impl = None
if _impl is None:
    _impl = _fallback

USING_COMPILED = _impl is not _fallback
BACKEND = _impl.IMPL
branch_sqrt_table = _impl.branch_sqrt_table
elastic_table = _impl.elastic_table

fallback = _fallback
