"""Kernel selection: compiled extension when available, numpy fallback otherwise.

Set ``PMANET_PURE=1`` to force the fallback (used by the benchmark and the
equivalence tests).
"""
import os

from . import _pykernels

BACKEND = "python"

if os.environ.get("PMANET_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
else:
    _impl = _pykernels

positions_at = _impl.positions_at
in_range_at = _impl.in_range_at
bfs_first_hops = _impl.bfs_first_hops
mpr_from_lists = _impl.mpr_from_lists

__all__ = ["BACKEND", "positions_at", "in_range_at", "bfs_first_hops", "mpr_from_lists"]
