"""Kernel backend selection.

The compiled extension is preferred when importable; setting
``XDMEV_PURE=1`` in the environment forces the pure-Python backend.
Both backends produce bit-identical integers, so the choice never
affects results, only speed. ``BACKEND`` names the active one.
"""

import os

from . import pure

try:
    from . import _cp_ext  # type: ignore[attr-defined]
except ImportError:  # extension not built; pure fallback
    _cp_ext = None

if _cp_ext is not None and os.environ.get("XDMEV_PURE", "") != "1":
    _active = _cp_ext
    BACKEND = "compiled"
else:
    _active = pure
    BACKEND = "pure"

compiled = _cp_ext

swap_out = _active.swap_out
round_trip_profit = _active.round_trip_profit
grid_scan = _active.grid_scan

__all__ = [
    "BACKEND",
    "compiled",
    "pure",
    "swap_out",
    "round_trip_profit",
    "grid_scan",
]
