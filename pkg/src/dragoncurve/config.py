"""Process-wide numeric settings.

The coincidence tolerance and the kernel backend are read once from the
environment and can be changed at runtime:

``DRAGONCURVE_TOL``
    relative tolerance used by every predicate (default ``1e-9``).
``DRAGONCURVE_NO_NUMBA``
    set to ``1`` to force the pure-numpy intersection kernels.
"""

from __future__ import annotations

import os

DEFAULT_TOL = 1e-9

_tol = float(os.environ.get("DRAGONCURVE_TOL", DEFAULT_TOL))


def get_tol(tol: float | None = None) -> float:
    """Return ``tol`` if given, else the global tolerance."""
    if tol is None:
        return _tol
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol!r}")
    return float(tol)


def set_tol(tol: float) -> None:
    global _tol
    _tol = get_tol(tol)


def numba_requested() -> bool:
    return os.environ.get("DRAGONCURVE_NO_NUMBA", "0").strip().lower() not in ("1", "true", "yes")
