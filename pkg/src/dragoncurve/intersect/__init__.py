"""Self-intersection detection for polylines.

Two segments are tested with one shared predicate:

* a pair whose bounding boxes, grown by ``eps``, are disjoint never meets;
* consecutive segments ``i, i+1`` share a vertex and only count if one
  folds back onto the other;
* otherwise the pair is a ``crossing`` when each segment's endpoints are
  strictly more than ``eps`` on opposite sides of the other, an ``overlap``
  when they are collinear within ``eps`` and share more than ``eps`` of
  length, and a ``touch_at_vertex`` when the closest endpoint-to-segment
  distance is at most ``eps``.

``eps`` is ``tol`` times the longer segment.  :func:`brute_force` tests all
pairs; :func:`sweep` sorts segments by their left end and only tests pairs
whose x-ranges overlap, so both report the same events.

Pair loops run in numba-compiled kernels when numba is importable and
``DRAGONCURVE_NO_NUMBA`` is not set; the pure-numpy kernels compute the same
arithmetic and serve as fallback.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from ..config import get_tol, numba_requested
from ..ifs import MAX_ORDER, ModelParams, Polyline, curve, make_params
from . import _numpy_kernels

__all__ = [
    "IntersectionEvent",
    "IntersectionReport",
    "FirstBadOrder",
    "SizeGuardError",
    "brute_force",
    "sweep",
    "first_bad_order",
    "cross_intersections",
    "backend",
    "set_backend",
    "BRUTE_MAX_SEGMENTS",
]

BRUTE_MAX_SEGMENTS = 1 << 13
KINDS = {1: "crossing", 2: "touch_at_vertex", 3: "overlap"}

try:
    if not numba_requested():
        raise ImportError("disabled by DRAGONCURVE_NO_NUMBA")
    from . import _numba_kernels
except ImportError:  # pragma: no cover - depends on environment
    _numba_kernels = None

_backend = "numba" if _numba_kernels is not None else "numpy"


def backend() -> str:
    """Name of the active kernel backend, ``"numba"`` or ``"numpy"``."""
    return _backend


def _check_backend(name: str) -> None:
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and _numba_kernels is None:
        raise RuntimeError("numba kernels are unavailable")


def set_backend(name: str) -> None:
    global _backend
    _check_backend(name)
    _backend = name


def _kernels(name: str | None = None):
    name = name or _backend
    _check_backend(name)
    return _numba_kernels if name == "numba" else _numpy_kernels


class SizeGuardError(ValueError):
    """Polyline too large for the quadratic oracle."""


@dataclass(frozen=True)
class IntersectionEvent:
    seg_i: int
    seg_j: int
    location: complex
    kind: str
    gap: float

    def to_dict(self) -> dict:
        return {
            "seg_i": self.seg_i,
            "seg_j": self.seg_j,
            "location": {"re": self.location.real, "im": self.location.imag},
            "kind": self.kind,
            "gap": self.gap,
        }


@dataclass(frozen=True)
class IntersectionReport:
    order: int | None
    xi: float | None
    events: list[IntersectionEvent]
    engine: str
    backend: str
    n_segments: int
    elapsed_s: float = field(default=0.0, compare=False)

    @property
    def self_intersective(self) -> bool:
        return bool(self.events)

    def pairs(self) -> list[tuple[int, int, str]]:
        return [(e.seg_i, e.seg_j, e.kind) for e in self.events]

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "schema": 1,
            "order": self.order,
            "xi": self.xi,
            "engine": self.engine,
            "n_segments": self.n_segments,
            "self_intersective": self.self_intersective,
            "events": [e.to_dict() for e in self.events],
        }
        if timing:
            d["backend"] = self.backend
            d["elapsed_s"] = self.elapsed_s
        return d

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), indent=2)


def _as_vertices(poly) -> tuple[np.ndarray, int | None, float | None]:
    if isinstance(poly, Polyline):
        return np.asarray(poly.vertices, dtype=complex), poly.order, poly.xi
    v = np.asarray(poly, dtype=complex)
    if v.ndim != 1:
        raise ValueError("expected a 1-d array of complex vertices")
    return v, None, None


def _prepare(v: np.ndarray):
    if len(v) < 3:
        raise ValueError("need at least two segments")
    if not np.isfinite(v).all():
        raise ValueError("non-finite vertex")
    xs = np.ascontiguousarray(v.real, dtype=np.float64)
    ys = np.ascontiguousarray(v.imag, dtype=np.float64)
    lengths = np.abs(np.diff(v))
    if not (lengths > 0).all():
        raise ValueError("polyline has a zero-length segment")
    return xs, ys, lengths


def _describe(v: np.ndarray, i: np.ndarray, j: np.ndarray, code: np.ndarray, tol: float) -> list[IntersectionEvent]:
    """Location and gap of each hit, from the same formulas for every engine."""
    if len(i) == 0:
        return []
    order = np.lexsort((j, i))
    i, j, code = i[order], j[order], code[order]
    a, b, c, d = v[i], v[i + 1], v[j], v[j + 1]
    u, w = b - a, d - c

    def cr(p, q):
        return p.real * q.imag - p.imag * q.real

    def nearest(p, s, e):
        t = np.clip(((p - s) * np.conj(e - s)).real / np.abs(e - s) ** 2, 0.0, 1.0)
        return s + t * (e - s)

    o3 = cr(w, a - c) / np.abs(w)
    o4 = cr(w, b - c) / np.abs(w)
    with np.errstate(divide="ignore", invalid="ignore"):
        cross_loc = a + (o3 / (o3 - o4)) * u
    cand_p = np.stack([a, b, c, d])
    cand_q = np.stack([nearest(a, c, d), nearest(b, c, d), nearest(c, a, b), nearest(d, a, b)])
    dist = np.abs(cand_p - cand_q)
    k = dist.argmin(axis=0)
    cols = np.arange(len(i))
    touch_loc = 0.5 * (cand_p[k, cols] + cand_q[k, cols])
    gap = dist[k, cols]
    lu = np.abs(u)
    e = u / lu
    tc = ((c - a) * np.conj(e)).real
    td = ((d - a) * np.conj(e)).real
    lo = np.maximum(0.0, np.minimum(tc, td))
    hi = np.minimum(lu, np.maximum(tc, td))
    overlap_loc = a + 0.5 * (lo + hi) * e

    events = []
    for n in range(len(i)):
        kind = KINDS[int(code[n])]
        if kind == "crossing":
            loc, g = cross_loc[n], 0.0
        elif kind == "overlap":
            loc, g = overlap_loc[n], 0.0
        else:
            loc, g = touch_loc[n], float(gap[n])
        events.append(IntersectionEvent(int(i[n]), int(j[n]), complex(loc), kind, g))
    return events


def _run(engine: str, v: np.ndarray, tol: float, split: int, backend_name: str | None):
    xs, ys, lengths = _prepare(v)
    kern = _kernels(backend_name)
    if engine == "brute":
        return kern.brute_pairs(xs, ys, lengths, tol, split)
    xmin = np.minimum(xs[:-1], xs[1:])
    xmax = np.maximum(xs[:-1], xs[1:])
    order = np.argsort(xmin, kind="stable").astype(np.int64)
    # The pair test grows boxes by tol * (longer segment); the window must cover that.
    window = tol * float(lengths.max())
    return kern.sweep_pairs(xs, ys, lengths, tol, split, order, xmin, xmax, window)


def _report(engine, poly, tol, split, max_segments, backend_name) -> IntersectionReport:
    tol = get_tol(tol)
    v, order, xi = _as_vertices(poly)
    n = len(v) - 1
    if engine == "brute" and n > max_segments:
        raise SizeGuardError(f"{n} segments exceed the brute-force limit of {max_segments}")
    t0 = time.perf_counter()
    i, j, code = _run(engine, v, tol, split, backend_name)
    elapsed = time.perf_counter() - t0
    return IntersectionReport(
        order, xi, _describe(v, np.asarray(i), np.asarray(j), np.asarray(code), tol), engine,
        backend_name or _backend, n, elapsed,
    )


def brute_force(
    poly, tol: float | None = None, max_segments: int = BRUTE_MAX_SEGMENTS, split: int = -1, backend: str | None = None
) -> IntersectionReport:
    """Test every segment pair.  Raises :class:`SizeGuardError` above ``max_segments``.

    With ``split >= 0`` only pairs ``i < split <= j`` are tested and
    consecutive segments get no exemption (intersection of two sub-paths).
    """
    return _report("brute", poly, tol, split, max_segments, backend)


def sweep(poly, tol: float | None = None, split: int = -1, backend: str | None = None) -> IntersectionReport:
    """Same events as :func:`brute_force`, testing only pairs with overlapping x-ranges."""
    return _report("sweep", poly, tol, split, 0, backend)


@dataclass(frozen=True)
class FirstBadOrder:
    order: int
    events: list[IntersectionEvent]


def first_bad_order(
    xi: float, k_max: int, tol: float | None = None, engine: str = "sweep", backend: str | None = None
) -> FirstBadOrder | None:
    """Smallest ``k <= k_max`` for which ``D_k`` meets itself, or ``None``."""
    if not 1 <= k_max <= MAX_ORDER:
        raise ValueError(f"k_max must be in [1, {MAX_ORDER}]")
    p = make_params(xi)
    run = sweep if engine == "sweep" else brute_force
    for k in range(1, k_max + 1):
        rep = run(curve(p, k), tol, backend=backend)
        if rep.events:
            return FirstBadOrder(k, rep.events)
    return None


def cross_intersections(
    p: ModelParams, k: int, tol: float | None = None, engine: str = "sweep", backend: str | None = None
) -> IntersectionReport:
    """Contacts between ``f1(D_k)`` and ``f2(D_k)``.

    ``D_{k+1}`` is ``f1(D_k)`` followed by ``f2(D_k)`` walked backwards, so
    this tests pairs across the split at segment ``2^k``; the two halves
    always share the vertex ``alpha``.
    """
    poly = curve(p, k + 1)
    run = sweep if engine == "sweep" else brute_force
    rep = run(poly, tol, split=1 << k, backend=backend)
    return IntersectionReport(k, p.xi, rep.events, rep.engine, rep.backend, rep.n_segments, rep.elapsed_s)
