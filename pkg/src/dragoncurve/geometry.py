"""Planar primitives on the complex plane.

Points are Python ``complex`` numbers (``re`` is x, ``im`` is y).  Angles
follow the convention ``angle(a, b, c) = arg((c - b) / (a - b))`` in
``(-pi, pi]``.  A convex polygon is given by vertices ``v_1 .. v_N`` whose
interior angles ``angle(v_{n-1}, v_n, v_{n+1})`` all lie strictly in
``(0, pi)``; it is the intersection of the closed left half-planes
``V+(v_{n+1}, v_n)``.  Note that with this angle convention a valid polygon
is traversed clockwise when drawn with the y axis pointing up.

All predicates take a relative tolerance ``tol``; ``None`` means the global
default from :mod:`dragoncurve.config`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .config import get_tol

__all__ = [
    "GeometryError",
    "DegenerateError",
    "ConvexityError",
    "Side",
    "as_point",
    "cross",
    "dot",
    "angle",
    "Segment",
    "DirectedLine",
    "HalfPlane",
    "ConvexPolygon",
    "make_polygon",
    "side",
    "contains_point",
    "contains_polygon",
    "segment_intersection",
    "SegmentIntersection",
    "dist_point_line",
    "polygon_edges",
    "point_depths",
    "line_intersection",
]


class GeometryError(ValueError):
    """Invalid geometric input."""


class DegenerateError(GeometryError):
    """Two points that must differ coincide within tolerance."""


class ConvexityError(GeometryError):
    """A vertex list does not describe a strictly convex polygon."""

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


class Side(str, Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def as_point(z) -> complex:
    """Coerce ``z`` (complex, real, or an ``(x, y)`` pair) to a finite complex."""
    if isinstance(z, (tuple, list)) and len(z) == 2:
        z = complex(float(z[0]), float(z[1]))
    else:
        z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise GeometryError(f"non-finite point {z!r}")
    return z


def cross(u: complex, v: complex) -> float:
    """z-component of the cross product of ``u`` and ``v``."""
    return u.real * v.imag - u.imag * v.real


def dot(u: complex, v: complex) -> float:
    return u.real * v.real + u.imag * v.imag


def _distinct(a: complex, b: complex, tol: float) -> bool:
    return abs(a - b) > tol * max(abs(a), abs(b)) and a != b


def angle(a, b, c, tol: float | None = None) -> float:
    """Signed angle at ``b`` turning from ``a`` to ``c``, in ``(-pi, pi]``.

    Raises :class:`DegenerateError` if ``a`` or ``c`` coincides with ``b``.
    """
    tol = get_tol(tol)
    a, b, c = as_point(a), as_point(b), as_point(c)
    if not _distinct(a, b, tol) or not _distinct(c, b, tol):
        raise DegenerateError(f"angle undefined at coincident points {a}, {b}, {c}")
    u = a - b
    v = c - b
    cr = cross(u, v)
    dt = dot(u, v)
    # Collinear and opposite: return exactly pi rather than risk atan2(-0., -1) = -pi.
    if abs(cr) <= tol * abs(u) * abs(v) and dt < 0:
        return math.pi
    return math.atan2(cr, dt)


@dataclass(frozen=True)
class Segment:
    """Closed segment ``[a, b]``."""

    a: complex
    b: complex

    def __post_init__(self):
        a, b = as_point(self.a), as_point(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if not _distinct(a, b, get_tol()):
            raise DegenerateError(f"degenerate segment [{a}, {b}]")

    @property
    def length(self) -> float:
        return abs(self.b - self.a)


@dataclass(frozen=True)
class DirectedLine:
    """The line through ``a`` and ``b`` oriented from ``a`` to ``b``."""

    a: complex
    b: complex

    def __post_init__(self):
        a, b = as_point(self.a), as_point(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if not _distinct(a, b, get_tol()):
            raise DegenerateError(f"directed line through coincident points {a}, {b}")

    def signed_distance(self, z: complex) -> float:
        """Positive on the left of the line, negative on the right."""
        d = self.b - self.a
        return cross(d, as_point(z) - self.a) / abs(d)


@dataclass(frozen=True)
class HalfPlane:
    """``V+`` (left, ``left=True``) or ``V-`` (right) of a directed line."""

    line: DirectedLine
    left: bool = True
    closed: bool = False

    def contains(self, z, tol: float | None = None) -> bool:
        s = side(self, z, tol)
        if s is Side.BOUNDARY:
            return self.closed
        return s is Side.INSIDE


def side(hp: HalfPlane, z, tol: float | None = None) -> Side:
    """Classify ``z`` against a half-plane using the signed-area predicate.

    The boundary band is ``tol * max(|b - a|, |z - a|)`` wide.
    """
    tol = get_tol(tol)
    z = as_point(z)
    a, b = hp.line.a, hp.line.b
    d = b - a
    w = z - a
    dist = cross(d, w) / abs(d)
    if abs(dist) <= tol * max(abs(d), abs(w)):
        return Side.BOUNDARY
    inside = dist > 0 if hp.left else dist < 0
    return Side.INSIDE if inside else Side.OUTSIDE


def dist_point_line(p, line: DirectedLine) -> float:
    """Perpendicular distance from ``p`` to ``line``."""
    return abs(line.signed_distance(p))


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Strictly convex polygon; use :func:`make_polygon` to build a validated one.

    ``labels`` optionally names each vertex (e.g. ``"f_112(z0)"``).
    """

    vertices: tuple[complex, ...]
    labels: tuple[str, ...] | None = None
    name: str = ""

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.vertices, dtype=complex)

    def angles(self, tol: float | None = None) -> list[float]:
        v = self.vertices
        n = len(v)
        return [angle(v[i - 1], v[i], v[(i + 1) % n], tol) for i in range(n)]

    def diameter(self) -> float:
        v = self.array
        return float(np.abs(v[:, None] - v[None, :]).max())

    def mapped(self, fn, name: str | None = None, labels: Sequence[str] | None = None) -> "ConvexPolygon":
        """Image under an orientation-preserving similarity ``fn``.

        Similarities preserve every angle, so the image of a valid polygon is
        valid and no re-validation is done (it would only measure rounding
        noise for very small images).
        """
        verts = tuple(complex(fn(v)) for v in self.vertices)
        return ConvexPolygon(verts, tuple(labels) if labels is not None else None, name if name is not None else self.name)

    def contains(self, z, tol: float | None = None) -> bool:
        return contains_point(self, z, tol)


def make_polygon(
    vertices: Iterable,
    labels: Sequence[str] | None = None,
    name: str = "",
    tol: float | None = None,
    collapse: bool = False,
) -> ConvexPolygon:
    """Validate a vertex list and return the polygon.

    Every interior angle must lie strictly in ``(0, pi)``; otherwise
    :class:`ConvexityError` names the first offending index.  A list in the
    opposite orientation is rejected, never reversed.

    With ``collapse=True`` consecutive vertices closer than ``tol`` times the
    polygon scale are merged first (some quadrilaterals degenerate into
    triangles at special angles).
    """
    tol = get_tol(tol)
    verts = [as_point(v) for v in vertices]
    labs = list(labels) if labels is not None else None
    if labs is not None and len(labs) != len(verts):
        raise GeometryError("labels and vertices differ in length")
    if collapse and verts:
        scale = max(abs(v) for v in verts) or 1.0
        keep_v, keep_l = [], []
        for i, v in enumerate(verts):
            if keep_v and abs(v - keep_v[-1]) <= tol * scale:
                continue
            keep_v.append(v)
            if labs is not None:
                keep_l.append(labs[i])
        while len(keep_v) > 1 and abs(keep_v[0] - keep_v[-1]) <= tol * scale:
            keep_v.pop()
            if labs is not None:
                keep_l.pop()
        verts = keep_v
        labs = keep_l if labs is not None else None
    n = len(verts)
    if n < 3:
        raise GeometryError(f"polygon needs at least 3 vertices, got {n}")
    for i in range(n):
        try:
            a = angle(verts[i - 1], verts[i], verts[(i + 1) % n], tol)
        except DegenerateError as exc:
            raise ConvexityError(f"{name or 'polygon'}: vertex {i} coincides with a neighbour", i) from exc
        if not (0.0 < a < math.pi) or math.pi - a <= tol or a <= tol:
            raise ConvexityError(
                f"{name or 'polygon'}: interior angle {a:.6g} at vertex {i} not in (0, pi)", i
            )
    return ConvexPolygon(tuple(verts), tuple(labs) if labs is not None else None, name)


def polygon_edges(p: ConvexPolygon) -> tuple[np.ndarray, np.ndarray]:
    """Edge bases ``v_{n+1}`` and unit directions of ``v_n - v_{n+1}``.

    A point ``z`` is inside iff ``cross(dir_n, z - base_n) >= 0`` for all n.
    """
    v = p.array
    base = np.roll(v, -1)
    d = v - base
    return base, d / np.abs(d)


def point_depths(p: ConvexPolygon, z) -> np.ndarray:
    """Signed depth of each point: min distance to the edge lines, positive inside."""
    base, unit = polygon_edges(p)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    w = z[:, None] - base[None, :]
    cr = unit.real[None, :] * w.imag - unit.imag[None, :] * w.real
    return cr.min(axis=1)


def contains_point(p: ConvexPolygon, z, tol: float | None = None) -> bool:
    """True iff ``z`` lies in every closed left half-plane of the edges.

    The boundary band of each edge is ``tol`` times the local scale, as in
    :func:`side`.
    """
    tol = get_tol(tol)
    z = as_point(z)
    v = p.vertices
    n = len(v)
    for i in range(n):
        a = v[(i + 1) % n]
        d = v[i] - a
        w = z - a
        if cross(d, w) / abs(d) < -tol * max(abs(d), abs(w)):
            return False
    return True


def contains_polygon(outer: ConvexPolygon, inner: ConvexPolygon, tol: float | None = None) -> bool:
    """Vertex-wise inclusion test, sound because ``outer`` is convex."""
    return all(contains_point(outer, v, tol) for v in inner.vertices)


@dataclass(frozen=True)
class SegmentIntersection:
    """Result of :func:`segment_intersection`; ``kind`` is empty, point or overlap."""

    kind: str
    point: complex | None = None
    segment: tuple[complex, complex] | None = None


def _point_segment_distance(p: complex, a: complex, b: complex) -> tuple[float, float]:
    d = b - a
    t = dot(p - a, d) / dot(d, d)
    t = min(1.0, max(0.0, t))
    return abs(a + t * d - p), t


def segment_intersection(s: Segment, t: Segment, tol: float | None = None) -> SegmentIntersection:
    """Classify the intersection of two closed segments.

    Distances are compared with ``eps = tol * max(len(s), len(t))``.  A
    proper crossing returns its point, a collinear overlap longer than
    ``eps`` returns the shared sub-segment (ordered along ``s``), and any
    other contact within ``eps`` returns the nearest point of ``t`` to the
    closest endpoint.
    """
    tol = get_tol(tol)
    a, b, c, d = s.a, s.b, t.a, t.b
    eps = tol * max(s.length, t.length)
    u = b - a
    v = d - c
    lu, lv = abs(u), abs(v)
    o1 = cross(u, c - a) / lu
    o2 = cross(u, d - a) / lu
    o3 = cross(v, a - c) / lv
    o4 = cross(v, b - c) / lv
    if ((o1 > eps and o2 < -eps) or (o1 < -eps and o2 > eps)) and (
        (o3 > eps and o4 < -eps) or (o3 < -eps and o4 > eps)
    ):
        r = o3 / (o3 - o4)
        return SegmentIntersection("point", a + r * u)
    if abs(o1) <= eps and abs(o2) <= eps:
        # c and d lie on the line of s: project onto it.
        tc = dot(c - a, u) / lu
        td = dot(d - a, u) / lu
        lo = max(0.0, min(tc, td))
        hi = min(lu, max(tc, td))
        if hi - lo > eps:
            e = u / lu
            return SegmentIntersection("overlap", segment=(a + lo * e, a + hi * e))
    best = min(
        (_point_segment_distance(a, c, d), a),
        (_point_segment_distance(b, c, d), b),
        (_point_segment_distance(c, a, b), c),
        (_point_segment_distance(d, a, b), d),
        key=lambda item: item[0][0],
    )
    if best[0][0] <= eps:
        return SegmentIntersection("point", best[1])
    return SegmentIntersection("empty")



def line_intersection(l1: DirectedLine, l2: DirectedLine, tol: float | None = None) -> complex:
    """Intersection point of two non-parallel lines."""
    tol = get_tol(tol)
    u = l1.b - l1.a
    v = l2.b - l2.a
    den = cross(u, v)
    if abs(den) <= tol * abs(u) * abs(v):
        raise DegenerateError("lines are parallel")
    t = cross(l2.a - l1.a, v) / den
    return l1.a + t * u
