"""Certificate polygons for the open set condition.

Every region is a :class:`~dragoncurve.geometry.ConvexPolygon` whose
vertices carry symbolic labels such as ``"f_112(z0)"``.  The building block
is the quadrilateral

    A1 = P(z0, f_1(z0), f_112(z0), f_12(z0))

with ``z0 = f_(2211)^inf``; ``A_m`` is its image under ``f_1^(m-1)``.  The
infinite polygon ``C`` is the union of all ``A_n``, the pentagon ``B`` and
all ``f_2(A_n)``; only finite truncations are materialized here.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .config import get_tol
from .geometry import (
    ConvexPolygon,
    DegenerateError,
    DirectedLine,
    angle,
    contains_point,
    contains_polygon,
    line_intersection,
    make_polygon,
)
from .ifs import ModelParams, Similarity, f1_power, map_of_word, named_map

__all__ = [
    "RegionError",
    "AnchorPoints",
    "RegionSet",
    "Piece",
    "TruncatedC",
    "anchors",
    "build_regions",
    "region_A",
    "region_A_tilde",
    "build_Ck",
    "build_truncation",
    "contains_point_union",
    "regions_to_json",
]


class RegionError(ValueError):
    """A region failed to construct, or two constructions of a point disagree."""


def _require_range(p: ModelParams, closed_right: bool = True) -> None:
    ok = 0.0 < p.xi <= math.pi / 4 if closed_right else 0.0 < p.xi < math.pi / 4
    if not ok:
        raise RegionError(f"regions need 0 < xi < pi/4, got xi = {p.xi!r}")


def point(p: ModelParams, word: str) -> complex:
    """``f_word(z0)``."""
    return map_of_word(p, word)(p.z0)


@dataclass(frozen=True)
class AnchorPoints:
    p1: complex
    p2: complex
    p3: complex
    q: complex


def anchors(p: ModelParams, check_tol: float = 1e-10) -> AnchorPoints:
    """The points ``p1, p2, p3, q`` from their closed forms.

    ``p1`` and ``p2`` are recomputed as intersections of the defining lines,
    ``p3`` and ``q`` are checked against their defining angles; any
    disagreement above ``check_tol`` raises :class:`RegionError`.
    """
    _require_range(p)
    a2 = p.abs2
    a = p.alpha
    z0 = p.z0
    q = -(a.conjugate() / a) * z0
    p1 = (a - a.conjugate() * a2) * z0
    p2 = -a2 * z0
    p3 = p2 + a2 / (1.0 - a2)

    f1z0, f11z0, f111z0 = point(p, "1"), point(p, "11"), point(p, "111")
    try:
        p1_line = line_intersection(DirectedLine(f1z0, z0), DirectedLine(f111z0, f11z0))
        p2_line = line_intersection(DirectedLine(f111z0, f11z0), DirectedLine(z0, 0j))
    except DegenerateError as exc:
        # The defining lines meet at angle ~xi; below ~1e-9 they are parallel in double precision.
        raise RegionError(f"xi = {p.xi!r} is too small to resolve the anchor construction") from exc
    scale = abs(z0)
    for name, closed, built in (("p1", p1, p1_line), ("p2", p2, p2_line)):
        if abs(closed - built) > check_tol * scale:
            raise RegionError(f"{name}: closed form {closed} disagrees with construction {built}")
    checks = (
        ("p3", angle(z0, p2, p3), p.xi),
        ("p3", angle(p3, z0, p2), p.xi),
        ("q", angle(0j, z0, q), p.xi),
        ("q", angle(z0, q, 0j), p.xi),
    )
    for name, got, want in checks:
        if abs(got - want) > check_tol:
            raise RegionError(f"{name}: defining angle {got} differs from xi = {want}")
    return AnchorPoints(p1=p1, p2=p2, p3=p3, q=q)


@dataclass(frozen=True)
class RegionSet:
    xi: float
    z0: complex
    anchors: AnchorPoints
    A1: ConvexPolygon
    A1_tilde: ConvexPolygon
    A0: ConvexPolygon
    B: ConvexPolygon
    B_tilde: ConvexPolygon
    S: ConvexPolygon
    Sp: ConvexPolygon
    Spp: ConvexPolygon
    W: ConvexPolygon
    T: ConvexPolygon
    Tp: ConvexPolygon

    NAMES = ("A1", "A1_tilde", "A0", "B", "B_tilde", "S", "Sp", "Spp", "W", "T", "Tp")

    def as_dict(self) -> dict[str, ConvexPolygon]:
        return {name: getattr(self, name) for name in self.NAMES}


def _poly(name: str, pairs, tol=None) -> ConvexPolygon:
    labels = [lab for lab, _ in pairs]
    verts = [z for _, z in pairs]
    try:
        return make_polygon(verts, labels=labels, name=name, tol=tol)
    except ValueError as exc:
        raise RegionError(f"region {name}: {exc}") from exc


def _base_A1(p: ModelParams) -> ConvexPolygon:
    return _poly("A1", [("z0", p.z0), ("f_1(z0)", point(p, "1")), ("f_112(z0)", point(p, "112")), ("f_12(z0)", point(p, "12"))])


def _base_B(p: ModelParams) -> ConvexPolygon:
    return _poly(
        "B",
        [
            ("z0", p.z0),
            ("f_12(z0)", point(p, "12")),
            ("f_2(z0)", point(p, "2")),
            ("f_212(z0)", point(p, "212")),
            ("f_221(z0)", point(p, "221")),
        ],
    )


def _base_B_tilde(p: ModelParams, an: AnchorPoints) -> ConvexPolygon:
    return _poly(
        "B_tilde",
        [
            ("z0", p.z0),
            ("f_12(p3)", map_of_word(p, "12")(an.p3)),
            ("f_12(z0)", point(p, "12")),
            ("f_2(z0)", point(p, "2")),
            ("f_212(z0)", point(p, "212")),
            ("f_221(z0)", point(p, "221")),
        ],
    )


def build_regions(p: ModelParams) -> RegionSet:
    """Construct every named certificate region at ``p`` (``0 < xi < pi/4``)."""
    _require_range(p, closed_right=False)
    an = anchors(p)
    z0 = p.z0
    f1z0, f11z0 = point(p, "1"), point(p, "11")
    R = named_map(p, "reflectR")
    tau = named_map(p, "tau")
    psi = named_map(p, "psi")
    A1 = _base_A1(p)
    B = _base_B(p)
    A0 = region_A(p, 0, A1)
    regions = RegionSet(
        xi=p.xi,
        z0=z0,
        anchors=an,
        A1=A1,
        A1_tilde=_poly("A1_tilde", [("0", 0j), ("z0", z0), ("f_1(z0)", f1z0)]),
        A0=A0,
        B=B,
        B_tilde=_base_B_tilde(p, an),
        S=_poly("S", [("z0", z0), ("p1", an.p1), ("p2", an.p2), ("p3", an.p3)]),
        Sp=_poly("Sp", [("z0", z0), ("f_1(z0)", f1z0), ("f_11(z0)", f11z0), ("p2", an.p2), ("p3", an.p3)]),
        Spp=_poly(
            "Spp",
            [
                ("z0", z0),
                ("f_1(z0)", f1z0),
                ("f_11(z0)", f11z0),
                ("p2", an.p2),
                ("R(f_11(z0))", R(f11z0)),
                ("R(f_1(z0))", R(f1z0)),
            ],
        ),
        W=_poly("W", [("0", 0j), ("z0", z0), ("q", an.q)]),
        T=_poly("T", [("p1", an.p1), ("p2", an.p2), ("tau(p3)", tau(an.p3)), ("tau(z0)", tau(z0))]),
        Tp=_poly("Tp", [("p1", an.p1), ("p2", an.p2), ("psi(p2)", psi(an.p2)), ("psi(p3)", psi(an.p3))]),
    )
    if not contains_polygon(A0, B):
        raise RegionError("B is not contained in A0")
    return regions


def _power_label(m: int) -> str:
    if m == 0:
        return ""
    return f"f_1^{m}"


def region_A(p: ModelParams, m: int, A1: ConvexPolygon | None = None) -> ConvexPolygon:
    """``A_m = f_1^(m-1)(A1)`` for any integer ``m`` (negative powers are inverses)."""
    A1 = A1 if A1 is not None else _base_A1(p)
    fm = f1_power(p, m - 1)
    pre = _power_label(m - 1)
    labels = [f"{pre}({lab})" if pre else lab for lab in A1.labels]
    return A1.mapped(fm, name=f"A{m}", labels=labels)


def region_A_tilde(p: ModelParams, m: int) -> ConvexPolygon:
    """``A~_m = f_1^(m-1)(P(0, z0, f_1(z0)))``."""
    base = _poly("A1_tilde", [("0", 0j), ("z0", p.z0), ("f_1(z0)", point(p, "1"))])
    return base.mapped(f1_power(p, m - 1), name=f"A{m}_tilde", labels=base.labels)


@dataclass(frozen=True, eq=False)
class Piece:
    """A truncation piece: ``sim`` applied to the base polygon ``A1`` or ``B``."""

    name: str
    polygon: ConvexPolygon
    sim: Similarity
    base: str


@dataclass(frozen=True, eq=False)
class TruncatedC:
    """A finite union of convex pieces approximating ``C``."""

    params: ModelParams
    pieces: tuple[Piece, ...]
    A1: ConvexPolygon
    B: ConvexPolygon
    depth: int = 0
    B_tilde: ConvexPolygon | None = field(default=None)

    @property
    def names(self) -> list[str]:
        return [pc.name for pc in self.pieces]

    @property
    def polygons(self) -> list[ConvexPolygon]:
        return [pc.polygon for pc in self.pieces]

    def __len__(self) -> int:
        return len(self.pieces)


def _pieces(p: ModelParams, A1: ConvexPolygon, B: ConvexPolygon, n_a: int, n_f2a: int) -> tuple[Piece, ...]:
    f2 = p.f2
    out = []
    powers = [f1_power(p, n - 1) for n in range(1, max(n_a, n_f2a) + 1)]
    for n in range(1, n_a + 1):
        sim = powers[n - 1]
        out.append(Piece(f"A{n}", A1.mapped(sim, name=f"A{n}"), sim, "A1"))
    out.append(Piece("B", B, Similarity(1 + 0j, 0j), "B"))
    for n in range(1, n_f2a + 1):
        sim = f2 @ powers[n - 1]
        out.append(Piece(f"f2(A{n})", A1.mapped(sim, name=f"f2(A{n})"), sim, "A1"))
    return tuple(out)


def build_Ck(p: ModelParams, k: int) -> TruncatedC:
    """``C_k``: pieces ``A1 .. A_{k-1}``, ``B``, ``f2(A1) .. f2(A_{k-2})``."""
    if k < 2:
        raise ValueError(f"C_k is defined for k >= 2, got {k}")
    _require_range(p)
    A1, B = _base_A1(p), _base_B(p)
    return TruncatedC(p, _pieces(p, A1, B, k - 1, k - 2), A1, B, depth=k)


def build_truncation(p: ModelParams, n_max: int) -> TruncatedC:
    """Depth-``n_max`` truncation: ``A1 .. A_{n_max}``, ``B``, ``f2(A1) .. f2(A_{n_max-1})``."""
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    _require_range(p)
    A1, B = _base_A1(p), _base_B(p)
    return TruncatedC(p, _pieces(p, A1, B, n_max, n_max - 1), A1, B, depth=n_max, B_tilde=_base_B_tilde(p, anchors(p)))


def contains_point_union(c: TruncatedC, z, tol: float | None = None) -> bool:
    """True iff ``z`` lies in some piece (closed test)."""
    tol = get_tol(tol)
    return any(contains_point(pc.polygon, z, tol) for pc in c.pieces)


def _poly_json(poly: ConvexPolygon) -> list[dict]:
    labels = poly.labels or tuple(f"v{i}" for i in range(len(poly)))
    return [{"label": lab, "re": z.real, "im": z.imag} for lab, z in zip(labels, poly.vertices)]


def regions_to_json(polys: dict[str, ConvexPolygon], xi: float) -> str:
    """Serialize ``name -> polygon`` as ``{"schema": 1, "xi": .., "regions": {name: [vertex, ..]}}``."""
    doc = {"schema": 1, "xi": xi, "regions": {name: _poly_json(poly) for name, poly in polys.items()}}
    return json.dumps(doc, indent=2, sort_keys=False)
