"""SVG rendering of curves, certificate regions and marked points.

A render is described by a :class:`RenderSpec`.  Layer names:

``curve`` / ``curve:K``
    the polyline ``D_K`` (``K`` defaults to the render's ``order``)
``A1``, ``A1_tilde``, ``A0``, ``B``, ``B_tilde``, ``S``, ``Sp``, ``Spp``, ``W``, ``T``, ``Tp``
    the base regions
``A{m}``, ``A{m}_tilde``
    ``f_1^(m-1)`` images of ``A1`` and ``A1_tilde``
``f{word}(A{m})``, ``f{word}(B)``
    images under a finite word map, e.g. ``f2(A3)`` or ``f12(B)``
``C{k}``, ``f1(C{k})``, ``f2(C{k})``
    the truncation ``C_k`` and its two images, drawn piece by piece
``point:NAME``
    ``z0``, ``alpha``, ``p1``, ``p2``, ``p3``, ``q`` or a word such as
    ``point:221`` for ``f_221(z0)``
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from . import __version__
from .geometry import ConvexPolygon
from .ifs import MAX_ORDER, ModelParams, Similarity, curve, make_params, map_of_word, params_from_theta_deg
from .regions import RegionSet, anchors, build_Ck, build_regions, point, region_A, region_A_tilde

__all__ = ["RenderError", "RenderSpec", "Layer", "render_svg", "parse_spec", "PALETTE"]

PALETTE = ("#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d35400", "#16a085", "#7f8c8d", "#b7950b")

_A_RE = re.compile(r"^A(-?\d+)(_tilde)?$")
_WORD_IMAGE_RE = re.compile(r"^f([12]+)\((A(-?\d+)|B)\)$")
_C_RE = re.compile(r"^(?:C(\d+)|f([12])\(C(\d+)\))$")
_CURVE_RE = re.compile(r"^curve(?::(\d+))?$")


class RenderError(ValueError):
    """Invalid render spec (unknown layer, bad size, ...)."""


@dataclass(frozen=True)
class Layer:
    name: str
    color: str | None = None


@dataclass(frozen=True)
class RenderSpec:
    xi: float
    layers: tuple[Layer, ...]
    order: int = 8
    width: int = 800
    height: int = 600
    margin: float = 0.05
    stroke_width: float = 1.0
    labels: bool = True

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise RenderError("width and height must be positive")
        if not 0 <= self.margin < 0.5:
            raise RenderError("margin must be in [0, 0.5)")
        if not self.stroke_width > 0:
            raise RenderError("stroke width must be positive")
        if not self.layers:
            raise RenderError("no layers")
        for layer in self.layers:
            _classify(layer.name)


def _classify(name: str) -> str:
    if _CURVE_RE.match(name):
        return "curve"
    if name in RegionSet.NAMES or _A_RE.match(name) or _WORD_IMAGE_RE.match(name):
        return "polygon"
    if _C_RE.match(name):
        return "pieces"
    if name.startswith("point:") and len(name) > 6:
        label = name[6:]
        if label in ("z0", "alpha", "p1", "p2", "p3", "q") or re.fullmatch(r"[12]+", label):
            return "point"
    raise RenderError(f"unknown layer {name!r}")


def parse_spec(doc: dict) -> RenderSpec:
    """Build a spec from a JSON-like dict.

    Keys: ``xi`` or ``theta_deg`` (exactly one), ``layers`` (names or
    ``{"name", "color"}`` objects), and optional ``order``, ``width``,
    ``height``, ``margin``, ``stroke_width``, ``labels``.
    """
    if not isinstance(doc, dict):
        raise RenderError("spec must be a JSON object")
    known = {"xi", "theta_deg", "layers", "order", "width", "height", "margin", "stroke_width", "labels", "schema"}
    extra = set(doc) - known
    if extra:
        raise RenderError(f"unknown spec keys: {sorted(extra)}")
    if ("xi" in doc) == ("theta_deg" in doc):
        raise RenderError("give exactly one of xi and theta_deg")
    try:
        p = make_params(doc["xi"]) if "xi" in doc else params_from_theta_deg(doc["theta_deg"])
    except (TypeError, ValueError) as exc:
        raise RenderError(str(exc)) from exc
    layers = []
    for item in doc.get("layers", []):
        if isinstance(item, str):
            layers.append(Layer(item))
        elif isinstance(item, dict) and isinstance(item.get("name"), str):
            layers.append(Layer(item["name"], item.get("color")))
        else:
            raise RenderError(f"bad layer entry {item!r}")
    try:
        return RenderSpec(
            xi=p.xi,
            layers=tuple(layers),
            order=int(doc.get("order", 8)),
            width=int(doc.get("width", 800)),
            height=int(doc.get("height", 600)),
            margin=float(doc.get("margin", 0.05)),
            stroke_width=float(doc.get("stroke_width", 1.0)),
            labels=bool(doc.get("labels", True)),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, RenderError):
            raise
        raise RenderError(str(exc)) from exc


# --- geometry of each layer -------------------------------------------------------


@dataclass
class _Shape:
    kind: str  # "polyline", "polygon" or "point"
    points: np.ndarray
    label: str = ""
    color: str = ""


class _Builder:
    def __init__(self, p: ModelParams):
        self.p = p
        self._regions: RegionSet | None = None

    @property
    def regions(self) -> RegionSet:
        if self._regions is None:
            self._regions = build_regions(self.p)
        return self._regions

    def polygon(self, name: str) -> ConvexPolygon:
        if name in RegionSet.NAMES:
            return getattr(self.regions, name)
        m = _A_RE.match(name)
        if m:
            self.regions  # range check
            k = int(m.group(1))
            return region_A_tilde(self.p, k) if m.group(2) else region_A(self.p, k)
        m = _WORD_IMAGE_RE.match(name)
        word, base = m.group(1), m.group(2)
        poly = self.regions.B if base == "B" else region_A(self.p, int(m.group(3)))
        return poly.mapped(map_of_word(self.p, word), name=name)

    def shapes(self, layer: Layer, order: int) -> list[_Shape]:
        kind = _classify(layer.name)
        if kind == "curve":
            m = _CURVE_RE.match(layer.name)
            k = int(m.group(1)) if m.group(1) else order
            if k > 16:
                raise RenderError(f"curve order {k} is too large to draw (max 16)")
            return [_Shape("polyline", curve(self.p, k, MAX_ORDER).vertices, f"D{k}")]
        if kind == "polygon":
            poly = self.polygon(layer.name)
            return [_Shape("polygon", np.array(poly.vertices, dtype=complex), layer.name)]
        if kind == "pieces":
            m = _C_RE.match(layer.name)
            word, k = (None, m.group(1)) if m.group(1) else (m.group(2), m.group(3))
            k = int(k)
            if not 2 <= k <= 64:
                raise RenderError(f"C_k needs 2 <= k <= 64, got {k}")
            ck = build_Ck(self.p, k)
            sim = Similarity(1 + 0j, 0j) if word is None else (self.p.f1 if word == "1" else self.p.f2)
            out = []
            for pc in ck.pieces:
                verts = np.array([sim(z) for z in pc.polygon.vertices], dtype=complex)
                out.append(_Shape("polygon", verts, ""))
            if out:
                out[0].label = layer.name
            return out
        label = layer.name[6:]
        if label == "z0":
            z = self.p.z0
        elif label == "alpha":
            z = self.p.alpha
        elif label in ("p1", "p2", "p3", "q"):
            self.regions
            z = getattr(anchors(self.p), label)
        else:
            z = point(self.p, label)
        return [_Shape("point", np.array([z], dtype=complex), label)]


# --- SVG output -------------------------------------------------------------------


def _fmt(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_svg(spec: RenderSpec) -> str:
    """SVG 1.1 document for ``spec``; the y-axis points up as in the complex plane."""
    b = _Builder(make_params(spec.xi))
    groups = []
    for idx, layer in enumerate(spec.layers):
        color = layer.color or PALETTE[idx % len(PALETTE)]
        shapes = b.shapes(layer, spec.order)
        for s in shapes:
            s.color = color
        groups.append((layer.name, shapes))

    pts = np.concatenate([s.points for _, shapes in groups for s in shapes])
    lo_x, hi_x = float(pts.real.min()), float(pts.real.max())
    lo_y, hi_y = float(pts.imag.min()), float(pts.imag.max())
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-12)
    inner_w = spec.width * (1 - 2 * spec.margin)
    inner_h = spec.height * (1 - 2 * spec.margin)
    scale = min(inner_w / max(hi_x - lo_x, span * 1e-3), inner_h / max(hi_y - lo_y, span * 1e-3))
    cx, cy = 0.5 * (lo_x + hi_x), 0.5 * (lo_y + hi_y)

    def to_px(z: complex) -> tuple[str, str]:
        return _fmt(spec.width / 2 + (z.real - cx) * scale), _fmt(spec.height / 2 - (z.imag - cy) * scale)

    def path(points) -> str:
        return " ".join(",".join(to_px(z)) for z in points)

    sw = _fmt(spec.stroke_width)
    font = _fmt(max(8.0, min(spec.width, spec.height) / 50))
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- dragoncurve {__version__} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{spec.width}" height="{spec.height}" '
        f'viewBox="0 0 {spec.width} {spec.height}">',
        f"<desc>xi={spec.xi!r}</desc>",
        f'<rect x="0" y="0" width="{spec.width}" height="{spec.height}" fill="white"/>',
    ]
    for name, shapes in groups:
        lines.append(f'<g id="{escape(name, {chr(34): "&quot;"})}">')
        for s in shapes:
            if s.kind == "polyline":
                lines.append(f'<polyline points="{path(s.points)}" fill="none" stroke="{s.color}" stroke-width="{sw}" '
                             'stroke-linejoin="round"/>')
            elif s.kind == "polygon":
                lines.append(f'<polygon points="{path(s.points)}" fill="{s.color}" fill-opacity="0.15" '
                             f'stroke="{s.color}" stroke-width="{sw}"/>')
            else:
                x, y = to_px(complex(s.points[0]))
                lines.append(f'<circle cx="{x}" cy="{y}" r="{_fmt(2.5 * spec.stroke_width)}" fill="{s.color}"/>')
            if spec.labels and s.label:
                anchor = complex(s.points.mean()) if s.kind == "polygon" else complex(s.points[-1 if s.kind == "polyline" else 0])
                x, y = to_px(anchor)
                lines.append(f'<text x="{x}" y="{y}" font-size="{font}" font-family="sans-serif" fill="{s.color}">'
                             f"{escape(s.label)}</text>")
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
