"""Numerical certificate that the limit dragon curve is a simple arc.

At a fold angle ``xi`` in ``(0, pi/4)`` three things are checked:

1. ``f1(C) and f2(C)`` are contained in ``C`` (tested on a finite
   truncation of ``C``; each image piece must sit inside one convex cover
   piece or inside a small ball around the accumulation points 0 and 1);
2. the two half-plane conditions on the spiral orbits around ``alpha``
   which imply ``f1(C)`` and ``f2(C)`` are disjoint, evaluated through the
   closed-form ratio bounds (``N >= 4``) or the sextic sign test
   (``N = 3``) and, independently, by direct evaluation of the points;
3. the truncated images ``f1(C)`` and ``f2(C)`` only approach each other
   near ``alpha``.

A pass is a statement about floating-point evaluation at one ``xi``, not an
interval proof.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from .config import get_tol
from .ifs import ModelParams, Similarity, g_power, make_params, map_of_word
from .regions import RegionError, TruncatedC, anchors, build_Ck, build_truncation, point
from .roots import poly_P

__all__ = [
    "CertConfig",
    "CertReport",
    "Prop2Result",
    "HidarigawaResult",
    "SubCondition",
    "EndpointResult",
    "select_N",
    "check_prop2",
    "check_hidarigawa",
    "ratio_bounds",
    "ratio_bounds_direct",
    "n3_sign",
    "n3_sign_direct",
    "check_endpoint_condition",
    "check_lemmaT1",
    "cone_search",
    "certify",
    "CERTIFIED",
    "NOT_CERTIFIED",
]

CERTIFIED = "certified_simple_arc"
NOT_CERTIFIED = "not_certified"

# Pieces whose size bound |alpha|^n / (1 - |alpha|^4) falls below this are
# folded into the tail balls.  Near 1 a piece of size s is resolved only to
# about 1e-16 / s relative, so smaller pieces would make the containment
# tests measure rounding noise instead of geometry.
RESOLUTION = 1e-6

# Normalized endpoint gaps above this are reported as the cap itself.
GAP_CAP = 0.25


@dataclass(frozen=True)
class CertConfig:
    n_max: int = 40
    tol: float | None = None
    endpoint_eps: float = 1e-4
    samples: int = 0
    verify_cone: bool = False


def _check_range(xi: float) -> None:
    if not 0.0 < xi < math.pi / 4:
        raise ValueError(f"xi must satisfy 0 < xi < pi/4, got {xi!r}")


def select_N(xi: float) -> int:
    """The ``N >= 3`` with ``pi/(N+2) <= xi < pi/(N+1)``."""
    _check_range(xi)
    n = max(3, math.ceil(math.pi / xi - 2.0))
    while math.pi / (n + 2) > xi:
        n += 1
    while n > 3 and xi >= math.pi / (n + 1):
        n -= 1
    return n


# --- vectorized piece arithmetic -------------------------------------------------


def _apply(sims: list[Similarity], base: np.ndarray, width: int) -> np.ndarray:
    """Vertices of ``sim(base)`` for each sim, padded to ``width`` by repeating the last vertex."""
    c = np.array([s.c for s in sims], dtype=complex)[:, None]
    d = np.array([s.d for s in sims], dtype=complex)[:, None]
    return _pad(c * base[None, :] + d, width)


def _pad(v: np.ndarray, width: int) -> np.ndarray:
    if v.shape[1] < width:
        v = np.concatenate([v, np.repeat(v[:, -1:], width - v.shape[1], axis=1)], axis=1)
    return v


def _edges(verts: np.ndarray, sizes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Edge bases and unit directions for padded vertex rows.

    Row ``r`` has ``sizes[r]`` real vertices; padding edges repeat edge 0.
    Inside means ``cross(unit, z - base) >= 0`` for every edge.
    """
    rows, width = verts.shape
    idx = np.arange(width)[None, :]
    n = sizes[:, None]
    i = np.where(idx < n, idx, 0)
    j = (i + 1) % n
    v_i = np.take_along_axis(verts, i, axis=1)
    v_j = np.take_along_axis(verts, j, axis=1)
    d = v_i - v_j
    return v_j, d / np.abs(d)


def _depths(points: np.ndarray, base: np.ndarray, unit: np.ndarray) -> np.ndarray:
    """``depth[m, p, k]``: signed depth of point ``k`` of row ``m`` in cover ``p``."""
    w = points[:, None, :, None] - base[None, :, None, :]
    cr = unit.real[None, :, None, :] * w.imag - unit.imag[None, :, None, :] * w.real
    return cr.min(axis=3)


@dataclass
class _Pieces:
    names: list[str]
    verts: np.ndarray
    sizes: np.ndarray
    sims: list[Similarity] = field(default_factory=list)


def _materialize(trunc: TruncatedC, m: Similarity | None = None, label: str = "") -> _Pieces:
    """Vertex arrays of ``m(piece)`` for every truncation piece (``m`` defaults to identity).

    Rows are ordered with the ``A1``-based pieces first, then ``B``.
    """
    width = 6
    names, rows, sizes, sims = [], [], [], []
    for base_name, base in (("A1", trunc.A1), ("B", trunc.B)):
        group = [pc for pc in trunc.pieces if pc.base == base_name]
        if not group:
            continue
        group_sims = [pc.sim if m is None else m @ pc.sim for pc in group]
        rows.append(_apply(group_sims, np.asarray(base.vertices, dtype=complex), width))
        sizes += [len(base)] * len(group)
        names += [f"{label}({pc.name})" if label else pc.name for pc in group]
        sims += group_sims
    return _Pieces(names, np.concatenate(rows), np.asarray(sizes), sims)


def _image_pieces(trunc: TruncatedC) -> _Pieces:
    p = trunc.params
    one = _materialize(trunc, p.f1, "f1")
    two = _materialize(trunc, p.f2, "f2")
    return _Pieces(
        one.names + two.names,
        np.concatenate([one.verts, two.verts]),
        np.concatenate([one.sizes, two.sizes]),
        one.sims + two.sims,
    )


def _diameters(verts: np.ndarray) -> np.ndarray:
    return np.abs(verts[:, :, None] - verts[:, None, :]).max(axis=(1, 2))


def _effective_depth(p: ModelParams, n_max: int) -> int:
    a = abs(p.alpha)
    bound = 1.0 / (1.0 - a**4)
    n = n_max
    while n > 2 and a**n * bound < RESOLUTION:
        n -= 1
    return n


@lru_cache(maxsize=4)
def _truncation(p: ModelParams, n_max: int) -> tuple[int, TruncatedC]:
    n_eff = _effective_depth(p, n_max)
    return n_eff, build_truncation(p, n_eff)


def _tail_radius(p: ModelParams, n: int) -> float:
    a = abs(p.alpha)
    return a ** (n + 1) / (1.0 - a**4)


def _in_tail(verts: np.ndarray, radius: float) -> np.ndarray:
    """Rows lying in the closed ball of ``radius`` (plus rounding slack) about 0 or about 1."""
    radius = radius * (1.0 + 1e-9) + 1e-15
    near0 = np.abs(verts).max(axis=1) <= radius
    near1 = np.abs(verts - 1.0).max(axis=1) <= radius
    return near0 | near1


# --- condition (i): f_i(C) inside C --------------------------------------------


@dataclass(frozen=True)
class Prop2Result:
    passed: bool
    margin: float
    depth: float
    worst_piece: str
    n_images: int
    n_covers: int
    effective_depth: int
    tail_radius: float
    b_tilde_inside_A1_union_B: bool
    samples_checked: int = 0
    samples_passed: bool = True


def _circles(verts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    center = verts.mean(axis=1)
    return center, np.abs(verts - center[:, None]).max(axis=1)


def _cover_check(images: _Pieces, covers: _Pieces, tol: float, tail: float) -> tuple[np.ndarray, np.ndarray]:
    """Best normalized depth of each image in a single cover and the tail flags.

    Only covers whose bounding circle holds the image's centroid are
    candidates; any cover that contains the image passes this filter.
    """
    ci, _ = _circles(images.verts)
    cc, rc = _circles(covers.verts)
    diam = _diameters(images.verts)
    slack = rc[None, :] * (1.0 + 1e-6) + tol * diam[:, None]
    ii, jj = np.nonzero(np.abs(ci[:, None] - cc[None, :]) <= slack)
    best = np.full(len(images.verts), -np.inf)
    if len(ii):
        base, unit = _edges(covers.verts[jj], covers.sizes[jj])
        w = images.verts[ii][:, :, None] - base[:, None, :]
        cr = unit.real[:, None, :] * w.imag - unit.imag[:, None, :] * w.real
        depth = cr.min(axis=(1, 2)) / diam[ii]
        np.maximum.at(best, ii, depth)
    # Images with no candidate get their depth against the nearest cover, for reporting.
    missing = np.nonzero(~np.isfinite(best))[0]
    if len(missing):
        base, unit = _edges(covers.verts, covers.sizes)
        best[missing] = _depths(images.verts[missing], base, unit).min(axis=2).max(axis=1) / diam[missing]
    return best, _in_tail(images.verts, tail)


def _b_tilde_split_ok(trunc: TruncatedC, tol: float) -> bool:
    """``B~`` = ``B`` plus the triangle ``(z0, f12(p3), f12(z0))``; that triangle must lie in ``A1``."""
    bt = trunc.B_tilde
    tri = np.array([bt.vertices[0], bt.vertices[1], bt.vertices[2]], dtype=complex)
    a1 = np.asarray(trunc.A1.vertices, dtype=complex)[None, :]
    base, unit = _edges(a1, np.array([4]))
    depth = _depths(tri[None, :], base, unit).min()
    return bool(depth >= -tol * trunc.A1.diameter())


def check_prop2(p: ModelParams, n_max: int = 40, samples: int = 0, tol: float | None = None) -> Prop2Result:
    """Check ``f1(C), f2(C)`` inside ``C`` on the depth-``n_max`` truncation.

    The covers are the truncation pieces plus the hexagon ``B~`` (itself
    checked to lie in ``A1`` union ``B``).  An image piece passes if all its
    vertices are inside one cover, or if it lies within the tail radius
    ``|alpha|^(n+1) / (1 - |alpha|^4)`` of 0 or 1.  ``depth`` is the worst
    single-cover depth relative to the image diameter; it is zero (up to
    rounding) because several inclusions are tight, so ``margin`` is
    ``depth + tol`` and is positive exactly when the check passes.

    ``samples > 0`` additionally tests that many points per image edge
    against the plain union of truncation pieces (no ``B~``).
    """
    tol = get_tol(tol)
    n_eff, trunc = _truncation(p, n_max)
    tail = _tail_radius(p, n_eff)
    covers = _materialize(trunc)
    bt = np.asarray(trunc.B_tilde.vertices, dtype=complex)[None, :]
    covers = _Pieces(covers.names + ["B_tilde"], np.concatenate([covers.verts, bt]), np.append(covers.sizes, 6))
    images = _image_pieces(trunc)
    best, in_tail = _cover_check(images, covers, tol, tail)
    scored = np.where(in_tail, np.inf, best)
    worst = int(np.argmin(scored))
    depth = float(scored[worst]) if np.isfinite(scored[worst]) else 0.0
    split_ok = _b_tilde_split_ok(trunc, tol)
    passed = depth >= -tol and split_ok

    n_samples, samples_ok = 0, True
    if samples > 0:
        plain = _materialize(trunc)
        base, unit = _edges(plain.verts, plain.sizes)
        t = (np.arange(samples) + 1.0) / (samples + 1.0)
        rows = images.verts
        nxt = np.roll(rows, -1, axis=1)
        pts = (rows[:, :, None] + (nxt - rows)[:, :, None] * t[None, None, :]).reshape(len(rows), -1)
        pts = np.concatenate([pts, rows], axis=1)
        d = _depths(pts, base, unit)  # (images, covers, points)
        cover_best = d.max(axis=1) / _diameters(images.verts)[:, None]
        ok = (cover_best >= -tol) | in_tail[:, None]
        n_samples = int(pts.size)
        samples_ok = bool(ok.all())
        passed = passed and samples_ok

    return Prop2Result(
        passed=bool(passed),
        margin=depth + tol,
        depth=depth,
        worst_piece=images.names[worst],
        n_images=len(images.names),
        n_covers=len(covers.names),
        effective_depth=n_eff,
        tail_radius=tail,
        b_tilde_inside_A1_union_B=split_ok,
        samples_checked=n_samples,
        samples_passed=samples_ok,
    )


# --- condition (ii): the spiral half-plane conditions ---------------------------


def _halfplane_quotient(z: complex, a: complex, b: complex) -> complex:
    """``(z - a) / (b - a)``; ``z`` is in ``V+(a, b)`` iff its imaginary part is positive."""
    return (z - a) / (b - a)


def _g_at(p: ModelParams, m: int, z: complex) -> complex:
    """``g^m(z)``; for small ``xi`` the factor ``alpha^m`` may underflow and the point collapses onto ``alpha``."""
    return p.alpha + p.alpha ** int(m) * (z - p.alpha)


def _condition_points(p: ModelParams, N: int) -> dict[str, complex]:
    z0 = p.z0
    g1 = g_power(p, 1)
    f2212 = point(p, "2212")
    f1212 = point(p, "1212")
    return {
        "gN_f12_z0": _g_at(p, N, point(p, "12")),
        "g_f2212_z0": g1(f2212),
        "f2212_z0": f2212,
        "gN4_f22_z0": _g_at(p, N + 4, point(p, "22")),
        "g_f1212_z0": g1(f1212),
        "f1212_z0": f1212,
        "z0": z0,
    }


def ratio_bounds(p: ModelParams) -> tuple[float, float]:
    """Closed forms ``1/((1 - x^-2 - x^-4) x^(N-1))`` and ``1/((1 - x^-2 - x^-4) x^(N+3))``.

    They equal ``|g^N f12(z0) - alpha| / |g f2212(z0) - alpha|`` and
    ``|g^(N+4) f22(z0) - alpha| / |g f1212(z0) - alpha|``.
    """
    N = select_N(p.xi)
    x = p.x
    den = 1.0 - x**-2 - x**-4
    return x ** -(N - 1) / den, x ** -(N + 3) / den


def _offset_from_alpha(p: ModelParams, m: int, word: str) -> complex:
    """``g^m(f_word(z0)) - alpha``, formed as ``alpha^m (f_word(z0) - alpha)``.

    ``g^m`` contracts towards ``alpha`` by ``|alpha|^m``; building the point
    first and subtracting ``alpha`` afterwards would cancel away about
    ``m * log10(1/|alpha|)`` digits when ``N`` is large.
    """
    return p.alpha ** int(m) * (point(p, word) - p.alpha)


def ratio_bounds_direct(p: ModelParams) -> tuple[float, float]:
    """The same two ratios from the composed maps."""
    N = select_N(p.xi)
    r1 = abs(_offset_from_alpha(p, N, "12")) / abs(_offset_from_alpha(p, 1, "2212"))
    r2 = abs(_offset_from_alpha(p, N + 4, "22")) / abs(_offset_from_alpha(p, 1, "1212"))
    return r1, r2


def _require_n3(xi: float) -> None:
    if not math.pi / 5 <= xi < math.pi / 4:
        raise ValueError(f"the sign test applies to pi/5 <= xi < pi/4, got {xi!r}")


def n3_sign(p: ModelParams) -> float:
    """``sin(xi) * x / (x^4 - x^2 - 1) * P(x)`` with ``P(x) = x^6 - 3x^4 + 2x^2 - 1``."""
    _require_n3(p.xi)
    x = p.x
    return math.sin(p.xi) * x / (x**4 - x**2 - 1.0) * poly_P(x)


def n3_sign_direct(p: ModelParams) -> float:
    """Imaginary part of ``(g^3 f12(z0) - g f2212(z0)) / (f2212(z0) - g f2212(z0))``."""
    _require_n3(p.xi)
    pts = _condition_points(p, 3)
    return _halfplane_quotient(pts["gN_f12_z0"], pts["g_f2212_z0"], pts["f2212_z0"]).imag


@dataclass(frozen=True)
class SubCondition:
    passed: bool
    route: str
    route_value: float
    margin: float
    direct_passed: bool


@dataclass(frozen=True)
class HidarigawaResult:
    passed: bool
    N: int
    cond_N: SubCondition
    cond_N4: SubCondition
    routes_agree: bool
    k1: int | None = None
    l1: int | None = None


def cone_search(p: ModelParams, tol: float | None = None) -> tuple[int | None, int | None]:
    """Least ``k`` (``l``) in ``[0, 4N]`` placing ``g^k f12(z0)`` (``g^l f22(z0)``) in the cone.

    The cone for ``k`` is spanned at ``alpha`` by ``f22(z0)`` and ``f221(z0)``,
    excluding the ray towards ``f221(z0)``; for ``l`` swap ``12`` and ``22``.
    """
    tol = get_tol(tol)
    N = select_N(p.xi)
    a = p.alpha

    def arg_at_alpha(u: complex, v: complex) -> float:
        return math.atan2(((v - a) / (u - a)).imag, ((v - a) / (u - a)).real)

    def least(start: str, other: str) -> int | None:
        edge = point(p, other)
        excluded = point(p, other + "1")
        for k in range(0, 4 * N + 1):
            z = _g_at(p, k, point(p, start))
            if arg_at_alpha(z, edge) >= -tol and arg_at_alpha(excluded, z) > tol:
                return k
        return None

    return least("12", "22"), least("22", "12")


def check_hidarigawa(p: ModelParams, verify_cone: bool = False, tol: float | None = None) -> HidarigawaResult:
    """Both half-plane conditions, decided by the closed forms and cross-checked directly.

    Condition (i) uses ``n3_sign > 0`` when ``N = 3`` and ``ratio_N < 1`` when
    ``N >= 4``; condition (ii) uses ``ratio_N4 < 1``.  With ``xi`` in
    ``[pi/(N+2), pi/(N+1))`` both quotients have argument in ``(0, xi]``,
    so a ratio below one puts the point on the left of the relevant line.
    The margins are the imaginary parts of the normalized quotients.
    """
    N = select_N(p.xi)
    pts = _condition_points(p, N)
    q1 = _halfplane_quotient(pts["gN_f12_z0"], pts["g_f2212_z0"], pts["f2212_z0"])
    q2 = _halfplane_quotient(pts["gN4_f22_z0"], pts["g_f1212_z0"], pts["f1212_z0"])
    r_n, r_n4 = ratio_bounds(p)
    if N == 3:
        val = n3_sign(p)
        c1 = SubCondition(val > 0, "n3_sign", val, q1.imag, q1.imag > 0)
    else:
        c1 = SubCondition(r_n < 1, "ratio", r_n, q1.imag, q1.imag > 0)
    c2 = SubCondition(r_n4 < 1, "ratio", r_n4, q2.imag, q2.imag > 0)
    agree = c1.passed == c1.direct_passed and c2.passed == c2.direct_passed
    k1 = l1 = None
    if verify_cone:
        k1, l1 = cone_search(p, tol)
        if k1 != N or l1 != N + 4:
            raise AssertionError(f"cone search found k1={k1}, l1={l1}; expected {N}, {N + 4}")
    return HidarigawaResult(c1.passed and c2.passed, N, c1, c2, agree, k1, l1)


# --- condition (iii): the images meet only near alpha --------------------------


@dataclass(frozen=True)
class EndpointResult:
    passed: bool
    margin: float
    closest_pair: tuple[str, str]
    pairs_checked: int
    pairs_excluded: int
    eps: float


def check_endpoint_condition(
    p: ModelParams, n_max: int = 40, eps: float = 1e-4, tol: float | None = None
) -> EndpointResult:
    """Truncated ``f1(C)`` and ``f2(C)`` are apart except within ``eps`` of ``alpha``.

    For each pair of image pieces the separating-axis gap is divided by the
    pair's reach from ``alpha`` (largest vertex distance to ``alpha``), which
    keeps the measure scale free along the spiral towards ``alpha``.  Pairs
    whose reach is at most ``eps`` are excluded.  Passes when the smallest
    normalized gap exceeds ``tol``; the reported margin is capped at
    ``GAP_CAP``.
    """
    tol = get_tol(tol)
    n_eff, trunc = _truncation(p, n_max)
    one = _materialize(trunc, p.f1, "f1")
    two = _materialize(trunc, p.f2, "f2")
    a = p.alpha
    reach1 = np.abs(one.verts - a).max(axis=1)
    reach2 = np.abs(two.verts - a).max(axis=1)
    reach = np.maximum(reach1[:, None], reach2[None, :])
    keep = reach > eps
    # Bounding circles give a lower bound on each pair's gap; pairs whose
    # normalized bound already exceeds the cap cannot change the result.
    c1, r1 = _circles(one.verts)
    c2, r2 = _circles(two.verts)
    lower = np.abs(c1[:, None] - c2[None, :]) - r1[:, None] - r2[None, :]
    near = keep & (lower < GAP_CAP * reach)
    ii, jj = np.nonzero(near)
    if len(ii) == 0:
        margin = GAP_CAP
        pair = ("", "")
    else:
        gaps = np.empty(len(ii))
        chunk = 4096
        e1, e2 = _edge_vectors(one.verts, one.sizes), _edge_vectors(two.verts, two.sizes)
        for s in range(0, len(ii), chunk):
            sl = slice(s, s + chunk)
            i, j = ii[sl], jj[sl]
            ep, eq = tuple(e[i] for e in e1), tuple(e[j] for e in e2)
            gaps[sl] = _pairwise_separation(one.verts[i], ep, two.verts[j], eq)
        norm = gaps / reach[ii, jj]
        w = int(np.argmin(norm))
        margin = float(min(norm[w], GAP_CAP))
        pair = (one.names[ii[w]], two.names[jj[w]])
    return EndpointResult(
        passed=bool(margin > tol),
        margin=margin,
        closest_pair=pair,
        pairs_checked=int(near.sum()),
        pairs_excluded=int((~keep).sum()),
        eps=eps,
    )


def _edge_vectors(verts: np.ndarray, sizes: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """:func:`_edges` plus the edge vectors; edge ``e`` runs from ``base[e]`` to ``base[e] + vec[e]``."""
    base, unit = _edges(verts, sizes)
    idx = np.arange(verts.shape[1])[None, :]
    tip = np.take_along_axis(verts, np.where(idx < sizes[:, None], idx, 0), axis=1)
    return base, unit, tip - base


def _vertex_segment_distance(V: np.ndarray, edges: tuple[np.ndarray, np.ndarray, np.ndarray]) -> np.ndarray:
    """Smallest distance from the vertices ``V[r]`` to the boundary edges of polygon ``r``."""
    base, _, seg = edges
    w = V[:, :, None] - base[:, None, :]
    t = (w.real * seg.real[:, None, :] + w.imag * seg.imag[:, None, :]) / (np.abs(seg) ** 2)[:, None, :]
    t = np.clip(t, 0.0, 1.0)
    return np.abs(w - t * seg[:, None, :]).min(axis=(1, 2))


def _pairwise_separation(P: np.ndarray, ep: tuple, Q: np.ndarray, eq: tuple) -> np.ndarray:
    """Signed gap between ``P[r]`` and ``Q[r]`` for every row ``r``.

    ``ep`` and ``eq`` are the :func:`_edge_vectors` of the two rows.  For disjoint
    pieces this is their Euclidean distance; when a separating axis test
    finds no separating edge the (non-positive) axis value is returned
    instead, so the sign tells overlap from separation.
    """
    bp, up, _ = ep
    bq, uq, _ = eq
    w = Q[:, None, :] - bp[:, :, None]
    s1 = (-(up.real[:, :, None] * w.imag - up.imag[:, :, None] * w.real)).min(axis=2).max(axis=1)
    w = P[:, None, :] - bq[:, :, None]
    s2 = (-(uq.real[:, :, None] * w.imag - uq.imag[:, :, None] * w.real)).min(axis=2).max(axis=1)
    sat = np.maximum(s1, s2)
    dist = np.minimum(_vertex_segment_distance(P, eq), _vertex_segment_distance(Q, ep))
    return np.where(sat > 0, dist, sat)


# --- truncated inclusions for C_k -----------------------------------------------


def check_lemmaT1(p: ModelParams, k: int, tol: float | None = None) -> bool:
    """``f1(C_k)`` inside ``C_k`` union ``A_k`` and ``f2(C_k)`` inside ``C_k`` union ``f2(A_{k-1})``.

    Each image piece must lie in a single convex cover; ``B~`` is allowed as
    a cover after checking it lies in ``A1`` union ``B``.
    """
    if k < 2:
        raise ValueError(f"C_k is defined for k >= 2, got {k}")
    tol = get_tol(tol)
    ck = build_Ck(p, k)
    big = build_truncation(p, max(k, 2))
    if not _b_tilde_split_ok(big, tol):
        return False
    base = _materialize(ck)
    a1 = np.asarray(ck.A1.vertices, dtype=complex)
    bt = _pad(np.asarray(big.B_tilde.vertices, dtype=complex)[None, :], 6)
    ak = _apply([Similarity(p.alpha ** (k - 1), 0j)], a1, 6)
    f2ak = _apply([p.f2 @ Similarity(p.alpha ** (k - 2), 0j)], a1, 6)
    for f, extra in ((p.f1, ak), (p.f2, f2ak)):
        covers = _Pieces([], np.concatenate([base.verts, extra, bt]), np.concatenate([base.sizes, [4, 6]]))
        images = _materialize(ck, f)
        best, _ = _cover_check(images, covers, tol, 0.0)
        if not (best >= -tol).all():
            return False
    return True


# --- aggregate ------------------------------------------------------------------


@dataclass(frozen=True)
class CertReport:
    xi: float
    theta_deg: float
    N: int | None
    condition_i_prop2: Prop2Result | None
    condition_ii_hidarigawa: HidarigawaResult | None
    n3_sign_value: float | None
    ratio_N: float | None
    ratio_N4: float | None
    condition_iii_endpoint: EndpointResult | None
    overall: str
    reason: str = ""

    @property
    def certified(self) -> bool:
        return self.overall == CERTIFIED

    @property
    def margin(self) -> float | None:
        """Smallest margin over the two half-plane conditions and the endpoint gap.

        The inclusion check is left out: its inclusions are tight by
        construction, so its margin sits at the tolerance.
        """
        hid, end = self.condition_ii_hidarigawa, self.condition_iii_endpoint
        if hid is None or end is None:
            return None
        return min(hid.cond_N.margin, hid.cond_N4.margin, end.margin)

    def to_dict(self) -> dict:
        d = asdict(self)
        return {"schema": 1, **d}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=_json_default)


def _json_default(o):
    if isinstance(o, complex):
        return {"re": o.real, "im": o.imag}
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    raise TypeError(type(o))


def certify(xi: float, cfg: CertConfig | None = None) -> CertReport:
    """Run all three checks at ``xi`` and aggregate.

    ``xi`` outside ``(0, pi/3)`` raises; ``pi/4 <= xi < pi/3`` is outside
    the construction and is reported as not certified.
    """
    cfg = cfg or CertConfig()
    p = make_params(xi)
    if not 0.0 < p.xi < math.pi / 4:
        return CertReport(p.xi, p.theta_deg, None, None, None, None, None, None, None, NOT_CERTIFIED,
                          "outside the construction range 0 < xi < pi/4")
    try:
        anchors(p)
    except RegionError as exc:
        return CertReport(p.xi, p.theta_deg, None, None, None, None, None, None, None, NOT_CERTIFIED, str(exc))
    N = select_N(p.xi)
    hid = check_hidarigawa(p, verify_cone=cfg.verify_cone, tol=cfg.tol)
    prop2 = check_prop2(p, cfg.n_max, cfg.samples, cfg.tol)
    end = check_endpoint_condition(p, cfg.n_max, cfg.endpoint_eps, cfg.tol)
    r_n, r_n4 = ratio_bounds(p)
    n3 = n3_sign(p) if N == 3 else None
    ok = prop2.passed and hid.passed and end.passed
    reasons = []
    if not prop2.passed:
        reasons.append("inclusion check failed")
    if not hid.cond_N.passed:
        reasons.append(f"condition at N={N} failed ({hid.cond_N.route} = {hid.cond_N.route_value:.6g})")
    if not hid.cond_N4.passed:
        reasons.append(f"condition at N+4={N + 4} failed")
    if not end.passed:
        reasons.append("images meet away from alpha")
    return CertReport(
        xi=p.xi,
        theta_deg=p.theta_deg,
        N=N,
        condition_i_prop2=prop2,
        condition_ii_hidarigawa=hid,
        n3_sign_value=n3,
        ratio_N=r_n,
        ratio_N4=r_n4,
        condition_iii_endpoint=end,
        overall=CERTIFIED if ok else NOT_CERTIFIED,
        reason="; ".join(reasons),
    )
