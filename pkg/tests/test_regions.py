import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dragoncurve.certify import select_N
from dragoncurve.geometry import contains_point, contains_polygon, point_depths
from dragoncurve.ifs import Word, limit_point, make_params, map_of_word, named_map
from dragoncurve.regions import (
    RegionError,
    anchors,
    build_Ck,
    build_regions,
    build_truncation,
    contains_point_union,
    point,
    region_A,
    region_A_tilde,
    regions_to_json,
)

region_xis = st.floats(0.01, math.pi / 4 - 1e-3)


def _on_segment(z, a, b, eps=1e-10):
    d = b - a
    t = ((z - a) * d.conjugate()).real / abs(d) ** 2
    return -eps <= t <= 1 + eps and abs(a + t * d - z) <= eps * abs(d)


# --- anchors --------------------------------------------------------------------


def test_anchors_right_angle():
    an = anchors(make_params(math.pi / 4))
    assert an.p2 == pytest.approx(-(1 - 1j) / 3, abs=1e-14)


@given(region_xis)
def test_anchor_closed_forms(xi):
    p = make_params(xi)
    an = anchors(p)
    a, r2, z0 = p.alpha, p.abs2, p.z0
    r4 = r2 * r2
    assert an.p1 == pytest.approx((a - a.conjugate() * r2) * z0, abs=1e-12)
    assert an.p1 == pytest.approx(z0 - r2 / (1 - r2), abs=1e-12)
    assert an.p2 == pytest.approx(-r2 * z0, abs=1e-12)
    assert an.p2 == pytest.approx(map_of_word(p, "11")(an.q), abs=1e-12)
    assert an.p3 == pytest.approx(an.p2 + r2 / (1 - r2), abs=1e-12)
    assert an.q == pytest.approx(-(a.conjugate() / a) * z0, abs=1e-12)
    shift = an.q - z0
    assert abs(shift.imag) < 1e-12 and shift.real == pytest.approx(-1 / (1 - r4), rel=1e-12)


@given(region_xis)
def test_point_identities(xi):
    p = make_params(xi)
    an = anchors(p)
    z0, r2 = p.z0, p.abs2
    r4 = r2 * r2
    f12 = map_of_word(p, "12")
    assert f12(an.p2) == pytest.approx(z0, abs=1e-12)
    assert f12(an.p3) == pytest.approx(z0 - r4 / (1 - r2), abs=1e-12)
    assert _on_segment(f12(an.p3), z0, point(p, "1"))
    assert f12(an.q) == pytest.approx(point(p, "22"), abs=1e-12)
    assert _on_segment(point(p, "22"), point(p, "212"), point(p, "221"))
    psi = named_map(p, "psi")
    assert psi(z0) == pytest.approx(z0 - r4 / (1 - r4), abs=1e-12)
    assert psi(an.p1) == pytest.approx(an.p2 + (1 - 2 * r4) / (1 - r4), abs=1e-12)
    assert psi(an.p2) == pytest.approx(an.p2 + (1 + r2 - r4) / (1 - r4), abs=1e-12)
    assert psi(an.p3) == pytest.approx(z0 + r2 / (1 - r4), abs=1e-12)


def test_construction_range():
    for xi in (0.0, 0.9):
        with pytest.raises(RegionError):
            anchors(make_params(xi))
    # Anchors and C_k extend to the right-angle fold; the full region set does not.
    anchors(make_params(math.pi / 4))
    build_Ck(make_params(math.pi / 4), 5)
    with pytest.raises(RegionError):
        build_regions(make_params(math.pi / 4))


# --- regions --------------------------------------------------------------------


@pytest.mark.parametrize("xi", [0.5, 0.70, 0.74, 0.05])
def test_all_regions_construct(xi):
    r = build_regions(make_params(xi))
    assert set(r.as_dict()) == set(r.NAMES)
    assert contains_polygon(r.S, r.Sp) and contains_polygon(r.Sp, r.Spp)
    assert len(r.B) == 5


@given(region_xis)
def test_region_invariants(xi):
    p = make_params(xi)
    r = build_regions(p)
    assert contains_polygon(r.A1_tilde, r.A1, 1e-9)
    assert contains_polygon(r.S, r.Sp, 1e-9) and contains_polygon(r.Sp, r.Spp, 1e-9)
    assert contains_polygon(r.A0, r.B, 1e-9)
    assert r.A1.angles() == pytest.approx([xi, p.theta, 2 * xi, p.theta + xi], abs=1e-10)


@given(region_xis)
def test_tilde_pieces_inside_Spp(xi):
    p = make_params(xi)
    r = build_regions(p)
    for n in range(1, select_N(xi) + 4):
        for v in region_A_tilde(p, n).vertices:
            assert contains_point(r.Spp, v, 1e-9)


@given(st.floats(0.05, math.pi / 4 - 1e-3))
def test_C12_inside_Tp(xi):
    p = make_params(xi)
    r = build_regions(p)
    for poly in build_Ck(p, 12).polygons:
        assert contains_polygon(r.Tp, poly, 1e-9)


def test_region_A_examples():
    p = make_params(math.pi / 4)
    A1 = [p.z0, point(p, "1"), point(p, "112"), point(p, "12")]
    assert np.array(region_A(p, 1).vertices) == pytest.approx(np.array(A1), abs=1e-15)
    A0 = region_A(p, 0)
    an = anchors(p)
    want = [p.f2(an.p2), p.z0, point(p, "12"), point(p, "2")]
    assert np.array(A0.vertices) == pytest.approx(np.array(want), abs=1e-14)


@given(region_xis)
def test_region_A_diameter_scales(xi):
    p = make_params(xi)
    assert region_A(p, 5).diameter() == pytest.approx(p.abs2**2 * region_A(p, 1).diameter(), rel=1e-12)


def test_build_Ck_pieces():
    p = make_params(math.pi / 4)
    assert build_Ck(p, 2).names == ["A1", "B"]
    assert len(build_Ck(p, 3)) == 4
    assert build_Ck(p, 5).names == ["A1", "A2", "A3", "A4", "B", "f2(A1)", "f2(A2)", "f2(A3)"]
    with pytest.raises(ValueError):
        build_Ck(p, 1)
    t = build_truncation(p, 6)
    assert len(t) == 6 + 1 + 5 and t.B_tilde is not None


def test_contains_point_union():
    p = make_params(math.pi / 4)
    c = build_Ck(p, 6)
    assert contains_point_union(c, p.z0)
    assert not contains_point_union(c, 10)
    alpha = limit_point(p, Word.parse("12(1)"))
    assert contains_point_union(c, alpha)


@given(region_xis)
def test_alpha_on_A1_boundary(xi):
    p = make_params(xi)
    A1 = build_regions(p).A1
    assert abs(point_depths(A1, p.alpha)[0]) < 1e-12


def test_json_layout():
    p = make_params(0.5)
    r = build_regions(p)
    doc = json.loads(regions_to_json({"A1": r.A1, "B": r.B}, p.xi))
    assert doc["schema"] == 1 and doc["xi"] == 0.5
    assert [v["label"] for v in doc["regions"]["A1"]] == ["z0", "f_1(z0)", "f_112(z0)", "f_12(z0)"]
    v0 = doc["regions"]["B"][0]
    assert complex(v0["re"], v0["im"]) == p.z0
