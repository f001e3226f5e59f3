import json
import math

import mpmath
import numpy as np
import pytest

from dragoncurve.certify import n3_sign
from dragoncurve.ifs import make_params
from dragoncurve.roots import BRACKET, poly_P, poly_P_prime, solve_constants

PHI = (1 + math.sqrt(5)) / 2


def test_polynomial_values():
    assert poly_P(math.sqrt(2)) == pytest.approx(-1, abs=1e-14)
    assert poly_P(PHI) == pytest.approx(PHI, abs=1e-13)
    assert poly_P(0.0) == -1
    for x in np.linspace(-2, 2, 9):
        assert poly_P_prime(x) == pytest.approx(6 * x**5 - 12 * x**3 + 4 * x, abs=1e-12)


def test_single_sign_change_on_bracket():
    xs = np.linspace(BRACKET[0], BRACKET[1], 10_000)
    signs = np.sign([poly_P(x) for x in xs])
    assert np.count_nonzero(np.diff(signs)) == 1


def test_root_matches_companion_matrix_and_high_precision():
    c = solve_constants()
    roots = np.roots([1, 0, -3, 0, 2, 0, -1])
    real = [r.real for r in roots if abs(r.imag) < 1e-12 and BRACKET[0] < r.real < BRACKET[1]]
    assert len(real) == 1
    assert c.x0 == pytest.approx(real[0], abs=1e-13)
    mpmath.mp.dps = 50
    exact = mpmath.findroot(lambda x: x**6 - 3 * x**4 + 2 * x**2 - 1, (mpmath.sqrt(2), (1 + mpmath.sqrt(5)) / 2),
                            solver="anderson")
    assert c.x0 == pytest.approx(float(exact), abs=2e-16)


def test_published_constants():
    c = solve_constants()
    assert c.x0 == pytest.approx(1.5247, abs=5e-5)
    assert c.xi0 == pytest.approx(0.703858, abs=1e-6)
    assert c.theta0_deg == pytest.approx(99.3438, abs=1e-3)
    assert c.residual <= 1e-12
    assert BRACKET[0] < c.x0 < BRACKET[1]
    assert c.xi0 == math.acos(c.x0 / 2)
    assert c.theta0_rad == pytest.approx(math.pi - 2 * c.xi0, abs=1e-15)


def test_sign_test_follows_polynomial():
    for x in np.linspace(math.sqrt(2) + 1e-3, 2 * math.cos(math.pi / 5) - 1e-9, 200):
        xi = math.acos(x / 2)
        if not math.pi / 5 <= xi < math.pi / 4:
            continue
        assert np.sign(n3_sign(make_params(xi))) == np.sign(poly_P(x))


def test_output_formats_are_stable():
    c = solve_constants()
    a, b = c.to_json(10), c.to_json(10)
    assert a == b
    d = json.loads(a)
    assert d["schema"] == 1 and d["x0"] == pytest.approx(1.52470258, abs=1e-9)
    assert "x0" in c.table() and "|P(x0)|" in c.table()


def test_bad_tolerance():
    with pytest.raises(ValueError):
        solve_constants(0.0)
