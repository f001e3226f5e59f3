"""The critical fold angle.

``P(x) = x^6 - 3x^4 + 2x^2 - 1`` has exactly one root ``x0`` in
``(sqrt 2, (1 + sqrt 5)/2)``; the certificate works for ``x = 2 cos xi > x0``,
that is for ``xi < xi0 = arccos(x0 / 2)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from functools import lru_cache

__all__ = ["CriticalConstants", "poly_P", "poly_P_prime", "solve_constants", "BRACKET"]

SQRT2 = math.sqrt(2.0)
PHI = (1.0 + math.sqrt(5.0)) / 2.0
BRACKET = (SQRT2, PHI)


def poly_P(x: float) -> float:
    x2 = x * x
    return ((x2 - 3.0) * x2 + 2.0) * x2 - 1.0


def poly_P_prime(x: float) -> float:
    x2 = x * x
    return ((6.0 * x2 - 12.0) * x2 + 4.0) * x


@dataclass(frozen=True)
class CriticalConstants:
    x0: float
    xi0: float
    theta0_rad: float
    theta0_deg: float
    residual: float

    def to_json(self, digits: int | None = None) -> str:
        d = asdict(self)
        if digits is not None:
            d = {k: float(f"{v:.{digits}g}") if k != "residual" else v for k, v in d.items()}
        return json.dumps({"schema": 1, **d}, indent=2)

    def table(self, digits: int = 12) -> str:
        rows = [
            ("x0", self.x0),
            ("xi0 (rad)", self.xi0),
            ("theta0 (rad)", self.theta0_rad),
            ("theta0 (deg)", self.theta0_deg),
            ("|P(x0)|", self.residual),
        ]
        width = max(len(name) for name, _ in rows)
        return "\n".join(f"{name:<{width}}  {value:.{digits}g}" for name, value in rows)


@lru_cache(maxsize=8)
def solve_constants(tol: float = 1e-14) -> CriticalConstants:
    """Bisect ``P`` on the bracket to width ``tol``, then take two Newton steps."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    lo, hi = BRACKET
    flo, fhi = poly_P(lo), poly_P(hi)
    if not (flo < 0 < fhi):
        raise ArithmeticError(f"no sign change on bracket: P({lo}) = {flo}, P({hi}) = {fhi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if poly_P(mid) < 0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(2):
        d = poly_P_prime(x)
        if d == 0:
            break
        step = x - poly_P(x) / d
        if BRACKET[0] < step < BRACKET[1]:
            x = step
    xi0 = math.acos(x / 2.0)
    theta0 = math.pi - 2.0 * xi0
    return CriticalConstants(x0=x, xi0=xi0, theta0_rad=theta0, theta0_deg=math.degrees(theta0), residual=abs(poly_P(x)))
