"""The two-map iterated function system of the folded-paper dragon.

For a fold parameter ``xi`` in ``[0, pi/3)`` put ``x = 2 cos xi`` and
``alpha = exp(-i xi) / x``.  The maps are

    f1(z) = alpha * z            f2(z) = -conj(alpha) * z + 1

and the unfolding angle at every crease is ``theta = pi - 2 xi``.  Words
are read most-significant-first: ``f_{a1 a2 ... ak} = f_{a1} o f_{a2} o ... o f_{ak}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Union

import numpy as np

__all__ = [
    "ModelParams",
    "Similarity",
    "AntiSimilarity",
    "Word",
    "Polyline",
    "make_params",
    "params_from_theta_deg",
    "map_of_word",
    "fixed_point",
    "limit_point",
    "named_map",
    "f1_power",
    "curve",
    "curve_vertices",
    "MAX_ORDER",
]

MAX_ORDER = 24


@dataclass(frozen=True)
class ModelParams:
    xi: float
    x: float
    alpha: complex
    theta: float

    @property
    def abs2(self) -> float:
        """``|alpha|^2 = 1 / x^2``."""
        return 1.0 / (self.x * self.x)

    @property
    def theta_deg(self) -> float:
        return math.degrees(self.theta)

    @property
    def z0(self) -> complex:
        """Fixed point of ``f_2211``: ``alpha / (1 - |alpha|^4)``."""
        return self.alpha / (1.0 - self.abs2 * self.abs2)

    @property
    def f1(self) -> "Similarity":
        return Similarity(self.alpha, 0j)

    @property
    def f2(self) -> "Similarity":
        return Similarity(-self.alpha.conjugate(), 1 + 0j)


def make_params(xi: float) -> ModelParams:
    """Parameters for fold angle ``xi``; requires ``0 <= xi < pi/3``."""
    xi = float(xi)
    if not (0.0 <= xi < math.pi / 3):
        raise ValueError(f"xi must satisfy 0 <= xi < pi/3, got {xi!r}")
    x = 2.0 * math.cos(xi)
    # alpha = (cos xi - i sin xi) / (2 cos xi) = 1/2 - (i/2) tan xi, so Re(alpha) = 1/2 exactly.
    alpha = complex(0.5, -0.5 * math.tan(xi))
    return ModelParams(xi=xi, x=x, alpha=alpha, theta=math.pi - 2.0 * xi)


def params_from_theta_deg(theta_deg: float) -> ModelParams:
    """Parameters from the unfolding angle in degrees (``theta = pi - 2 xi``)."""
    theta = math.radians(float(theta_deg))
    return make_params((math.pi - theta) / 2.0)


@dataclass(frozen=True)
class Similarity:
    """Orientation-preserving affine map ``z -> c*z + d``."""

    c: complex
    d: complex = 0j

    def __post_init__(self):
        if self.c == 0:
            raise ValueError("similarity coefficient must be non-zero")

    def __call__(self, z):
        return self.c * z + self.d

    def __matmul__(self, other: "Similarity") -> "Similarity":
        """Composition ``self o other``."""
        if isinstance(other, AntiSimilarity):
            return AntiSimilarity(self.c * other.c, self.c * other.d + self.d)
        return Similarity(self.c * other.c, self.c * other.d + self.d)

    def inverse(self) -> "Similarity":
        return Similarity(1.0 / self.c, -self.d / self.c)

    @property
    def ratio(self) -> float:
        return abs(self.c)

    def fixed_point(self) -> complex:
        if self.c == 1:
            raise ValueError("translation has no fixed point")
        return self.d / (1.0 - self.c)


IDENTITY = Similarity(1 + 0j, 0j)


@dataclass(frozen=True)
class AntiSimilarity:
    """Orientation-reversing map ``z -> c*conj(z) + d``."""

    c: complex
    d: complex = 0j

    def __call__(self, z):
        if isinstance(z, np.ndarray):
            return self.c * np.conj(z) + self.d
        return self.c * complex(z).conjugate() + self.d

    def __matmul__(self, other):
        if isinstance(other, AntiSimilarity):
            return Similarity(self.c * other.c.conjugate(), self.c * other.d.conjugate() + self.d)
        return AntiSimilarity(self.c * other.c.conjugate(), self.c * other.d.conjugate() + self.d)


AnyMap = Union[Similarity, AntiSimilarity]


@dataclass(frozen=True)
class Word:
    """Address over the alphabet ``{1, 2}``: a finite prefix and an optional periodic block.

    ``Word("12", "1")`` is the infinite address ``12111...``.
    """

    prefix: str = ""
    period: str = ""

    def __post_init__(self):
        for part in (self.prefix, self.period):
            bad = set(part) - {"1", "2"}
            if bad:
                raise ValueError(f"invalid letters {sorted(bad)} in word")

    @property
    def is_finite(self) -> bool:
        return not self.period

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse ``"12"``, ``"(2211)"`` or ``"12(1)"`` (parenthesised block repeats)."""
        text = text.replace("^inf", "").replace(" ", "")
        if "(" in text:
            head, rest = text.split("(", 1)
            if not rest.endswith(")"):
                raise ValueError(f"malformed word {text!r}")
            block = rest[:-1]
            if not block:
                raise ValueError("periodic block must be non-empty")
            return cls(head, block)
        return cls(text)

    def __str__(self) -> str:
        return self.prefix + (f"({self.period})" if self.period else "")


def _letters(w) -> str:
    if isinstance(w, Word):
        if not w.is_finite:
            raise ValueError("expected a finite word")
        return w.prefix
    w = str(w)
    if set(w) - {"1", "2"}:
        raise ValueError(f"invalid letters in word {w!r}")
    return w


def map_of_word(p: ModelParams, w) -> Similarity:
    """``f_w`` for a finite word (string of ``1``/``2`` or :class:`Word`)."""
    letters = _letters(w)
    maps = {"1": p.f1, "2": p.f2}
    return reduce(lambda acc, a: acc @ maps[a], letters, IDENTITY)


def fixed_point(p: ModelParams, w) -> complex:
    """Fixed point of ``f_w`` for a non-empty finite word with contracting composition."""
    f = map_of_word(p, w)
    if not _letters(w):
        raise ValueError("empty word has no unique fixed point")
    if not abs(f.c) < 1:
        raise ValueError(f"composition for {w} is not contracting (|c| = {abs(f.c)})")
    return f.fixed_point()


def limit_point(p: ModelParams, w: Word) -> complex:
    """``f_{prefix}`` applied to the fixed point of the periodic block."""
    if w.is_finite:
        raise ValueError("limit_point needs a periodic block")
    return map_of_word(p, w.prefix)(fixed_point(p, w.period))


def f1_power(p: ModelParams, m: int) -> Similarity:
    """``f_{(1)^m}``: identity for ``m = 0``, the inverse power for ``m < 0``.

    Negative powers are expanding; do not iterate them toward a fixed point.
    """
    m = int(m)
    c = p.alpha ** abs(m)
    return Similarity(c if m >= 0 else 1.0 / c, 0j)


def named_map(p: ModelParams, name: str, m: int | None = None) -> AnyMap:
    """Auxiliary maps: ``psi``, ``tau``, ``g``, ``reflectR`` and ``f1_power`` (needs ``m``).

    * ``psi(z) = -(conj(alpha)/alpha)(z - alpha) + alpha``, so ``f2 = psi o f1``;
    * ``tau(z) = z + 1``;
    * ``g(z) = alpha (z - alpha) + alpha``, a spiral similarity about ``alpha``;
    * ``reflectR(z) = (alpha/conj(alpha)) conj(z)``, the reflection in the line through 0 and ``alpha``.
    """
    a = p.alpha
    ab = a.conjugate()
    if name == "psi":
        c = -ab / a
        return Similarity(c, a - c * a)
    if name == "tau":
        return Similarity(1 + 0j, 1 + 0j)
    if name == "g":
        return Similarity(a, a - a * a)
    if name == "reflectR":
        return AntiSimilarity(a / ab, 0j)
    if name == "f1_power":
        if m is None:
            raise ValueError("f1_power needs an exponent m")
        return f1_power(p, m)
    raise ValueError(f"unknown map {name!r}")


def g_power(p: ModelParams, m: int) -> Similarity:
    """``g^m(z) = alpha^m (z - alpha) + alpha``."""
    c = p.alpha ** int(m)
    return Similarity(c, p.alpha - c * p.alpha)


@dataclass(frozen=True, eq=False)
class Polyline:
    """Vertices of the order-``k`` renormalized dragon curve ``D_k``."""

    vertices: np.ndarray
    order: int
    xi: float

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def n_segments(self) -> int:
        return len(self.vertices) - 1

    @property
    def segment_length(self) -> float:
        return (2.0 * math.cos(self.xi)) ** (-self.order)


def curve_vertices(p: ModelParams, k: int) -> np.ndarray:
    """Vertex array of ``D_k``: ``V_k = f1(V_{k-1})`` followed by reversed ``f2(V_{k-1})``.

    ``f1`` sends the endpoints ``0, 1`` to ``0, alpha`` and ``f2`` sends them to
    ``1, alpha``, so the second half is walked backwards and the joint
    ``alpha`` appears once.
    """
    v = np.array([0j, 1 + 0j])
    a = p.alpha
    b = -a.conjugate()
    for _ in range(k):
        left = a * v
        right = b * v[::-1] + 1.0
        v = np.concatenate([left, right[1:]])
    return v


def curve(p: ModelParams, k: int, max_order: int = MAX_ORDER) -> Polyline:
    """The polyline ``D_k`` (``2^k + 1`` vertices, from 0 to 1)."""
    k = int(k)
    if not 0 <= k <= max_order:
        raise ValueError(f"order must be in [0, {max_order}], got {k}")
    return Polyline(curve_vertices(p, k), k, p.xi)
