"""Upper half-plane model of the hyperbolic plane.

Points are ``HPoint(x, y)`` with ``y > 0``. Orientation-preserving isometries
are real 2x2 matrices normalized to determinant one (``Mobius``). Geodesics
are stored by their ideal endpoints, with ``IdealPoint.INF`` standing for the
point at infinity.

Side convention for ``side_of``: points strictly inside a semicircle get -1,
points strictly left of a vertical line get -1.
"""

from __future__ import annotations

import enum
import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CoincidentPoints, NotHyperbolic

CLASSIFY_TOL = 1e-10
SIDE_TOL = 1e-12


def fmt(v: float) -> str:
    """17 significant digits, the CSV float format used throughout."""
    return format(float(v) + 0.0, ".17g")  # + 0.0 turns -0.0 into 0.0


@dataclass(frozen=True)
class HPoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite point ({self.x}, {self.y})")
        if not self.y > 0:
            raise ValueError(f"point ({self.x}, {self.y}) is not in the upper half-plane")

    @classmethod
    def from_complex(cls, z: complex) -> "HPoint":
        return cls(float(z.real), float(z.imag))

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    def to_csv(self) -> str:
        return f"{fmt(self.x)},{fmt(self.y)}"

    def __repr__(self):
        return f"HPoint({self.x!r}, {self.y!r})"


I = HPoint(0.0, 1.0)


@dataclass(frozen=True, order=False)
class IdealPoint:
    """A point of the boundary R u {inf}; ``value is None`` means infinity."""

    value: Optional[float] = None

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def key(self) -> float:
        # total order on the boundary with infinity greatest
        return math.inf if self.value is None else self.value

    def __lt__(self, other: "IdealPoint") -> bool:
        return self.key() < other.key()

    def isclose(self, other: "IdealPoint", tol: float = 1e-9) -> bool:
        if self.is_infinite or other.is_infinite:
            return self.is_infinite and other.is_infinite
        return abs(self.value - other.value) <= tol * max(1.0, abs(self.value))

    def __repr__(self):
        return "IdealPoint(inf)" if self.value is None else f"IdealPoint({self.value!r})"


IdealPoint.INF = IdealPoint(None)


class IsometryClass(enum.Enum):
    IDENTITY = "identity"
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"


@dataclass(frozen=True)
class Mobius:
    """z -> (az + b)/(cz + d), rescaled on construction so that ad - bc = 1."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if not det > 0:
            raise ValueError(f"determinant {det} is not positive")
        s = math.sqrt(det)
        if s != 1.0:
            for name in "abcd":
                object.__setattr__(self, name, getattr(self, name) / s)

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def dilation(cls, lam: float) -> "Mobius":
        r = math.sqrt(lam)
        return cls(r, 0.0, 0.0, 1.0 / r)

    @classmethod
    def translation(cls, t: float) -> "Mobius":
        return cls(1.0, t, 0.0, 1.0)

    @classmethod
    def rotation(cls, theta: float) -> "Mobius":
        """Elliptic rotation about I."""
        c, s = math.cos(theta), math.sin(theta)
        return cls(c, s, -s, c)

    @classmethod
    def from_seq(cls, entries) -> "Mobius":
        a, b, c, d = (float(v) for v in entries)
        return cls(a, b, c, d)

    @property
    def trace(self) -> float:
        return self.a + self.d

    def __matmul__(self, other: "Mobius") -> "Mobius":
        return Mobius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> "Mobius":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = Mobius.identity()
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def __call__(self, z: HPoint) -> HPoint:
        return apply(self, z)

    def apply_ideal(self, p: IdealPoint) -> IdealPoint:
        if p.is_infinite:
            return IdealPoint.INF if self.c == 0 else IdealPoint(self.a / self.c)
        den = self.c * p.value + self.d
        if den == 0:
            return IdealPoint.INF
        return IdealPoint((self.a * p.value + self.b) / den)

    def isclose(self, other: "Mobius", tol: float = 1e-9) -> bool:
        """Equality in PSL(2,R), i.e. up to sign."""
        u = np.array([self.a, self.b, self.c, self.d])
        v = np.array([other.a, other.b, other.c, other.d])
        return bool(min(np.max(np.abs(u - v)), np.max(np.abs(u + v))) <= tol)


@dataclass(frozen=True)
class Geodesic:
    """Complete geodesic with endpoints ordered so that p < q (infinity last)."""

    p: IdealPoint
    q: IdealPoint

    def __post_init__(self):
        if self.p.key() == self.q.key():
            raise ValueError("geodesic endpoints must be distinct")
        if self.q < self.p:
            p, q = self.p, self.q
            object.__setattr__(self, "p", q)
            object.__setattr__(self, "q", p)

    @classmethod
    def of(cls, p, q) -> "Geodesic":
        """Build from floats, with ``None`` or ``math.inf`` meaning infinity."""
        def conv(v):
            if isinstance(v, IdealPoint):
                return v
            if v is None or v == math.inf:
                return IdealPoint.INF
            return IdealPoint(float(v))
        return cls(conv(p), conv(q))

    @property
    def is_vertical(self) -> bool:
        return self.q.is_infinite

    @property
    def center(self) -> float:
        if self.is_vertical:
            return self.p.value
        return 0.5 * (self.p.value + self.q.value)

    @property
    def radius(self) -> float:
        if self.is_vertical:
            return math.inf
        return 0.5 * (self.q.value - self.p.value)

    def isclose(self, other: "Geodesic", tol: float = 1e-9) -> bool:
        return self.p.isclose(other.p, tol) and self.q.isclose(other.q, tol)

    def point_at(self, s: float) -> HPoint:
        """Point at signed arc length ``s`` from the apex (the top of a semicircle,
        or height 1 on a vertical line); positive ``s`` heads toward ``q``."""
        if self.is_vertical:
            return HPoint(self.p.value, math.exp(s))
        r = self.radius
        return HPoint(self.center + r * math.tanh(s), r / math.cosh(s))


# distance -------------------------------------------------------------------

def dist_arrays(x1, y1, x2, y2):
    """Vectorized hyperbolic distance between (x1, y1) and (x2, y2).

    Evaluates 2 artanh(|z - w| / |z - conj(w)|). For ratios near 1 the
    equivalent form 2 log((|z-w| + |z-conj w|) / (2 sqrt(y1 y2))) avoids the
    cancellation in 1 - ratio.
    """
    x1, y1, x2, y2 = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x1, y1, x2, y2)))
    dx = x1 - x2
    near = np.hypot(dx, y1 - y2)
    far = np.hypot(dx, y1 + y2)
    r = near / far
    with np.errstate(divide="ignore", invalid="ignore"):
        small = 2.0 * np.arctanh(np.minimum(r, 0.5))
        large = 2.0 * (np.log(near + far) - math.log(2.0)) - np.log(y1) - np.log(y2)
    return np.where(r < 0.5, small, large)


def dist(z: HPoint, w: HPoint) -> float:
    return float(dist_arrays(z.x, z.y, w.x, w.y))


# isometries -----------------------------------------------------------------

def apply(m: Mobius, z: HPoint) -> HPoint:
    x, y = apply_arrays(m, z.x, z.y)
    return HPoint(float(x), float(y))


def apply_arrays(m: Mobius, x, y):
    """Vectorized action of ``m`` on coordinate arrays."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    # (az+b)(c conj(z)+d) / |cz+d|^2, imaginary part is y/|cz+d|^2 since det = 1
    den_re = m.c * x + m.d
    den = den_re * den_re + (m.c * y) ** 2
    num_re = (m.a * x + m.b) * den_re + m.a * m.c * y * y
    return num_re / den, y / den


def classify(m: Mobius, tol: float = CLASSIFY_TOL) -> IsometryClass:
    if abs(m.b) <= tol and abs(m.c) <= tol and abs(m.a - m.d) <= tol:
        return IsometryClass.IDENTITY
    tr = abs(m.trace)
    if tr > 2.0 + tol:
        return IsometryClass.HYPERBOLIC
    if tr < 2.0 - tol:
        return IsometryClass.ELLIPTIC
    return IsometryClass.PARABOLIC


def fixed_points(m: Mobius) -> tuple[IdealPoint, IdealPoint]:
    """Both boundary fixed points of a hyperbolic element, in increasing order."""
    disc = m.trace ** 2 - 4.0
    if disc <= 0:
        raise NotHyperbolic("no pair of real fixed points")
    B = m.d - m.a
    sq = math.sqrt(disc)
    if abs(m.c) <= 1e-15 * max(abs(B), sq):
        # z = (a z + b)/d has the finite solution b/(d - a), plus infinity
        # (a negligible c only moves the other root out past float range)
        return IdealPoint(m.b / B), IdealPoint.INF
    # roots of c z^2 + (d - a) z - b = 0, computed without cancellation
    q = -0.5 * (B + math.copysign(sq, B if B != 0 else 1.0))
    r1 = q / m.c
    r2 = -m.b / q if q != 0 else (m.a - m.d) / (2 * m.c)
    return IdealPoint(min(r1, r2)), IdealPoint(max(r1, r2))


def axis(m: Mobius, tol: float = CLASSIFY_TOL) -> Geodesic:
    cls = classify(m, tol)
    if cls is not IsometryClass.HYPERBOLIC:
        raise NotHyperbolic(f"{m} is {cls.value}")
    p, q = fixed_points(m)
    return Geodesic(p, q)


# geodesics --------------------------------------------------------------------

def _same(u: float, v: float, scale: float) -> bool:
    return abs(u - v) <= 1e-14 * max(1.0, scale)


def geodesic_through(z: HPoint, w: HPoint) -> Geodesic:
    if z == w:
        raise CoincidentPoints("geodesic_through needs two distinct points")
    if _same(z.x, w.x, max(abs(z.x), abs(w.x))):
        return Geodesic(IdealPoint(0.5 * (z.x + w.x)), IdealPoint.INF)
    # center on the real axis equidistant (Euclidean) from z and w
    c = ((z.x * z.x + z.y * z.y) - (w.x * w.x + w.y * w.y)) / (2.0 * (z.x - w.x))
    r = math.hypot(z.x - c, z.y)
    return Geodesic(IdealPoint(c - r), IdealPoint(c + r))


def equidistant_line(z: HPoint, w: HPoint) -> Geodesic:
    """Perpendicular bisector of the segment zw.

    The locus d(x, z) = d(x, w) is the Apollonius circle
    Im(w)|x - z|^2 = Im(z)|x - w|^2, whose center is real.
    """
    if z == w:
        raise CoincidentPoints("equidistant_line needs two distinct points")
    if _same(z.y, w.y, max(z.y, w.y)):
        return Geodesic(IdealPoint(0.5 * (z.x + w.x)), IdealPoint.INF)
    dy = w.y - z.y
    c = (w.y * z.x - z.y * w.x) / dy
    r = math.sqrt(z.y * w.y) * math.hypot(z.x - w.x, z.y - w.y) / abs(dy)
    return Geodesic(IdealPoint(c - r), IdealPoint(c + r))


def side_arrays(L: Geodesic, x, y, tol: float = SIDE_TOL):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if L.is_vertical:
        v = L.p.value
        val = x - v
        scale = max(1.0, abs(v))
    else:
        c, r = L.center, L.radius
        val = (x - c) ** 2 + y * y - r * r
        scale = r * r
    out = np.sign(val).astype(int)
    out[np.abs(val) <= tol * scale] = 0
    return out


def side_of(L: Geodesic, z: HPoint, tol: float = SIDE_TOL) -> int:
    return int(side_arrays(L, [z.x], [z.y], tol)[0])


def normalize_pair(z: HPoint, w: HPoint) -> tuple[Mobius, float]:
    """Isometry g with g(z) = I and g(w) = e^d I, together with d = dist(z, w)."""
    if z == w:
        raise CoincidentPoints("normalize_pair needs two distinct points")
    # affine move z -> I, then rotate about I; avoids the far endpoints of
    # nearly vertical geodesics
    h = Mobius.dilation(1.0 / z.y) @ Mobius.translation(-z.x)
    hw = complex(w.x - z.x, w.y) / z.y
    zeta = (hw - 1j) / (hw + 1j)
    # rotation by theta multiplies the Cayley coordinate by e^{2i theta}
    g = Mobius.rotation(-0.5 * cmath.phase(zeta)) @ h
    return g, dist(z, w)


def geodesics_disjoint(L1: Geodesic, L2: Geodesic, tol: float = 1e-12) -> bool:
    """True unless the endpoint pairs strictly interleave on the boundary.

    Asymptotic geodesics (one shared endpoint) count as disjoint; a geodesic
    is not disjoint from itself.
    """
    lo, hi = L1.p.key(), L1.q.key()

    def eq(u, v):
        if math.isinf(u) or math.isinf(v):
            return u == v
        return abs(u - v) <= tol * max(1.0, abs(u), abs(v))

    shared = 0
    inside = outside = 0
    for v in (L2.p.key(), L2.q.key()):
        if eq(v, lo) or eq(v, hi):
            shared += 1
        elif lo < v < hi:
            inside += 1
        else:
            outside += 1
    if shared == 2:
        return False
    return not (inside == 1 and outside == 1)
