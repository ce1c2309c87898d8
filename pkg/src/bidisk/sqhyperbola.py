"""Square hyperbolae SH^k(z, w) = {x : d(x, z)^2 - d(x, w)^2 = k}.

For k != 0 the pair (z, w) is first moved to (aI, bI) with a < b. Points of
the curve are then intersections of the hyperbolic circles of radius
sqrt(k) cosh t about aI and sqrt(k) sinh t about bI, which exist exactly for
t >= t0. Branch labels (PLUS / MINUS) refer to the sign of the real part in
these normalized coordinates, not in the original ones.

For k = 0 the curve is the equidistant geodesic; its parameter is signed
hyperbolic arc length from the apex.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import roots
from .errors import (CoincidentPoints, MixedSides, NegativeDiscriminant,
                     OutOfDomain, ZeroK)
from .hplane import (Geodesic, HPoint, IdealPoint, Mobius, apply_arrays,
                     dist_arrays, equidistant_line, normalize_pair, side_arrays)

RADICAND_TOL = 1e-13
RHO_MAX = 80.0
ENDPOINT_TOL = 1e-3
SAMPLE_RHO = 300.0   # y stays representable out to here

_FLIP = Mobius(0.0, -1.0, 1.0, 0.0)


class Branch(enum.Enum):
    PLUS = 1
    MINUS = -1

    @property
    def symbol(self) -> str:
        return "+" if self is Branch.PLUS else "-"


@dataclass(frozen=True, eq=False)
class SquareHyperbola:
    z: HPoint
    w: HPoint
    k: float

    def __post_init__(self):
        if self.z == self.w:
            raise CoincidentPoints("square hyperbola needs z != w")
        object.__setattr__(self, "k", float(self.k))

    def canonical(self):
        """SH^k(z,w) and SH^-k(w,z) share this key."""
        if self.k > 0:
            return (self.z, self.w, self.k)
        if self.k < 0:
            return (self.w, self.z, -self.k)
        a, b = sorted([self.z, self.w], key=lambda p: (p.x, p.y))
        return (a, b, 0.0)

    def __eq__(self, other):
        if not isinstance(other, SquareHyperbola):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def reversed(self) -> "SquareHyperbola":
        return SquareHyperbola(self.w, self.z, -self.k)

    def value_arrays(self, x, y):
        dz = dist_arrays(x, y, self.z.x, self.z.y)
        dw = dist_arrays(x, y, self.w.x, self.w.y)
        return dz * dz - dw * dw - self.k

    def __repr__(self):
        return f"SH^{self.k!r}({self.z!r}, {self.w!r})"


def implicit_value(h: SquareHyperbola, x: HPoint) -> float:
    return float(h.value_arrays(x.x, x.y))


@dataclass(frozen=True)
class HyperbolaParam:
    """Normalized data of SH^k(z, w), k != 0.

    ``g`` sends the (possibly swapped) pair to (aI, bI), a < b. ``k`` here is
    always positive.
    """

    a: float
    b: float
    k: float
    t0: float
    g: Mobius
    swapped: bool
    curve: SquareHyperbola = field(repr=False)
    g_inv: Mobius = field(repr=False, default=None)

    def __post_init__(self):
        if self.g_inv is None:
            object.__setattr__(self, "g_inv", self.g.inverse())

    @property
    def sqrt_k(self) -> float:
        return math.sqrt(self.k)

    @property
    def endpoint_abs(self) -> float:
        return math.sqrt(self.a * self.b)

    def t_for_distance(self, rho: float) -> float:
        """Parameter at which the curve point is at distance ``rho`` from aI."""
        c = rho / self.sqrt_k
        return max(self.t0, math.acosh(c)) if c >= 1 else self.t0

    # normalized coordinates --------------------------------------------------

    def normalized(self, t, clamp: bool = True):
        """(|x|, y) of the curve point at parameter(s) ``t`` in normalized coordinates."""
        t = np.asarray(t, dtype=float)
        # curves whose apex is hundreds of units out have no representable points;
        # those come back as 0 or nan rather than as warnings
        with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
            return self._normalized(t, clamp)

    def _normalized(self, t, clamp):
        a, b, sk = self.a, self.b, self.sqrt_k
        u = sk * np.cosh(t)
        v = sk * np.sinh(t)
        delta = sk * np.exp(-t)  # u - v
        D = math.log(b / a)
        if sk >= D:
            # internal tangency at t0, where sqrt(k) e^-t0 = D: keep delta - D exact there
            delta_minus_D = D * np.expm1(-(t - self.t0))
        else:
            delta_minus_D = delta - D
        # 2(c2 - c1) = e^v * den, written to avoid overflow of cosh(u), cosh(v);
        # b - a e^delta = -b expm1(delta - D) because a e^D = b
        e2v = np.exp(-2.0 * v)
        den = -b * np.expm1(delta_minus_D) + e2v * (b - a * np.exp(-delta))
        n = (b - a) * (b + a)
        y = n * np.exp(-v) / den
        two_y_c1 = a * n * (np.exp(delta) + np.exp(-(u + v))) / den
        # r1^2 - (y - c1)^2 == 2 y c1 - y^2 - a^2 since r1^2 - c1^2 = -a^2
        rad = two_y_c1 - y * y - a * a
        if clamp:
            tiny = (rad < 0) & (rad >= -RADICAND_TOL * np.maximum(two_y_c1, 1.0))
            rad = np.where(tiny, 0.0, rad)
        return np.sqrt(np.maximum(rad, 0.0)), y, rad

    def normalized_signed(self, t, br: Branch):
        xa, y, _ = self.normalized(t)
        return br.value * xa, y

    def points(self, t, br: Branch):
        """Curve points in original coordinates for an array of parameters."""
        x, y = self.normalized_signed(t, br)
        return apply_arrays(self.g_inv, x, y)


def parametrize(h: SquareHyperbola) -> HyperbolaParam:
    if h.k == 0:
        raise ZeroK("SH^0 is a geodesic; use equidistant_line")
    swapped = h.k < 0
    z, w, k = (h.w, h.z, -h.k) if swapped else (h.z, h.w, h.k)
    if z.x == 0.0 and w.x == 0.0:
        # already on the imaginary axis: keep coordinates, or invert if upside down
        if z.y < w.y:
            g, a, b = Mobius.identity(), z.y, w.y
        else:
            g, a, b = _FLIP, 1.0 / z.y, 1.0 / w.y
    else:
        g, d = normalize_pair(z, w)
        a, b = 1.0, math.exp(d)
    dist_ab = math.log(b / a)
    t0 = abs(math.log(math.sqrt(k) / dist_ab))
    return HyperbolaParam(a=a, b=b, k=k, t0=t0, g=g, swapped=swapped, curve=h)


def point_at(p: HyperbolaParam, t: float, br: Branch) -> HPoint:
    if t < p.t0:
        raise OutOfDomain(f"t={t} below t0={p.t0}")
    xa, y, rad = p.normalized(t)
    if float(rad) < 0:
        raise NegativeDiscriminant(f"radicand {float(rad)} at t={t}")
    y = float(y)
    if not y > 0:
        raise OutOfDomain(f"t={t} is too large: point underflows to the boundary")
    x, yy = apply_arrays(p.g_inv, br.value * float(xa), y)
    return HPoint(float(x), float(yy))


def endpoints(h: SquareHyperbola) -> tuple[IdealPoint, IdealPoint]:
    L = equidistant_line(h.z, h.w)
    return L.p, L.q


def adaptive_t_max(p: HyperbolaParam, tol: float = ENDPOINT_TOL) -> float:
    """Smallest tried t past which both branches sit within ``tol`` of their endpoints.

    Checked in normalized coordinates, and in original coordinates whenever the
    corresponding endpoint is finite. The Euclidean approach to the endpoint is
    only about 1/distance, so the answer can lie where y underflows to 0; use
    ``HyperbolaParam.points`` there, not ``point_at``.
    """
    ends = {}
    for br in Branch:
        e = p.g_inv.apply_ideal(IdealPoint(br.value * p.endpoint_abs))
        ends[br] = e
    t_cap = p.t_for_distance(1e9)

    def close(t):
        xa, y, _ = p.normalized(t)
        if abs(float(xa) - p.endpoint_abs) >= tol or float(y) >= tol:
            return False
        for br in Branch:
            e = ends[br]
            if e.is_infinite:
                continue
            x, yy = p.points(t, br)
            if math.hypot(float(x) - e.value, float(yy)) >= tol:
                return False
        return True

    step = 0.25
    t = p.t0 + step
    while not close(t) and t < t_cap:
        step *= 1.5
        t = min(p.t0 + step, t_cap)
    return t


def _geodesic_points(L: Geodesic, s):
    s = np.asarray(s, dtype=float)
    if L.is_vertical:
        return np.full_like(s, L.p.value), np.exp(s)
    r = L.radius
    return L.center + r * np.tanh(s), r / np.cosh(s)


def _geodesic_span(L: Geodesic, tol: float = ENDPOINT_TOL) -> float:
    if L.is_vertical:
        return 7.0
    r = L.radius
    # r sech(s) < tol and r (1 - tanh s) < tol
    return max(math.acosh(max(1.0, r / tol)), 0.5 * math.log(max(2.0 * r / tol, 1.0)), 1.0)


def sample_params(h: SquareHyperbola, n: int, t_max: Optional[float] = None):
    """Ordered (t, branch, point) triples; see ``sample``."""
    if n < 2:
        raise ValueError("need n >= 2")
    if h.k == 0:
        L = equidistant_line(h.z, h.w)
        span = _geodesic_span(L) if t_max is None else t_max
        s = np.linspace(-span, span, n)
        xs, ys = _geodesic_points(L, s)
        return [(float(si), Branch.PLUS if si >= 0 else Branch.MINUS, HPoint(float(x), float(y)))
                for si, x, y in zip(s, xs, ys)]
    p = parametrize(h)
    if t_max is None:
        t_max = min(adaptive_t_max(p), p.t_for_distance(SAMPLE_RHO))
    if t_max <= p.t0:
        raise OutOfDomain(f"t_max={t_max} does not exceed t0={p.t0}")
    u = np.linspace(0.0, 1.0, n)
    ts = p.t0 + (t_max - p.t0) * u * u  # dense near the apex where x ~ sqrt(t - t0)
    out = []
    for br in (Branch.MINUS, Branch.PLUS):
        xs, ys = p.points(ts, br)
        rows = [(float(t), br, HPoint(float(x), float(y))) for t, x, y in zip(ts, xs, ys)]
        out.extend(rows[::-1] if br is Branch.MINUS else rows)
    return out


def sample(h: SquareHyperbola, n: int, t_max: Optional[float] = None) -> list[HPoint]:
    """n points per branch ordered along the curve (MINUS reversed, then PLUS).

    For k = 0, n points along the equidistant geodesic.
    """
    return [pt for _, _, pt in sample_params(h, n, t_max)]


def side_sign(h: SquareHyperbola, n: int = 100) -> int:
    """Common side of the locus relative to SH^0(z, w), in ``side_of`` convention."""
    if h.k == 0:
        return 0
    pts = sample(h, n)
    L = equidistant_line(h.z, h.w)
    s = side_arrays(L, [q.x for q in pts], [q.y for q in pts])
    vals = set(int(v) for v in s if v != 0)
    if len(vals) > 1:
        raise MixedSides(f"{h} has samples on both sides of its equidistant line")
    return vals.pop() if vals else 0


# ray intersections -------------------------------------------------------------

def ray_intersections(p: HyperbolaParam, kappa: float, frame: str = "normalized",
                      t_max: Optional[float] = None, n_scan: int = 4000):
    """Parameters (t, branch) where the curve meets the ray y = kappa x, x > 0 if kappa > 0.

    ``frame="normalized"`` uses normalized coordinates (only the branch on the
    ray's side can meet it); ``frame="original"`` uses the original coordinates
    and scans both branches.
    """
    if frame not in ("normalized", "original"):
        raise ValueError(f"unknown frame {frame!r}")
    if t_max is None:
        t_max = p.t_for_distance(RHO_MAX)
    u = np.linspace(0.0, 1.0, n_scan)
    ts = p.t0 + (t_max - p.t0) * u * u
    found = []
    if frame == "normalized":
        branches = [Branch.PLUS if kappa > 0 else Branch.MINUS]
    else:
        branches = [Branch.MINUS, Branch.PLUS]
    for br in branches:
        if frame == "normalized":
            def xy(t, br=br):
                return p.normalized_signed(t, br)
        else:
            def xy(t, br=br):
                return p.points(t, br)

        def f(t, xy=xy):
            x, y = xy(t)
            # only the half-line on the kappa side counts
            val = np.asarray(y - kappa * x, dtype=float)
            return val

        x, y = xy(ts)
        fs = y - kappa * x
        on_ray_side = np.sign(x) == np.sign(kappa)
        for i, j in roots.sign_change_brackets(ts, fs):
            if not (on_ray_side[i] or on_ray_side[j]):
                continue
            t = ts[i] if i == j else roots.bisect(lambda s: float(f(s)), ts[i], ts[j], float(fs[i]))
            found.append((float(t), br))
    found.sort(key=lambda item: item[0])
    return found


def ray_geodesic_intersections(L: Geodesic, kappa: float) -> list[HPoint]:
    """Points where a geodesic meets the Euclidean ray y = kappa x from the origin."""
    sgn = 1.0 if kappa > 0 else -1.0
    if L.is_vertical:
        v = L.p.value
        return [HPoint(v, kappa * v)] if v * sgn > 0 else []
    c, r = L.center, L.radius
    # |s (1, kappa) sgn - (c, 0)| = r, s > 0
    A = 1.0 + kappa * kappa
    B = -2.0 * c * sgn
    C = c * c - r * r
    disc = B * B - 4 * A * C
    if disc < 0:
        return []
    out = []
    for s in sorted({(-B - math.sqrt(disc)) / (2 * A), (-B + math.sqrt(disc)) / (2 * A)}):
        if s > 0:
            out.append(HPoint(sgn * s, abs(kappa) * s))
    return out


# curve-curve intersection ---------------------------------------------------------

@dataclass(frozen=True)
class Crossing:
    point: HPoint
    t: float
    branch: Branch
    residuals: tuple[float, float]


class CurveScan:
    """Sampled parametrization of a square hyperbola (or geodesic when k == 0)."""

    def __init__(self, h: SquareHyperbola, n: int = 400, rho_max: float = RHO_MAX,
                 t_cap: float = math.inf):
        self.h = h
        if h.k == 0:
            self.param = None
            self.line = equidistant_line(h.z, h.w)
            self.t_lo = 0.0
            self.ts = np.linspace(0.0, rho_max, 2 * n)
        else:
            p = parametrize(h)
            self.param = p
            self.line = None
            self.t_lo = p.t0
            t_hi = min(max(p.t_for_distance(rho_max), p.t0 + 1.0), max(t_cap, p.t0 + 1e-6))
            u = np.linspace(0.0, 1.0, n)
            near = p.t0 + (t_hi - p.t0) * u * u
            rho0 = p.sqrt_k * math.cosh(p.t0)
            rhos = np.linspace(rho0, max(rho_max, rho0 + 1.0), n)
            far = np.arccosh(np.maximum(rhos / p.sqrt_k, 1.0))
            far = far[(far >= p.t0) & (far <= t_hi)]
            self.ts = np.unique(np.concatenate([near, far]))

    def xy(self, t, br: Branch):
        if self.param is None:
            return _geodesic_points(self.line, br.value * np.asarray(t, dtype=float))
        return self.param.points(t, br)

    def point(self, t: float, br: Branch) -> HPoint:
        x, y = self.xy(t, br)
        return HPoint(float(x), float(y))


def curve_intersections(A: SquareHyperbola, B: SquareHyperbola, n: int = 400,
                        rho_max: float = RHO_MAX, max_iter: int = roots.MAX_BISECT,
                        both_ways: bool = True, t_cap: float = math.inf) -> list[Crossing]:
    """Intersection points of two curves, found by scanning B's implicit value along A.

    This is a semi-decision: tangential contacts and crossings beyond
    ``rho_max`` are not found. When nothing turns up, the roles are swapped
    once as a fallback. Coincident loci return a few sample points.
    """
    if A == B:
        scan = CurveScan(A, n=8, rho_max=2.0)
        pts = [scan.point(scan.ts[0], Branch.PLUS)]
        pts += [scan.point(scan.ts[-1], br) for br in Branch]
        return [Crossing(q, 0.0, Branch.PLUS, (abs(implicit_value(A, q)), abs(implicit_value(B, q))))
                for q in pts]
    out = _scan_intersections(A, B, n, rho_max, max_iter, t_cap)
    if not out and both_ways:
        out = _scan_intersections(B, A, n, rho_max, max_iter, t_cap)
    return out


def _scan_intersections(A, B, n, rho_max, max_iter, t_cap):
    scan = CurveScan(A, n=n, rho_max=rho_max, t_cap=t_cap)
    found: list[Crossing] = []
    for br in (Branch.MINUS, Branch.PLUS):
        x, y = scan.xy(scan.ts, br)
        fs = B.value_arrays(x, y)
        if np.all(np.abs(fs) < 1e-10):
            continue

        def f(t, br=br):
            xx, yy = scan.xy(t, br)
            return float(B.value_arrays(xx, yy))

        for i, j in roots.sign_change_brackets(scan.ts, fs):
            t = scan.ts[i] if i == j else roots.bisect(f, scan.ts[i], scan.ts[j], float(fs[i]),
                                                       max_iter=max_iter)
            q = scan.point(t, br)
            found.append(Crossing(q, float(t), br,
                                  (abs(implicit_value(A, q)), abs(implicit_value(B, q)))))
    return _dedupe(found)


def _dedupe(cs: list[Crossing], tol: float = 1e-9) -> list[Crossing]:
    out: list[Crossing] = []
    for c in cs:
        if any(abs(c.point.x - o.point.x) <= tol * max(1, abs(o.point.x))
               and abs(c.point.y - o.point.y) <= tol * max(1e-300, abs(o.point.y), 1e-9)
               for o in out):
            continue
        out.append(c)
    return out
