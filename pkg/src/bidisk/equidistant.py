"""Equidistant hypersurfaces E(z, w) of the bidisk and their leaves.

E(z, w) is the union over k of the leaves E^k(z, w) = SH^k(z1, w1) x SH^k(w2, z2).
Note the reversed order in the second factor. Intersection searches are
bounded: an empty result means nothing was found within the configured
(k, l) box and scan range, not that the hypersurfaces are disjoint.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import SearchConfig
from .errors import CoincidentPoints, DegenerateFactor, PreconditionFailed
from .hplane import (Geodesic, HPoint, dist, equidistant_line, geodesics_disjoint,
                     side_of)
from .product import BidiskIsometry, BidiskPoint, Flat, rho
from .sqhyperbola import Branch, CurveScan, SquareHyperbola, curve_intersections


@dataclass(frozen=True)
class Hypersurface:
    z: BidiskPoint
    w: BidiskPoint

    def __post_init__(self):
        if self.z == self.w:
            raise CoincidentPoints("hypersurface needs z != w")

    @property
    def degenerate_factor(self) -> Optional[int]:
        """1 or 2 when that factor's points coincide (locus is a product with H^2)."""
        if self.z.first == self.w.first:
            return 1
        if self.z.second == self.w.second:
            return 2
        return None

    def residual(self, x: BidiskPoint) -> float:
        return rho(x, self.z) - rho(x, self.w)

    def contains(self, x: BidiskPoint, tol: float = 1e-9) -> bool:
        if self.degenerate_factor == 1:
            return abs(dist(x.second, self.z.second) - dist(x.second, self.w.second)) <= tol
        if self.degenerate_factor == 2:
            return abs(dist(x.first, self.z.first) - dist(x.first, self.w.first)) <= tol
        return abs(self.residual(x)) <= tol

    def leaf(self, k: float) -> "Leaf":
        return leaf(self, k)

    def spine(self) -> "Spine":
        return spine(self)

    def reversed(self) -> "Hypersurface":
        return Hypersurface(self.w, self.z)

    def swapped(self) -> "Hypersurface":
        return Hypersurface(self.z.swapped(), self.w.swapped())


@dataclass(frozen=True)
class Leaf:
    k: float
    first: SquareHyperbola
    second: SquareHyperbola

    def sample(self, n: int = 10) -> list[BidiskPoint]:
        """Product grid of n x n points (fewer spread over both branches when k != 0)."""
        from .sqhyperbola import sample
        a = _spread(sample(self.first, max(2, n)), n)
        b = _spread(sample(self.second, max(2, n)), n)
        return [BidiskPoint(p, q) for p in a for q in b]


def _spread(pts, n):
    idx = np.linspace(0, len(pts) - 1, n).round().astype(int)
    return [pts[i] for i in idx]


@dataclass(frozen=True)
class Spine:
    flat: Flat


def _require_nondegenerate(h: Hypersurface):
    if h.degenerate_factor is not None:
        raise DegenerateFactor(f"factor {h.degenerate_factor} of {h} is degenerate")


def leaf(h: Hypersurface, k: float) -> Leaf:
    _require_nondegenerate(h)
    return Leaf(float(k), SquareHyperbola(h.z.first, h.w.first, k),
                SquareHyperbola(h.w.second, h.z.second, k))


def spine(h: Hypersurface) -> Spine:
    _require_nondegenerate(h)
    return Spine(Flat(equidistant_line(h.z.first, h.w.first),
                      equidistant_line(h.z.second, h.w.second)))


def spines_equal(h1: Hypersurface, h2: Hypersurface, tol: float = 1e-9) -> bool:
    return spine(h1).flat.isclose(spine(h2).flat, tol)


# betweenness --------------------------------------------------------------------

def _interior_point(L: Geodesic) -> HPoint:
    return L.point_at(0.0)


def slab_contains(L1: Geodesic, L2: Geodesic, p: HPoint) -> bool:
    """Whether p lies in the open region between two disjoint geodesics."""
    s1 = side_of(L1, _interior_point(L2))
    s2 = side_of(L2, _interior_point(L1))
    return s1 != 0 and s2 != 0 and side_of(L1, p) == s1 and side_of(L2, p) == s2


def between_h2(x: HPoint, y: HPoint, z: HPoint) -> bool:
    if x == y or y == z or x == z:
        raise CoincidentPoints("betweenness needs three distinct points")
    L1 = equidistant_line(x, y)
    L2 = equidistant_line(y, z)
    if not geodesics_disjoint(L1, L2):
        return False
    return slab_contains(L1, L2, y)


def between(x: BidiskPoint, y: BidiskPoint, z: BidiskPoint) -> bool:
    """y is between x and z in each factor."""
    return between_h2(x.first, y.first, z.first) and between_h2(x.second, y.second, z.second)


# invisibility ---------------------------------------------------------------------

class Verdict(enum.Enum):
    INVISIBLE = "invisible"
    VISIBLE = "visible"
    INCONCLUSIVE = "inconclusive"


def invisible_point(x: BidiskPoint, gamma: BidiskIsometry, y: BidiskPoint) -> bool:
    if gamma.is_identity():
        raise PreconditionFailed("gamma must not be the identity")
    r = rho(y, x)
    return r > rho(y, gamma(x)) or r > rho(y, gamma.inverse()(x))


def spine_invisibility_margin(x: BidiskPoint, gamma: BidiskIsometry, h: Hypersurface,
                              samples: int = 21, span: float = 6.0) -> float:
    """min over a spine grid of max(rho(s,x) - rho(s,gx), rho(s,x) - rho(s,g^-1 x))."""
    flat = spine(h).flat
    gx, gix = gamma(x), gamma.inverse()(x)
    worst = math.inf
    for s1 in np.linspace(-span, span, samples):
        for s2 in np.linspace(-span, span, samples):
            s = flat.point_at(s1, s2)
            r = rho(s, x)
            worst = min(worst, max(r - rho(s, gx), r - rho(s, gix)))
    return worst


def invisible_hypersurface(x: BidiskPoint, gamma: BidiskIsometry, h: Hypersurface,
                           samples: int = 21, config: SearchConfig = SearchConfig(),
                           margin: float = 1e-6) -> Verdict:
    """Decide invisibility of E(x, y) from its spine, when the disjointness
    hypotheses can be checked (no intersection with either neighbouring wall
    found by the bounded search)."""
    for g in (gamma, gamma.inverse()):
        other = Hypersurface(x, g(x))
        if other.degenerate_factor is not None or h.degenerate_factor is not None:
            return Verdict.INCONCLUSIVE
        if hypersurfaces_intersect(h, other, config, stop_after=1):
            return Verdict.INCONCLUSIVE
    m = spine_invisibility_margin(x, gamma, h, samples)
    return Verdict.INVISIBLE if m > margin else Verdict.VISIBLE


# intersections ----------------------------------------------------------------------

@dataclass(frozen=True)
class LeafWitness:
    k: float
    l: float
    point: BidiskPoint
    t1: float
    t2: float
    branch1: Branch
    branch2: Branch
    residuals: tuple = field(default=())

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0


def _leaf_witnesses(l1: Leaf, l2: Leaf, config: SearchConfig) -> list[LeafWitness]:
    kw = dict(n=config.t_samples, rho_max=config.rho_max, max_iter=config.max_bisect,
              t_cap=config.t_scan)
    c1 = curve_intersections(l1.first, l2.first, **kw)
    if not c1:
        return []
    c2 = curve_intersections(l1.second, l2.second, **kw)
    out = []
    for a in c1:
        for b in c2:
            res = a.residuals + b.residuals
            if max(res) < config.residual_tol:
                out.append(LeafWitness(l1.k, l2.k, BidiskPoint(a.point, b.point),
                                       a.t, b.t, a.branch, b.branch, res))
    return out


def leaves_intersect(l1: Leaf, l2: Leaf, search: SearchConfig = SearchConfig()) -> list[BidiskPoint]:
    """Common points found by factor-wise curve intersection (a semi-decision)."""
    return [w.point for w in _leaf_witnesses(l1, l2, search)]


def _value_range(curve: SquareHyperbola, other_z: HPoint, other_w: HPoint,
                 config: SearchConfig) -> tuple[float, float]:
    """Range of d^2(., other_z) - d^2(., other_w) along the sampled curve."""
    scan = CurveScan(curve, n=config.t_samples, rho_max=config.rho_max, t_cap=config.t_scan)
    probe = SquareHyperbola(other_z, other_w, 0.0)
    lo, hi = math.inf, -math.inf
    for br in Branch:
        x, y = scan.xy(scan.ts, br)
        v = probe.value_arrays(x, y)
        lo = min(lo, float(np.min(v)))
        hi = max(hi, float(np.max(v)))
    return lo, hi


def _chain(h1: Hypersurface, h2: Hypersurface):
    """Express (h1, h2) as (E(x,y), E(y,z)) up to reversal: returns x, y, z and
    the signs relating their leaf indices to those of h1, h2."""
    if h1.w == h2.z:
        return h1.z, h1.w, h2.w, 1, 1
    if h1.z == h2.z:
        return h1.w, h1.z, h2.w, -1, 1
    if h1.w == h2.w:
        return h1.z, h1.w, h2.z, 1, -1
    if h1.z == h2.w:
        return h1.w, h1.z, h2.z, -1, -1
    return None


def _samesign_pruner(h1: Hypersurface, h2: Hypersurface):
    ch = _chain(h1, h2)
    if ch is None:
        return None
    x, y, z, s1, s2 = ch
    try:
        if not between(x, y, z):
            return None
    except CoincidentPoints:
        return None
    # leaves E^k(x,y), E^l(y,z) can only meet when kl > 0
    return lambda k, l: (s1 * k) * (s2 * l) <= 0


def hypersurfaces_intersect(h1: Hypersurface, h2: Hypersurface,
                            search: SearchConfig = SearchConfig(),
                            stop_after: Optional[int] = None,
                            prefilter: bool = True) -> list[LeafWitness]:
    """Bounded search for points of E(h1) n E(h2) over a (k, l) grid.

    For each k the l-values that can possibly work in factor i form the range of
    h2's i-th implicit function along h1's i-th leaf curve; only grid cells inside
    both ranges (and not excluded by the same-sign rule when the points are in a
    betweenness configuration) are handed to the leaf intersection.
    ``prefilter=False`` visits every cell; it exists to cross-check the filter.
    """
    _require_nondegenerate(h1)
    _require_nondegenerate(h2)
    grid = search.k_grid()
    prune = _samesign_pruner(h1, h2) if prefilter else None
    out: list[LeafWitness] = []
    for k in grid:
        L1 = h1.leaf(k)
        if not prefilter:
            for l in grid:
                out.extend(_leaf_witnesses(L1, h2.leaf(l), search))
                if stop_after is not None and len(out) >= stop_after:
                    return out
            continue
        lo1, hi1 = _value_range(L1.first, h2.z.first, h2.w.first, search)
        if lo1 > search.k_max or hi1 < search.k_min:
            continue
        lo2, hi2 = _value_range(L1.second, h2.w.second, h2.z.second, search)
        lo, hi = max(lo1, lo2), min(hi1, hi2)
        if lo > hi:
            continue
        for l in grid[(grid >= lo) & (grid <= hi)]:
            if prune is not None and prune(k, l):
                continue
            out.extend(_leaf_witnesses(L1, h2.leaf(l), search))
            if stop_after is not None and len(out) >= stop_after:
                return out
    return out


# same-value reduction ------------------------------------------------------------------

@dataclass
class SameValueReport:
    factor: int          # factor of the original points where the test happens
    m: float
    used_iota: bool
    curves: tuple        # the two square hyperbolae whose intersection is tested
    witnesses: list


def samevalue_reduce(x: BidiskPoint, y: BidiskPoint, z: BidiskPoint, k: float, l: float,
                     search: SearchConfig = SearchConfig()) -> SameValueReport:
    """Single-factor reduction for intersecting leaves E^k(x,y), E^l(y,z) with kl > 0.

    Negative pairs are moved to positive ones by the factor swap, which sends
    E^k(x,y) to E^-k of the swapped points. With 0 < k < l the test is
    SH^l(x1,y1) n SH^l(y1,z1); with 0 < l < k it is SH^k(y2,x2) n SH^k(z2,y2).
    """
    if not between(x, y, z):
        raise PreconditionFailed("y is not between x and z")
    if not k * l > 0:
        raise PreconditionFailed("need kl > 0")
    used_iota = k < 0
    if used_iota:
        x, y, z = x.swapped(), y.swapped(), z.swapped()
        k, l = -k, -l
    if k <= l:
        m = l
        curves = (SquareHyperbola(x.first, y.first, m), SquareHyperbola(y.first, z.first, m))
        factor = 1
    else:
        m = k
        curves = (SquareHyperbola(y.second, x.second, m), SquareHyperbola(z.second, y.second, m))
        factor = 2
    if used_iota:
        factor = 3 - factor
    found = curve_intersections(*curves, n=search.t_samples, rho_max=search.rho_max,
                                max_iter=search.max_bisect, t_cap=search.t_scan)
    return SameValueReport(factor, m, used_iota, curves, found)
