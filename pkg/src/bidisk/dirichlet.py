"""Dirichlet half-spaces and domains for cyclic groups acting on the bidisk.

Also hosts the two experiment drivers: the on-axis two-face check and the
off-axis search for intersecting square hyperbolae.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .config import SearchConfig
from .equidistant import Hypersurface, LeafWitness, hypersurfaces_intersect
from .errors import PreconditionFailed
from .hplane import (HPoint, IsometryClass, Mobius, apply, axis, classify, dist_arrays,
                     equidistant_line, fmt, geodesic_through)
from .product import BidiskIsometry, BidiskPoint, rho
from .sqhyperbola import (Branch, Crossing, SquareHyperbola, _geodesic_points,
                          curve_intersections, parametrize, ray_intersections)

MARGIN = 1e-6


@dataclass(frozen=True)
class HalfSpace:
    p: BidiskPoint
    q: BidiskPoint

    def boundary(self) -> Hypersurface:
        return Hypersurface(self.p, self.q)


def halfspace_contains(hs: HalfSpace, x: BidiskPoint, tol: float = 1e-12) -> bool:
    return rho(x, hs.p) <= rho(x, hs.q) + tol


@dataclass(frozen=True)
class CyclicDomainSpec:
    gamma: BidiskIsometry
    p: BidiskPoint
    N: int = 6

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be a positive integer")
        if self.gamma.is_identity():
            raise PreconditionFailed("gamma must not be the identity")

    def powers(self) -> list[int]:
        return [n for n in range(-self.N, self.N + 1) if n != 0]

    def orbit(self, n: int) -> BidiskPoint:
        return (self.gamma ** n)(self.p)

    def halfspace(self, n: int) -> HalfSpace:
        return HalfSpace(self.p, self.orbit(n))


def domain_membership(spec: CyclicDomainSpec, x: BidiskPoint, tol: float = 1e-12) -> bool:
    return all(halfspace_contains(spec.halfspace(n), x, tol) for n in spec.powers())


def _require_hyperbolic_pair(gamma: BidiskIsometry):
    if gamma.swap:
        raise PreconditionFailed("gamma must not swap the factors")
    for g in (gamma.g1, gamma.g2):
        if classify(g) is not IsometryClass.HYPERBOLIC:
            raise PreconditionFailed(f"factor {g} is not hyperbolic")


# face counting ----------------------------------------------------------------------

@dataclass(frozen=True)
class FaceSampling:
    k_max: float = 20.0
    k_count: int = 41
    t_count: int = 61
    reach: float = 8.0      # sampled leaf points stay within this distance of the wall's basepoints
    margin: float = MARGIN


@dataclass(frozen=True)
class FaceWitness:
    n: int
    k: float
    t1: float
    t2: float
    branch1: Branch
    branch2: Branch
    point: BidiskPoint
    residual: float
    margin: float

    def csv_row(self) -> str:
        return ",".join([str(self.n), fmt(self.k), fmt(self.t1), fmt(self.t2),
                         self.branch1.symbol, self.branch2.symbol, self.point.to_csv(),
                         fmt(self.residual)])


FACE_CSV_HEADER = "n,k,t1,t2,branch1,branch2,x1,y1,x2,y2,residual"


@dataclass
class FaceReport:
    powers: list[int]
    witnesses: list[FaceWitness]
    sampling: FaceSampling
    N: int

    @property
    def count(self) -> int:
        return len(self.powers)

    def to_csv(self) -> str:
        return "\n".join([FACE_CSV_HEADER] + [w.csv_row() for w in self.witnesses]) + "\n"

    def summary(self) -> str:
        s = self.sampling
        return (f"faces: {self.count} powers: {' '.join(str(n) for n in self.powers)}\n"
                f"grid: k in [-{fmt(s.k_max)}, {fmt(s.k_max)}] x {s.k_count}, "
                f"t x {s.t_count} per branch, N={self.N}, margin={s.margin:g}\n")


def _factor_samples(h: SquareHyperbola, count: int, reach: float):
    """(t, branch sign, x, y) arrays over both branches of a factor curve."""
    if h.k == 0:
        L = equidistant_line(h.z, h.w)
        s = np.linspace(-reach, reach, 2 * count)
        x, y = _geodesic_points(L, s)
        return s, np.where(s >= 0, 1, -1), x, y
    p = parametrize(h)
    t_hi = max(p.t_for_distance(reach + abs(h.k) ** 0.5), p.t0 + 1e-3)
    u = np.linspace(0.0, 1.0, count)
    ts = p.t0 + (t_hi - p.t0) * u * u
    cols = []
    for br in (Branch.MINUS, Branch.PLUS):
        x, y = p.points(ts, br)
        cols.append((ts, np.full(ts.shape, br.value), x, y))
    return tuple(np.concatenate(c) for c in zip(*cols))


def _wall_witness(spec: CyclicDomainSpec, n: int, others: dict, s: FaceSampling) -> Optional[FaceWitness]:
    p, q = spec.p, spec.orbit(n)
    h = Hypersurface(p, q)
    if h.degenerate_factor is not None:
        return None
    ks = sorted(np.linspace(-s.k_max, s.k_max, s.k_count), key=lambda k: (abs(k), k))
    for k in ks:
        leaf = h.leaf(float(k))
        t1, b1, x1, y1 = _factor_samples(leaf.first, s.t_count, s.reach)
        t2, b2, x2, y2 = _factor_samples(leaf.second, s.t_count, s.reach)
        good = (y1 > 0)[:, None] & (y2 > 0)[None, :]
        dp = (dist_arrays(x1, y1, p.first.x, p.first.y) ** 2)[:, None] + \
             (dist_arrays(x2, y2, p.second.x, p.second.y) ** 2)[None, :]
        rp = np.sqrt(dp)
        slack = np.full(dp.shape, np.inf)
        for m, o in others.items():
            if m == n:
                continue
            do = (dist_arrays(x1, y1, o.first.x, o.first.y) ** 2)[:, None] + \
                 (dist_arrays(x2, y2, o.second.x, o.second.y) ** 2)[None, :]
            slack = np.minimum(slack, np.sqrt(do) - rp)
        ok = good & (slack > s.margin)
        if not ok.any():
            continue
        # the sample with the most slack is the most robust witness
        i, j = np.unravel_index(np.argmax(np.where(ok, slack, -np.inf)), ok.shape)
        pt = BidiskPoint(HPoint(float(x1[i]), float(y1[i])), HPoint(float(x2[j]), float(y2[j])))
        return FaceWitness(n, float(k), float(t1[i]), float(t2[j]),
                           Branch(int(b1[i])), Branch(int(b2[j])), pt,
                           abs(rho(pt, p) - rho(pt, q)), float(slack[i, j]))
    return None


def face_count(spec: CyclicDomainSpec, sampling: FaceSampling = FaceSampling()) -> FaceReport:
    """Powers n whose wall E(p, gamma^n p) shows a sampled point strictly inside
    every other half-space. Under-sampling can only undercount."""
    others = {n: spec.orbit(n) for n in spec.powers()}
    powers, wits = [], []
    for n in spec.powers():
        w = _wall_witness(spec, n, others, sampling)
        if w is not None:
            powers.append(n)
            wits.append(w)
    return FaceReport(powers, wits, sampling, spec.N)


# on-axis disjointness check ------------------------------------------------------------

def axis_basepoint(gamma: BidiskIsometry) -> BidiskPoint:
    """Top point of each factor axis."""
    _require_hyperbolic_pair(gamma)
    return BidiskPoint(axis(gamma.g1).point_at(0.0), axis(gamma.g2).point_at(0.0))


def on_axis(g: Mobius, z: HPoint, tol: float = 1e-9) -> bool:
    return geodesic_through(z, apply(g, z)).isclose(axis(g), tol)


@dataclass
class TheoremReport:
    gamma: BidiskIsometry
    z: BidiskPoint
    witnesses: list[LeafWitness]
    ray_max_hits: int           # most hits on a single branch over all ray tests
    ray_tests: int
    faces: Optional[FaceReport]

    @property
    def disjoint(self) -> bool:
        return not self.witnesses

    @property
    def passed(self) -> bool:
        faces_ok = self.faces is None or self.faces.count == 2
        return self.disjoint and self.ray_max_hits <= 1 and faces_ok


RAY_MS = (-8.0, -2.0, -0.5, 0.5, 2.0, 8.0, 30.0)
RAY_KAPPAS = (0.05, 0.15, 0.5, 2.0, 10.0)


def theorem_check(gamma: BidiskIsometry, z: Optional[BidiskPoint] = None,
                  search: SearchConfig = SearchConfig(), faces: bool = True,
                  sampling: FaceSampling = FaceSampling(), N: int = 6) -> TheoremReport:
    """Bounded check that E(z, gz) and E(z, g^-1 z) are disjoint for z on the invariant flat."""
    _require_hyperbolic_pair(gamma)
    if z is None:
        z = axis_basepoint(gamma)
    for g, zi in ((gamma.g1, z.first), (gamma.g2, z.second)):
        if not on_axis(g, zi):
            raise PreconditionFailed(f"{zi} is not on the axis of {g}; use offaxis_search")
    h1 = Hypersurface(z, gamma(z))
    h2 = Hypersurface(z, gamma.inverse()(z))
    wits = hypersurfaces_intersect(h1, h2, search)
    worst, tests = 0, 0
    for g, zi in ((gamma.g1, z.first), (gamma.g2, z.second)):
        gz = apply(g, zi)
        for m in RAY_MS:
            p = parametrize(SquareHyperbola(gz, zi, m))
            for kappa in RAY_KAPPAS:
                for sgn in (1.0, -1.0):
                    hits = ray_intersections(p, sgn * kappa)
                    tests += 1
                    for br in Branch:
                        worst = max(worst, sum(1 for _, b in hits if b is br))
    fr = face_count(CyclicDomainSpec(gamma, z, N), sampling) if faces else None
    return TheoremReport(gamma, z, wits, worst, tests, fr)


def random_on_axis_config(rng: np.random.Generator) -> tuple[BidiskIsometry, BidiskPoint]:
    """Conjugated hyperbolic pair with translation lengths in [0.3, 3] and a basepoint on its axes."""
    gs, zs = [], []
    for _ in range(2):
        ell = rng.uniform(0.3, 3.0)
        c = Mobius.from_seq(_random_sl2(rng))
        g = c @ Mobius.dilation(math.exp(ell)) @ c.inverse()
        gs.append(g)
        zs.append(apply(c, HPoint(0.0, math.exp(rng.uniform(-1.0, 1.0)))))
    return BidiskIsometry(gs[0], gs[1]), BidiskPoint(zs[0], zs[1])


def _random_sl2(rng: np.random.Generator):
    while True:
        a, b, c = rng.uniform(-2.0, 2.0, size=3)
        if abs(a) > 0.2:
            return (a, b, c, (1.0 + b * c) / a)


# off-axis experiment ---------------------------------------------------------------------

@dataclass
class OffAxisReport:
    g: Mobius
    z0: HPoint
    on_axis: bool
    hits: dict = field(default_factory=dict)     # k -> list of Crossing

    @property
    def smallest_k(self) -> Optional[float]:
        ks = [k for k, v in self.hits.items() if v]
        return min(ks, key=lambda k: (abs(k), k)) if ks else None

    @property
    def witnesses(self) -> list[Crossing]:
        k = self.smallest_k
        return [] if k is None else self.hits[k]

    def to_csv(self) -> str:
        rows = ["k,t,branch,x,y,residual"]
        for k in sorted(self.hits):
            for c in self.hits[k]:
                rows.append(",".join([fmt(k), fmt(c.t), c.branch.symbol, c.point.to_csv(),
                                      fmt(max(c.residuals))]))
        return "\n".join(rows) + "\n"


def offaxis_pair(g: Mobius, z0: HPoint, k: float) -> tuple[SquareHyperbola, SquareHyperbola]:
    return (SquareHyperbola(apply(g.inverse(), z0), z0, k), SquareHyperbola(z0, apply(g, z0), k))


def offaxis_witnesses(g: Mobius, z0: HPoint, k: float,
                      search: SearchConfig = SearchConfig()) -> list[Crossing]:
    A, B = offaxis_pair(g, z0, k)
    found = curve_intersections(A, B, n=search.t_samples, rho_max=search.rho_max,
                                max_iter=search.max_bisect, t_cap=search.t_scan)
    return [c for c in found if max(c.residuals) < search.residual_tol]


def offaxis_search(g: Mobius, z0: HPoint, k_range: Optional[Iterable[float]] = None,
                   search: SearchConfig = SearchConfig()) -> OffAxisReport:
    """Search SH^k(g^-1 z0, z0) n SH^k(z0, g z0) over k. On-axis z0 is allowed
    and flagged; there the search is expected to come back empty."""
    if classify(g) is not IsometryClass.HYPERBOLIC:
        raise PreconditionFailed(f"{g} is not hyperbolic")
    if k_range is None:
        k_range = search.k_grid()
    rep = OffAxisReport(g, z0, on_axis(g, z0))
    for k in k_range:
        k = float(k)
        if k == 0:
            continue
        rep.hits[k] = offaxis_witnesses(g, z0, k, search)
    return rep


def offaxis_threshold_map(heights: Sequence[float] = (0.25, 0.5, 1.0), x0: float = 1.0,
                          lam: float = 2.0, k_range=None,
                          search: SearchConfig = SearchConfig()) -> dict:
    """Smallest witnessing |k| (or None) for z0 = x0 + hI. Recorded, not asserted."""
    g = Mobius.dilation(lam)
    out = {}
    for h in heights:
        k = offaxis_search(g, HPoint(x0, h), k_range, search).smallest_k
        out[h] = k
    return out


# ray double crossing -------------------------------------------------------------------

@dataclass
class RayDoubleCrossing:
    m: float
    kappa: float
    curve: SquareHyperbola
    points: list[HPoint]          # the witness w and g(w), both on the ray
    ray_hits: list[HPoint]        # every crossing of the full ray with the curve

    def is_marked(self, q: HPoint) -> bool:
        return any(_near(q, p) for p in self.points)


def _near(p: HPoint, q: HPoint, tol: float = 1e-7) -> bool:
    return abs(p.x - q.x) <= tol * max(1.0, abs(q.x)) and abs(p.y - q.y) <= tol * max(1.0, q.y)


def find_ray_double_crossing(g: Mobius, z0: HPoint, m: Optional[float] = None,
                             target_kappa: float = 0.15,
                             search: SearchConfig = SearchConfig()) -> Optional[RayDoubleCrossing]:
    """A ray y = kappa x from the origin meeting SH^m(z0, g z0) at w and g(w).

    For g a dilation, a witness w of the off-axis intersection lies on
    SH^m(z0, g z0) together with g(w), and both sit on the ray through w.
    With m unset, the smallest |m| in the search grid that has a witness is used.
    """
    if m is None:
        k_range = [k for k in search.k_grid() if k != 0]
        k_range.sort(key=lambda k: (abs(k), k))
    else:
        k_range = [m]
    for k in k_range:
        best = None
        curve = SquareHyperbola(z0, apply(g, z0), float(k))
        for c in offaxis_witnesses(g, z0, float(k), search):
            w = c.point
            if w.x == 0:
                continue
            gw = apply(g, w)
            kappa = w.y / w.x
            p = parametrize(curve)
            hits = []
            for t, br in ray_intersections(p, kappa, frame="original"):
                x, y = p.points(t, br)
                hits.append(HPoint(float(x), float(y)))
            if not (any(_near(h, w) for h in hits) and any(_near(h, gw) for h in hits)):
                continue
            cand = RayDoubleCrossing(float(k), kappa, curve, [w, gw], hits)
            if best is None or abs(kappa - target_kappa) < abs(best.kappa - target_kappa):
                best = cand
        if best is not None:
            return best
    return None
