"""Invariant suites behind ``bidisk verify``; each check reports what it measured."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import SearchConfig
from .dirichlet import (CyclicDomainSpec, domain_membership, offaxis_search,
                        offaxis_threshold_map, offaxis_witnesses, random_on_axis_config,
                        theorem_check)
from .equidistant import (Hypersurface, between, leaves_intersect, samevalue_reduce,
                          spines_equal)
from .errors import GeometryError
from .hplane import I, HPoint, Mobius, apply, dist, fmt
from .product import BidiskIsometry, BidiskPoint, flat_metric_defect, invariant_flat, rho
from .sqhyperbola import (Branch, SquareHyperbola, adaptive_t_max, implicit_value,
                          parametrize, point_at, ray_intersections)

SEED = 20240611


@dataclass
class Check:
    name: str
    passed: bool
    measured: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.measured}"


# random instances ------------------------------------------------------------------

def random_point(rng: np.random.Generator) -> HPoint:
    return HPoint(rng.uniform(-3.0, 3.0), math.exp(rng.uniform(-1.5, 1.5)))


def random_mobius(rng: np.random.Generator) -> Mobius:
    while True:
        a, b, c = rng.uniform(-2.0, 2.0, size=3)
        if abs(a) > 0.2:
            return Mobius(a, b, c, (1.0 + b * c) / a)


def random_axis_pair(rng: np.random.Generator) -> tuple[float, float]:
    """0 < a < b with ln(b/a) >= 0.1 (closer pairs push the curve out of float range)."""
    a = math.exp(rng.uniform(-1.5, 1.5))
    return a, a * math.exp(rng.uniform(0.1, 2.5))


def random_curve(rng: np.random.Generator, k_max: float = 10.0) -> SquareHyperbola:
    z = random_point(rng)
    w = random_point(rng)
    while dist(z, w) < 0.1:
        w = random_point(rng)
    k = rng.uniform(0.1, k_max) * rng.choice([-1.0, 1.0])
    return SquareHyperbola(z, w, k)


def _between_factor(rng: np.random.Generator):
    c = random_mobius(rng)
    s = np.cumsum(rng.uniform(0.4, 2.0, size=3))
    th = math.pi / 2 + rng.uniform(-0.35, 0.35, size=3)
    return [apply(c, HPoint.from_complex(math.exp(si) * complex(math.cos(t), math.sin(t))))
            for si, t in zip(s, th)]


def random_between_config(rng: np.random.Generator):
    """Random (x, y, z) with y between x and z (rejection sampled)."""
    while True:
        a, b = _between_factor(rng), _between_factor(rng)
        x, y, z = (BidiskPoint(a[i], b[i]) for i in range(3))
        if between(x, y, z):
            return x, y, z


def max_leaf_residual(h: Hypersurface, k: float, n: int = 10) -> float:
    worst = 0.0
    for x in h.leaf(k).sample(n):
        worst = max(worst, abs(rho(x, h.z) ** 2 - rho(x, h.w) ** 2))
    return worst


# suites ---------------------------------------------------------------------------------

def suite_metric(rng: np.random.Generator) -> list[Check]:
    out = []
    err = abs(dist(I, HPoint(0, 2)) - math.log(2))
    out.append(Check("dist(I, 2I) = ln 2", err < 1e-12, f"error {fmt(err)}"))
    worst = 0.0
    for _ in range(100):
        a, b = np.exp(rng.uniform(-5, 5, size=2))
        worst = max(worst, abs(dist(HPoint(0, a), HPoint(0, b)) - abs(math.log(b / a))))
    out.append(Check("dist(aI, bI) = |ln(b/a)|", worst < 1e-12, f"max error {fmt(worst)}"))
    worst = 0.0
    for _ in range(200):
        g = random_mobius(rng)
        z, w = random_point(rng), random_point(rng)
        d = dist(z, w)
        worst = max(worst, abs(dist(apply(g, z), apply(g, w)) - d) / max(1.0, d))
    out.append(Check("Mobius invariance of dist", worst < 1e-9, f"max rel error {fmt(worst)}"))
    worst = 0.0
    iota = BidiskIsometry.iota()
    for _ in range(200):
        p = BidiskPoint(random_point(rng), random_point(rng))
        q = BidiskPoint(random_point(rng), random_point(rng))
        worst = max(worst, abs(rho(iota(p), iota(q)) - rho(p, q)))
    out.append(Check("swap invariance of rho", worst < 1e-12, f"max error {fmt(worst)}"))
    gamma = BidiskIsometry(Mobius.dilation(2), Mobius.dilation(3))
    d = flat_metric_defect(invariant_flat(gamma), np.linspace(-2, 2, 5))
    out.append(Check("invariant flat is Euclidean", d < 1e-9, f"max defect {fmt(d)}"))
    return out


def suite_hyperbola(rng: np.random.Generator) -> list[Check]:
    out = []
    worst = 0.0
    for _ in range(50):
        h = random_curve(rng)
        p = parametrize(h)
        t_hi = p.t_for_distance(30.0)
        for t in np.linspace(p.t0, t_hi, 100):
            for br in Branch:
                try:
                    x = point_at(p, float(t), br)
                except GeometryError:
                    continue
                worst = max(worst, abs(implicit_value(h, x)))
    out.append(Check("parametrization residual", worst < 1e-8, f"max |d^2-d^2-k| {fmt(worst)}"))
    worst = 0.0
    for _ in range(20):
        a, b = random_axis_pair(rng)
        k = rng.uniform(0.1, 10.0) * rng.choice([-1.0, 1.0])
        p = parametrize(SquareHyperbola(HPoint(0, a), HPoint(0, b), k))
        t = adaptive_t_max(p)
        e = math.sqrt(a * b)
        for br in Branch:
            x, y = p.points(t, br)
            worst = max(worst, math.hypot(abs(float(x)) - e, float(y)))
    out.append(Check("endpoints at +-sqrt(ab)", worst < 1e-3, f"max distance {fmt(worst)}"))
    worst_d, worst_hits = math.inf, 0
    for _ in range(20):
        a, b = random_axis_pair(rng)
        p = parametrize(SquareHyperbola(HPoint(0, a), HPoint(0, b), rng.uniform(0.1, 10)))
        ts = np.linspace(p.t0 + 1e-3, p.t_for_distance(20.0), 200)
        hstep = 1e-6
        xa, y, _ = p.normalized(ts + hstep)
        xb, yb, _ = p.normalized(ts - hstep)
        deriv = (xa / y - xb / yb) / (2 * hstep)
        worst_d = min(worst_d, float(np.min(deriv)))
        for kappa in (0.05, 0.3, 1.0, 5.0):
            hits = ray_intersections(p, kappa)
            worst_hits = max(worst_hits, len(hits))
    out.append(Check("x/y strictly increasing", worst_d > 0, f"min derivative {fmt(worst_d)}"))
    out.append(Check("on-axis ray hits per branch <= 1", worst_hits <= 1, f"max hits {worst_hits}"))
    return out


def suite_foliation(rng: np.random.Generator) -> list[Check]:
    out = []
    worst, worst_rev, worst_iota = 0.0, 0.0, 0.0
    for _ in range(10):
        z = BidiskPoint(random_point(rng), random_point(rng))
        w = BidiskPoint(random_point(rng), random_point(rng))
        h = Hypersurface(z, w)
        k = rng.uniform(-8, 8)
        worst = max(worst, max_leaf_residual(h, k))
        rev = h.reversed().leaf(-k)
        for x in h.leaf(k).sample(6):
            worst_rev = max(worst_rev, abs(implicit_value(rev.first, x.first)),
                            abs(implicit_value(rev.second, x.second)))
        hi = h.swapped()
        for x in h.leaf(k).sample(6):
            xi = x.swapped()
            # swapped points lie on E^-k of the swapped pair
            r = abs(implicit_value(SquareHyperbola(hi.z.first, hi.w.first, -k), xi.first))
            r = max(r, abs(implicit_value(SquareHyperbola(hi.w.second, hi.z.second, -k), xi.second)))
            worst_iota = max(worst_iota, r)
    out.append(Check("leaf residual", worst < 1e-7, f"max |rho^2-rho^2| {fmt(worst)}"))
    out.append(Check("E^k(z,w) = E^-k(w,z)", worst_rev < 1e-7, f"max residual {fmt(worst_rev)}"))
    out.append(Check("swap sends E^k to E^-k", worst_iota < 1e-8, f"max residual {fmt(worst_iota)}"))
    h = Hypersurface(BidiskPoint(random_point(rng), random_point(rng)),
                     BidiskPoint(random_point(rng), random_point(rng)))
    d = flat_metric_defect(h.spine().flat, np.linspace(-2, 2, 5))
    out.append(Check("spine is flat", d < 1e-9, f"max defect {fmt(d)}"))
    return out


def samesign_trial(rng: np.random.Generator, search: SearchConfig):
    """One betweenness configuration with opposite-sign leaves; returns witness count."""
    x, y, z = random_between_config(rng)
    k = rng.uniform(0.2, 20.0)
    l = -rng.uniform(0.2, 20.0)
    if rng.random() < 0.5:
        k, l = -k, -l
    h1, h2 = Hypersurface(x, y), Hypersurface(y, z)
    return len(leaves_intersect(h1.leaf(k), h2.leaf(l), search))


def samevalue_trial(rng: np.random.Generator, search: SearchConfig):
    """(found a same-sign leaf witness, reduction also found one)."""
    x, y, z = random_between_config(rng)
    s = rng.choice([-1.0, 1.0])
    k, l = s * rng.uniform(0.2, 20.0), s * rng.uniform(0.2, 20.0)
    h1, h2 = Hypersurface(x, y), Hypersurface(y, z)
    if not leaves_intersect(h1.leaf(k), h2.leaf(l), search):
        return False, False
    rep = samevalue_reduce(x, y, z, k, l, search)
    return True, bool(rep.witnesses)


def suite_lemmas(rng: np.random.Generator, trials: int = 60) -> list[Check]:
    search = SearchConfig(t_samples=200)
    out = []
    bad = sum(samesign_trial(rng, search) for _ in range(trials))
    out.append(Check("opposite-sign leaves never meet", bad == 0,
                     f"{bad} witnesses over {trials} configurations"))
    found = ok = 0
    for _ in range(trials):
        f, r = samevalue_trial(rng, search)
        found += f
        ok += f and r
    out.append(Check("same-value reduction", ok == found,
                     f"{ok} of {found} leaf witnesses reproduced in one factor"))
    a = Hypersurface(BidiskPoint.of(0, .5, 0, .5), BidiskPoint.of(0, 2, 0, 2))
    b = Hypersurface(BidiskPoint.of(0, .25, 0, .25), BidiskPoint.of(0, 4, 0, 4))
    out.append(Check("shared spine", spines_equal(a, b), "unit semicircle in both factors"))
    return out


def suite_theorem(rng: np.random.Generator, configs: int = 20) -> list[Check]:
    out = []
    gamma = BidiskIsometry(Mobius.dilation(2), Mobius.dilation(3))
    rep = theorem_check(gamma)
    out.append(Check("(2z, 3z) at (I, I)", rep.passed,
                     f"witnesses {len(rep.witnesses)}, ray hits <= {rep.ray_max_hits}, "
                     f"faces {rep.faces.powers}"))
    fails = []
    for i in range(configs):
        g, z = random_on_axis_config(rng)
        r = theorem_check(g, z)
        if not r.passed:
            fails.append(i)
    out.append(Check(f"{configs} random on-axis configurations", not fails,
                     f"failures {fails}"))
    spec = CyclicDomainSpec(BidiskIsometry(Mobius.dilation(2), Mobius.dilation(2)),
                            BidiskPoint.of(0, 1, 0, 1))
    mid = BidiskPoint.of(0, math.sqrt(2), 0, math.sqrt(2))
    gap = min(rho(mid, spec.orbit(n)) - rho(mid, spec.p) for n in spec.powers())
    out.append(Check("midpoint lies in the domain", domain_membership(spec, mid, 1e-12),
                     f"min rho(x, gamma^n p) - rho(x, p) {fmt(gap)}"))
    return out


def suite_offaxis(rng: np.random.Generator) -> list[Check]:
    g = Mobius.dilation(2)
    z0 = HPoint(1.0, 0.25)
    wits = offaxis_witnesses(g, z0, 10.0)
    res = max((max(c.residuals) for c in wits), default=math.inf)
    out = [Check("k = 10 witness off the axis", bool(wits) and res < 1e-8,
                 f"{len(wits)} witnesses, max residual {fmt(res)}")]
    rep = offaxis_search(g, I)
    out.append(Check("no witness on the axis", rep.smallest_k is None,
                     f"smallest k {rep.smallest_k}"))
    m = offaxis_threshold_map(k_range=np.arange(0.5, 30.5, 0.5))
    out.append(Check("threshold map (recorded only)", True,
                     ", ".join(f"h={fmt(h)}: {k}" for h, k in m.items())))
    return out


SUITES: dict[str, Callable[[np.random.Generator], list[Check]]] = {
    "metric": suite_metric,
    "hyperbola": suite_hyperbola,
    "foliation": suite_foliation,
    "lemmas": suite_lemmas,
    "theorem": suite_theorem,
    "offaxis": suite_offaxis,
}


def run_suite(name: str, seed: int = SEED) -> list[Check]:
    return SUITES[name](np.random.default_rng(seed))
