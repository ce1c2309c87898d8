"""The bidisk H^2 x H^2: product points, metric, isometries and flats."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadIndex, NotHyperbolicPair
from .hplane import (Geodesic, HPoint, IsometryClass, Mobius, apply, axis,
                     classify, dist, dist_arrays, fmt)


@dataclass(frozen=True)
class BidiskPoint:
    first: HPoint
    second: HPoint

    @classmethod
    def of(cls, x1: float, y1: float, x2: float, y2: float) -> "BidiskPoint":
        return cls(HPoint(x1, y1), HPoint(x2, y2))

    def swapped(self) -> "BidiskPoint":
        return BidiskPoint(self.second, self.first)

    def to_csv(self) -> str:
        return ",".join(fmt(v) for v in (self.first.x, self.first.y, self.second.x, self.second.y))

    def __getitem__(self, i: int) -> HPoint:
        return project(self, i)


def project(p: BidiskPoint, i: int) -> HPoint:
    """Projection onto factor ``i`` (1 or 2)."""
    if i == 1:
        return p.first
    if i == 2:
        return p.second
    raise BadIndex(f"factor index must be 1 or 2, got {i!r}")


def rho(p: BidiskPoint, q: BidiskPoint) -> float:
    return math.hypot(dist(p.first, q.first), dist(p.second, q.second))


def rho2_arrays(x1, y1, x2, y2, q: BidiskPoint):
    d1 = dist_arrays(x1, y1, q.first.x, q.first.y)
    d2 = dist_arrays(x2, y2, q.second.x, q.second.y)
    return d1 * d1 + d2 * d2


@dataclass(frozen=True)
class BidiskIsometry:
    """(g1, g2), optionally followed by the factor swap.

    With ``swap`` the action is (z1, z2) -> (g1 z2, g2 z1).
    """

    g1: Mobius
    g2: Mobius
    swap: bool = False

    @classmethod
    def identity(cls) -> "BidiskIsometry":
        return cls(Mobius.identity(), Mobius.identity(), False)

    @classmethod
    def iota(cls) -> "BidiskIsometry":
        return cls(Mobius.identity(), Mobius.identity(), True)

    def __call__(self, p: BidiskPoint) -> BidiskPoint:
        return bd_apply(self, p)

    def __matmul__(self, other: "BidiskIsometry") -> "BidiskIsometry":
        # semidirect law: iota (h1, h2) = (h2, h1) iota
        if self.swap:
            g1, g2 = self.g1 @ other.g2, self.g2 @ other.g1
        else:
            g1, g2 = self.g1 @ other.g1, self.g2 @ other.g2
        return BidiskIsometry(g1, g2, self.swap != other.swap)

    def inverse(self) -> "BidiskIsometry":
        if self.swap:
            return BidiskIsometry(self.g2.inverse(), self.g1.inverse(), True)
        return BidiskIsometry(self.g1.inverse(), self.g2.inverse(), False)

    def __pow__(self, n: int) -> "BidiskIsometry":
        if not self.swap:
            return BidiskIsometry(self.g1 ** n, self.g2 ** n, False)
        base = self if n >= 0 else self.inverse()
        out = BidiskIsometry.identity()
        for _ in range(abs(n)):
            out = out @ base
        return out

    def is_identity(self) -> bool:
        return (not self.swap and classify(self.g1) is IsometryClass.IDENTITY
                and classify(self.g2) is IsometryClass.IDENTITY)

    def isclose(self, other: "BidiskIsometry", tol: float = 1e-9) -> bool:
        return (self.swap == other.swap and self.g1.isclose(other.g1, tol)
                and self.g2.isclose(other.g2, tol))


def bd_apply(gamma: BidiskIsometry, p: BidiskPoint) -> BidiskPoint:
    if gamma.swap:
        return BidiskPoint(apply(gamma.g1, p.second), apply(gamma.g2, p.first))
    return BidiskPoint(apply(gamma.g1, p.first), apply(gamma.g2, p.second))


@dataclass(frozen=True)
class Flat:
    """The product l1 x l2 of two geodesics."""

    l1: Geodesic
    l2: Geodesic

    def point_at(self, s1: float, s2: float) -> BidiskPoint:
        """Point with arc-length coordinates (s1, s2) along the two factors."""
        return BidiskPoint(self.l1.point_at(s1), self.l2.point_at(s2))

    def isclose(self, other: "Flat", tol: float = 1e-9) -> bool:
        return self.l1.isclose(other.l1, tol) and self.l2.isclose(other.l2, tol)


def invariant_flat(gamma: BidiskIsometry) -> Flat:
    if gamma.swap:
        raise NotHyperbolicPair("invariant_flat needs swap=False")
    if (classify(gamma.g1) is not IsometryClass.HYPERBOLIC
            or classify(gamma.g2) is not IsometryClass.HYPERBOLIC):
        raise NotHyperbolicPair("both factors must be hyperbolic")
    return Flat(axis(gamma.g1), axis(gamma.g2))


def flat_metric_defect(flat: Flat, s: np.ndarray) -> float:
    """Max |rho - Euclidean| over all pairs of grid points (s_i, s_j) on the flat."""
    pts = [(a, b, flat.point_at(a, b)) for a in s for b in s]
    worst = 0.0
    for i, (a1, b1, p) in enumerate(pts):
        for a2, b2, q in pts[i + 1:]:
            worst = max(worst, abs(rho(p, q) - math.hypot(a1 - a2, b1 - b2)))
    return worst
