import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bidisk.errors import BadIndex, NotHyperbolicPair
from bidisk.hplane import I, Geodesic, HPoint, Mobius, dist, side_of
from bidisk.product import (BidiskIsometry, BidiskPoint, Flat, bd_apply, flat_metric_defect,
                            invariant_flat, project, rho)
from bidisk.verify import random_mobius, random_point

points = st.builds(HPoint, st.floats(-4, 4), st.floats(0.1, 4))
bpoints = st.builds(BidiskPoint, points, points)


@st.composite
def isometries(draw):
    def mob():
        a = draw(st.floats(0.3, 3))
        b = draw(st.floats(-3, 3))
        c = draw(st.floats(-3, 3))
        return Mobius(a, b, c, (1 + b * c) / a)
    return BidiskIsometry(mob(), mob(), draw(st.booleans()))


def test_rho_examples():
    assert rho(BidiskPoint(I, I), BidiskPoint(I, I)) == 0
    assert rho(BidiskPoint(I, I), BidiskPoint(HPoint(0, 2), I)) == pytest.approx(math.log(2))
    got = rho(BidiskPoint(I, I), BidiskPoint(HPoint(0, 2), HPoint(0, 2)))
    assert got == pytest.approx(0.9802581, abs=1e-7)


@given(bpoints, bpoints, bpoints)
@settings(max_examples=300)
def test_rho_triangle_inequality(p, q, r):
    assert rho(p, r) <= rho(p, q) + rho(q, r) + 1e-9
    assert rho(p, q) == pytest.approx(rho(q, p), abs=1e-12)


@given(isometries(), bpoints, bpoints)
@settings(max_examples=200)
def test_isometries_preserve_rho(g, p, q):
    d = rho(p, q)
    assert abs(rho(g(p), g(q)) - d) < 1e-10 * max(1.0, d) * 10


def test_apply_examples():
    iota = BidiskIsometry.iota()
    assert iota(BidiskPoint(I, HPoint(0, 2))) == BidiskPoint(HPoint(0, 2), I)
    gamma = BidiskIsometry(Mobius.dilation(2), Mobius.dilation(3))
    q = bd_apply(gamma, BidiskPoint(I, I))
    assert (q.first.y, q.second.y) == pytest.approx((2, 3))


def test_iota_normalizes_the_product_group():
    rng = np.random.default_rng(2)
    iota = BidiskIsometry.iota()
    for _ in range(100):
        g1, g2 = random_mobius(rng), random_mobius(rng)
        p = BidiskPoint(random_point(rng), random_point(rng))
        lhs = (iota @ BidiskIsometry(g1, g2))(p)
        rhs = (BidiskIsometry(g2, g1) @ iota)(p)
        assert dist(lhs.first, rhs.first) < 1e-9 and dist(lhs.second, rhs.second) < 1e-9


@given(isometries(), isometries(), bpoints)
@settings(max_examples=100)
def test_composition_and_inverse(g, h, p):
    lhs, rhs = (g @ h)(p), g(h(p))
    assert rho(lhs, rhs) < 1e-6
    assert rho(g.inverse()(g(p)), p) < 1e-6


def test_iota_squared_is_identity():
    iota = BidiskIsometry.iota()
    assert (iota @ iota).is_identity()
    assert (iota ** 2).is_identity()
    g = BidiskIsometry(Mobius.dilation(2), Mobius.translation(1), True)
    assert (g ** 3).isclose(g @ g @ g)
    assert (g ** -1).isclose(g.inverse())


def test_project():
    p = BidiskPoint(I, HPoint(0, 2))
    assert project(p, 1) == I and project(p, 2) == HPoint(0, 2)
    assert project(BidiskIsometry.iota()(p), 1) == project(p, 2)
    for bad in (0, 3, "1"):
        with pytest.raises(BadIndex):
            project(p, bad)


def test_invariant_flat():
    gamma = BidiskIsometry(Mobius.dilation(2), Mobius.dilation(3))
    assert invariant_flat(gamma).isclose(Flat(Geodesic.of(0, None), Geodesic.of(0, None)))
    with pytest.raises(NotHyperbolicPair):
        invariant_flat(BidiskIsometry(Mobius.dilation(2), Mobius.dilation(3), True))
    with pytest.raises(NotHyperbolicPair):
        invariant_flat(BidiskIsometry(Mobius.dilation(2), Mobius.translation(1)))


def _image(g, L):
    return Geodesic.of(*(g.apply_ideal(e).value for e in (L.p, L.q)))


def test_invariant_flat_is_equivariant():
    h, k = Mobius(1, 0.5, 0.3, 1.15), Mobius.translation(-2)
    gamma = BidiskIsometry(Mobius.dilation(2), Mobius(2, 1, 1, 1))
    conj = BidiskIsometry(h, k) @ gamma @ BidiskIsometry(h, k).inverse()
    F = invariant_flat(conj)
    base = invariant_flat(gamma)
    assert F.isclose(Flat(_image(h, base.l1), _image(k, base.l2)), 1e-7)
    for s1 in (-1.0, 0.0, 1.5):
        for s2 in (-2.0, 0.5):
            q = conj(F.point_at(s1, s2))
            assert side_of(F.l1, q.first, tol=1e-7) == 0
            assert side_of(F.l2, q.second, tol=1e-7) == 0


def test_flat_metric_is_euclidean():
    s = np.linspace(-2, 2, 5)
    assert flat_metric_defect(Flat(Geodesic.of(0, None), Geodesic.of(-1, 1)), s) < 1e-9
    assert flat_metric_defect(Flat(Geodesic.of(-3, 0.5), Geodesic.of(2, None)), s) < 1e-9


def test_csv():
    assert BidiskPoint.of(0, 1, -0.0, 2).to_csv() == "0,1,0,2"
