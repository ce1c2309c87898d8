import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from bidisk.errors import CoincidentPoints, NotHyperbolic
from bidisk.hplane import (I, Geodesic, HPoint, IdealPoint, IsometryClass, Mobius, apply,
                           axis, classify, dist, equidistant_line, fixed_points,
                           geodesic_through, geodesics_disjoint, normalize_pair, side_of)

coord = st.floats(-5, 5)
height = st.floats(0.05, 5)
points = st.builds(HPoint, coord, height)


@st.composite
def mobius(draw):
    a = draw(st.floats(0.3, 3) | st.floats(-3, -0.3))
    b = draw(st.floats(-3, 3))
    c = draw(st.floats(-3, 3))
    return Mobius(a, b, c, (1 + b * c) / a)


def test_point_rejects_lower_half_plane():
    with pytest.raises(ValueError):
        HPoint(0, 0)
    with pytest.raises(ValueError):
        HPoint(1, -1)
    with pytest.raises(ValueError):
        HPoint(math.inf, 1)


def test_distance_examples():
    assert dist(I, I) == 0
    assert dist(I, HPoint(0, 2)) == pytest.approx(math.log(2), abs=1e-15)
    d = dist(HPoint(1, 1), HPoint(-1, 1))
    assert d == pytest.approx(2 * math.atanh(1 / math.sqrt(2)), abs=1e-12)
    assert d == pytest.approx(oracles.dist_quadrature(1 + 1j, -1 + 1j), abs=1e-9)


@given(points, points)
def test_distance_matches_arccosh_form(z, w):
    ref = oracles.dist_arccosh(z.z, w.z)
    assert dist(z, w) == pytest.approx(ref, rel=1e-9, abs=1e-7)


def test_distance_matches_quadrature():
    rng = np.random.default_rng(3)
    for _ in range(5):
        z = complex(rng.uniform(-2, 2), rng.uniform(0.3, 2))
        w = complex(rng.uniform(-2, 2), rng.uniform(0.3, 2))
        assert dist(HPoint.from_complex(z), HPoint.from_complex(w)) == \
            pytest.approx(oracles.dist_quadrature(z, w), abs=1e-8)


def test_distance_far_apart_points_is_stable():
    # ratio |z-w|/|z-conj w| is within rounding of 1 here
    z, w = HPoint(0, 1e-7), HPoint(0, 1e7)
    assert dist(z, w) == pytest.approx(math.log(1e14), rel=1e-12)


@given(points, points, points)
def test_triangle_inequality(a, b, c):
    assert dist(a, c) <= dist(a, b) + dist(b, c) + 1e-9


@given(mobius(), points, points)
@settings(max_examples=300)
def test_distance_is_invariant(g, z, w):
    d = dist(z, w)
    assert abs(dist(apply(g, z), apply(g, w)) - d) < 1e-10 * max(1.0, d) * 10


def test_apply_examples():
    assert apply(Mobius.identity(), HPoint(3, 2)) == HPoint(3, 2)
    q = apply(Mobius(math.sqrt(2), 0, 0, 1 / math.sqrt(2)), I)
    assert (q.x, q.y) == pytest.approx((0, 2))
    q = apply(Mobius(1, 1, 0, 1), I)
    assert (q.x, q.y) == pytest.approx((1, 1))


def test_mobius_normalizes_and_rejects_orientation_reversal():
    m = Mobius(2, 0, 0, 2)
    assert (m.a, m.d) == pytest.approx((1, 1))
    with pytest.raises(ValueError):
        Mobius(0, 1, 1, 0)


@given(mobius(), mobius(), points)
def test_composition_acts_as_composition(g, h, z):
    lhs = apply(g @ h, z)
    rhs = apply(g, apply(h, z))
    assert dist(lhs, rhs) < 1e-7


def test_powers_and_inverse():
    g = Mobius(2, 1, 1, 1)
    assert (g ** 3).isclose(g @ g @ g)
    assert (g ** -2).isclose(g.inverse() @ g.inverse())
    assert (g @ g.inverse()).isclose(Mobius.identity())


def test_classify_examples():
    assert classify(Mobius.dilation(2)) is IsometryClass.HYPERBOLIC
    assert classify(Mobius.translation(1)) is IsometryClass.PARABOLIC
    assert classify(Mobius.rotation(math.pi / 4)) is IsometryClass.ELLIPTIC
    assert classify(Mobius(-1, 0, 0, -1)) is IsometryClass.IDENTITY


@given(mobius(), st.floats(0.1, 10))
def test_classify_ignores_scale_and_sign(g, s):
    h = Mobius(-s * g.a, -s * g.b, -s * g.c, -s * g.d)
    assert classify(h) is classify(g)


def test_fixed_points_match_quadratic_oracle():
    g = Mobius(2, 1, 1, 1)
    p, q = fixed_points(g)
    ref = oracles.fixed_points_numpy(2, 1, 1, 1)
    assert (p.value, q.value) == pytest.approx(ref)
    assert (p.value, q.value) == pytest.approx(((1 - math.sqrt(5)) / 2, (1 + math.sqrt(5)) / 2))


def test_axis_examples():
    assert axis(Mobius.dilation(2)).isclose(Geodesic.of(0, None))
    conj = Mobius.translation(5) @ Mobius.dilation(2) @ Mobius.translation(-5)
    assert axis(conj).isclose(Geodesic.of(5, None))
    L = axis(Mobius(2, 1, 1, 1))
    assert L.isclose(Geodesic.of((1 - math.sqrt(5)) / 2, (1 + math.sqrt(5)) / 2))
    with pytest.raises(NotHyperbolic):
        axis(Mobius.translation(1))


@given(mobius())
def test_axis_is_invariant(g):
    if classify(g) is not IsometryClass.HYPERBOLIC:
        return
    L = axis(g)
    for s in (-1.0, 0.0, 2.0):
        p = L.point_at(s)
        q = apply(g, p)
        assert side_of(L, q, tol=1e-7) == 0


def test_geodesic_through_examples():
    assert geodesic_through(I, HPoint(0, 2)).isclose(Geodesic.of(0, None))
    r2 = math.sqrt(2)
    assert geodesic_through(HPoint(1, 1), HPoint(-1, 1)).isclose(Geodesic.of(-r2, r2))
    assert geodesic_through(HPoint(1, 1), HPoint(3, 1)).isclose(Geodesic.of(2 - r2, 2 + r2))
    with pytest.raises(CoincidentPoints):
        geodesic_through(I, I)


def test_geodesic_canonical_order():
    assert Geodesic.of(2, -2) == Geodesic.of(-2, 2)
    assert Geodesic.of(None, 3) == Geodesic.of(3, math.inf)
    with pytest.raises(ValueError):
        Geodesic.of(1, 1)
    assert IdealPoint(1.0) < IdealPoint.INF


def test_equidistant_line_examples():
    assert equidistant_line(I, HPoint(0, 4)).isclose(Geodesic.of(-2, 2))
    assert equidistant_line(HPoint(1, 1), HPoint(3, 1)).isclose(Geodesic.of(2, None))
    a, b = 0.7, 3.1
    e = math.sqrt(a * b)
    assert equidistant_line(HPoint(0, a), HPoint(0, b)).isclose(Geodesic.of(-e, e))


@given(points, points)
def test_equidistant_line_is_equidistant(z, w):
    if dist(z, w) < 1e-3:
        return
    L = equidistant_line(z, w)
    for s in np.linspace(-3, 3, 50):
        x = L.point_at(float(s))
        assert abs(dist(x, z) - dist(x, w)) < 1e-9 * max(1.0, dist(x, z))


def test_side_of_examples():
    L = Geodesic.of(-2, 2)
    assert side_of(L, I) == -1
    assert side_of(L, HPoint(0, 4)) == 1
    assert side_of(L, HPoint(0, 2)) == 0
    assert side_of(Geodesic.of(2, None), HPoint(1, 1)) == -1


def test_normalize_pair_examples():
    g, d = normalize_pair(I, HPoint(0, 2))
    assert g.isclose(Mobius.identity()) and d == pytest.approx(math.log(2))
    g, d = normalize_pair(HPoint(1, 1), HPoint(1, 2))
    assert g.isclose(Mobius.translation(-1)) and d == pytest.approx(math.log(2))
    g, d = normalize_pair(HPoint(1, 1), HPoint(-1, 1))
    assert d == pytest.approx(1.7627471740390859, abs=1e-12)
    for src, dst in ((HPoint(1, 1), I), (HPoint(-1, 1), HPoint(0, math.exp(d)))):
        q = apply(g, src)
        assert (q.x, q.y) == pytest.approx((dst.x, dst.y), abs=1e-9)


@given(points, points)
def test_normalize_pair_round_trip(z, w):
    if dist(z, w) < 1e-3:
        return
    g, d = normalize_pair(z, w)
    a, b = apply(g, z), apply(g, w)
    assert abs(a.x) < 1e-9 and abs(a.y - 1) < 1e-9
    assert abs(b.x) < 1e-9 * math.exp(d) and abs(b.y / math.exp(d) - 1) < 1e-9


def test_geodesics_disjoint_examples():
    assert geodesics_disjoint(Geodesic.of(-2, 2), Geodesic.of(-4, 4))
    assert not geodesics_disjoint(Geodesic.of(-2, 2), Geodesic.of(0, None))
    assert geodesics_disjoint(Geodesic.of(0, 2), Geodesic.of(2, None))


@given(mobius(), points)
def test_consecutive_equidistant_lines_are_disjoint(g, z):
    if classify(g) in (IsometryClass.ELLIPTIC, IsometryClass.IDENTITY):
        return
    gz, g2z = apply(g, z), apply(g ** 2, z)
    if dist(z, gz) < 1e-3:
        return
    assert geodesics_disjoint(equidistant_line(z, gz), equidistant_line(gz, g2z))


def test_csv_format():
    assert HPoint(0.1, 2).to_csv() == "0.10000000000000001,2"
