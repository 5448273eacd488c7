"""Dyadic midpoint-radius enclosures."""

import random
from fractions import Fraction as F

import pytest
from mpmath import mp

from cmgamma.ball import Ball, round_nearest, round_up


def test_round_nearest_exact_when_representable():
    v, err = round_nearest(F(5), 20)
    assert v == 5 and err == 0


def test_round_nearest_error_bound():
    q = F(1, 3)
    v, err = round_nearest(q, 30)
    assert err > 0
    assert abs(q - v) <= err


def test_round_up_dominates():
    rng = random.Random(1)
    for _ in range(100):
        q = F(rng.randint(1, 10 ** 9), rng.randint(1, 10 ** 9))
        r = round_up(q)
        assert r >= q
        assert r / q < F(1001, 1000)


def test_exact_ball_keeps_rational():
    b = Ball.exact(F(1, 3), 64)
    assert b.rad == 0 and b.mid == F(1, 3)


def test_arithmetic_containment():
    rng = random.Random(42)
    for _ in range(100):
        a = F(rng.randint(-99, 99), rng.randint(1, 99))
        b = F(rng.randint(-99, 99), rng.randint(1, 99))
        ba = Ball.from_fraction(a, 64)
        bb = Ball.from_fraction(b, 64)
        assert (ba + bb).contains(a + b)
        assert (ba - bb).contains(a - b)
        assert (ba * bb).contains(a * b)
        assert (ba * b).contains(a * b)
        assert (-ba).contains(-a)


def test_product_containment_with_wide_radii():
    # sample endpoints and midpoints of both factors: all products must land
    # inside the product ball
    rng = random.Random(77)
    for _ in range(60):
        ma = F(rng.randint(-50, 50), rng.randint(1, 9))
        mb = F(rng.randint(-50, 50), rng.randint(1, 9))
        ra = F(rng.randint(0, 40), rng.randint(1, 9))
        rb = F(rng.randint(0, 40), rng.randint(1, 9))
        prod = Ball(ma, ra, 64) * Ball(mb, rb, 64)
        for a in (ma - ra, ma, ma + ra):
            for b in (mb - rb, mb, mb + rb):
                assert prod.contains(a * b)


def test_exp_enclosure_contains_truth():
    for q in (F(1, 3), F(-7, 2), F(5), F(0), F(191, 13)):
        ball = Ball.exp_of(q, 128)
        with mp.workprec(300):
            truth = mp.exp(mp.mpf(q.numerator) / q.denominator)
        assert ball.contains(truth)
        if q == 0:
            assert ball.is_exact() and ball.mid == 1


def test_exp_tightens_with_precision():
    lo = Ball.exp_of(F(2, 3), 64)
    hi = Ball.exp_of(F(2, 3), 256)
    assert hi.rad < lo.rad
    assert lo.contains(hi)


def test_sign():
    assert Ball(F(5), F(1), 53).sign() == 1
    assert Ball(F(-5), F(1), 53).sign() == -1
    assert Ball(F(0), F(1), 53).sign() == 0
    assert Ball.exact(0, 53).sign() == 0


def test_overlaps():
    a = Ball(F(0), F(1), 53)
    b = Ball(F(2), F(1), 53)
    c = Ball(F(3), F(1, 2), 53)
    assert a.overlaps(b)
    assert not a.overlaps(c)


def test_hull():
    h = Ball.hull(Ball.exact(1, 64), Ball.exact(3, 64))
    assert h.contains(F(1)) and h.contains(F(3)) and h.contains(F(2))


def test_from_endpoints_validates():
    with pytest.raises(ValueError):
        Ball.from_endpoints(F(2), F(1), 53)


def test_negative_radius_rejected():
    with pytest.raises(ValueError):
        Ball(F(0), F(-1), 53)


def test_str_shows_midpoint_and_radius():
    s = str(Ball(F(1, 3), F(1, 10 ** 12), 64))
    assert "+/-" in s and s.startswith("0.3333333")
