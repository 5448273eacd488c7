"""Certified polygamma enclosures and the quadrature cross-check."""

import math
import random
from fractions import Fraction as F

import pytest
from mpmath import mp

from cmgamma.ball import Ball
from cmgamma.errors import DomainError
from cmgamma.polygamma import (PrecisionPolicy, polygamma,
                               polygamma_quadrature_crosscheck,
                               polygamma_recurrence_shift)


def mp_psi(m, x, prec=400):
    with mp.workprec(prec):
        return mp.psi(m, mp.mpf(x.numerator) / x.denominator)


def test_trigamma_at_one_is_pi_squared_over_six():
    ball = polygamma(1, 1, 128)
    with mp.workprec(300):
        assert ball.contains(mp.pi ** 2 / 6)


def test_tetragamma_at_one_is_minus_two_zeta_three():
    ball = polygamma(2, 1, 128)
    with mp.workprec(300):
        assert ball.contains(-2 * mp.zeta(3))


def test_recursion_step_at_two():
    # psi'(2) = psi'(1) - 1
    at2 = polygamma(1, 2, 128)
    with mp.workprec(300):
        assert at2.contains(mp.pi ** 2 / 6 - 1)


def test_containment_against_independent_evaluation():
    rng = random.Random(2024)
    for _ in range(25):
        m = rng.randint(1, 6)
        x = F(rng.randint(1, 1000), rng.randint(1, 100))
        ball = polygamma(m, x, 128)
        assert ball.contains(mp_psi(m, x))


def test_relative_radius_meets_target():
    for m in (1, 2, 8, 16):
        for x in (F(1, 1024), F(1), F(50)):
            ball = polygamma(m, x, 128)
            assert ball.rad <= abs(ball.mid) * F(1, 2 ** 128)


def test_recurrence_invariant_randomized():
    # psi^(m)(x+1) == psi^(m)(x) + (-1)^m m! / x^(m+1) as overlapping balls
    rng = random.Random(77)
    for _ in range(20):
        m = rng.randint(1, 6)
        x = F(rng.randint(1, 100), rng.randint(1, 10))
        lhs = polygamma(m, x + 1, 96)
        step = F((-1) ** m * math.factorial(m)) / x ** (m + 1)
        rhs = polygamma(m, x, 96) + step
        assert lhs.overlaps(rhs)


def test_sign_invariant():
    rng = random.Random(5)
    for _ in range(20):
        m = rng.randint(1, 8)
        x = F(rng.randint(1, 80), rng.randint(1, 8))
        ball = polygamma(m, x, 64)
        expected = 1 if m % 2 == 1 else -1
        assert ball.sign() == expected


def test_monotonic_precision():
    for m in (1, 3):
        for x in (F(1, 3), F(7)):
            r1 = polygamma(m, x, 64).rad
            r2 = polygamma(m, x, 128).rad
            assert r2 <= r1


def test_containment_at_4x_precision():
    rng = random.Random(31337)
    for _ in range(15):
        m = rng.randint(1, 5)
        x = F(rng.randint(1, 60), rng.randint(1, 6))
        coarse = polygamma(m, x, 64)
        fine = polygamma(m, x, 256)
        assert coarse.contains(fine)


def test_ball_argument_uses_monotonicity():
    x = Ball.from_endpoints(F(2), F(21, 10), 128)
    ball = polygamma(1, x, 96)
    for probe in (F(2), F(21, 10), F(41, 20)):
        assert ball.contains(mp_psi(1, probe))


def test_domain_errors():
    with pytest.raises(DomainError):
        polygamma(0, 1)
    with pytest.raises(DomainError):
        polygamma(1, 0)
    with pytest.raises(DomainError):
        polygamma(1, F(-3, 2))
    with pytest.raises(DomainError):
        polygamma(33, 1)


def test_policy_guard_bits():
    pol = PrecisionPolicy(target_bits=64, guard_bits_per_order=10)
    assert pol.working_bits(3) == 64 + 32 + 30
    with pytest.raises(ValueError):
        PrecisionPolicy(target_bits=4)


class TestRecurrenceShift:
    def test_identity_at_k_zero(self):
        direct = polygamma(1, 3, 128)
        shifted = polygamma_recurrence_shift(1, 3, 0, 128)
        assert shifted.mid == direct.mid and shifted.rad == direct.rad

    def test_shift_through_one(self):
        # psi'(1) computed via psi'(2) + 1
        ball = polygamma_recurrence_shift(1, 1, 1, 128)
        with mp.workprec(300):
            assert ball.contains(mp.pi ** 2 / 6)

    def test_half_integer_double_shift(self):
        shifted = polygamma_recurrence_shift(2, F(1, 2), 2, 128)
        direct = polygamma(2, F(1, 2), 128)
        assert shifted.overlaps(direct)
        # oracle: independent high-precision series evaluation
        assert shifted.contains(mp_psi(2, F(1, 2), prec=512))


class TestQuadratureCrosscheck:
    def test_classical_values(self):
        q1 = polygamma_quadrature_crosscheck(1, 1, 64)
        with mp.workprec(200):
            assert abs(q1.to_mpf() - mp.pi ** 2 / 6) < mp.mpf(10) ** -10
        q2 = polygamma_quadrature_crosscheck(2, 1, 64)
        with mp.workprec(200):
            assert abs(q2.to_mpf() - (-2 * mp.zeta(3))) < mp.mpf(10) ** -10

    def test_matches_series_path(self):
        series = polygamma(1, 10, 128)
        quad = polygamma_quadrature_crosscheck(1, 10, 64)
        assert abs(quad.mid - series.mid) < F(1, 10 ** 10)

    def test_domain_validation(self):
        with pytest.raises(DomainError):
            polygamma_quadrature_crosscheck(1, -1, 64)
