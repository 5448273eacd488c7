"""Exact algebra layer: polynomials, exponential polynomials, partial fractions."""

import random
from fractions import Fraction as F

import pytest

from cmgamma.algebra import (ExpPoly, KernelTerm, PartialFractionForm,
                             PartialFractionTerm, Poly, laplace_kernel_of,
                             pfd_decompose, pfd_recompose, poly_gcd,
                             rational_functions_equal)
from cmgamma.errors import DegreeError, NotDivisible

# Coefficients of the degree-10 bound numerator, used repeatedly below.
P_COEFFS = (450, 3600, 13290, 29700, 44101, 45050, 31865, 15370, 4840, 900, 75)


def rand_poly(rng, max_deg=6, span=30):
    return Poly([F(rng.randint(-span, span), rng.randint(1, 7))
                 for _ in range(rng.randint(0, max_deg + 1))])


class TestPoly:
    def test_p_constant_term(self):
        assert Poly(P_COEFFS)(0) == 450

    def test_p_at_one_equals_coefficient_sum(self):
        # oracle: evaluation at 1 is the plain sum of the coefficients
        assert Poly(P_COEFFS)(1) == sum(P_COEFFS) == 189241

    def test_zero_derivative(self):
        assert Poly.zero().deriv() == Poly.zero()

    def test_normalization_strips_trailing_zeros(self):
        assert Poly([1, 2, 0, 0]) == Poly([1, 2])
        assert Poly([0]).is_zero()

    def test_eval_horner_rational_point(self):
        p = Poly([F(1, 2), 0, 1])
        assert p(F(1, 3)) == F(1, 2) + F(1, 9)

    def test_leibniz_rule_randomized(self):
        rng = random.Random(20240817)
        for _ in range(50):
            a, b = rand_poly(rng), rand_poly(rng)
            assert (a * b).deriv() == a.deriv() * b + a * b.deriv()

    def test_taylor_shift(self):
        assert Poly([0, 0, 1]).shift(1) == Poly([1, 2, 1])
        rng = random.Random(7)
        for _ in range(20):
            p, c = rand_poly(rng), F(rng.randint(-4, 4), rng.randint(1, 5))
            x = F(rng.randint(-10, 10), rng.randint(1, 9))
            assert p.shift(c)(x) == p(x + c)

    def test_divmod_roundtrip(self):
        rng = random.Random(99)
        for _ in range(30):
            a, b = rand_poly(rng, 8), rand_poly(rng, 4)
            if b.is_zero():
                continue
            q, r = a.divmod(b)
            assert q * b + r == a
            assert r.degree < b.degree

    def test_gcd(self):
        a = Poly([1, 1]) ** 3 * Poly([2, 1])
        b = Poly([1, 1]) * Poly([-1, 1])
        assert poly_gcd(a, b) == Poly([1, 1])

    def test_pow(self):
        assert Poly([1, 1]) ** 10 == Poly(
            [1, 10, 45, 120, 210, 252, 210, 120, 45, 10, 1])

    def test_immutable(self):
        p = Poly([1, 2])
        with pytest.raises(AttributeError):
            p.coeffs = ()


class TestExpPoly:
    def test_derivative_of_exp_t(self):
        e = ExpPoly.term(1, Poly([1]))
        assert e.deriv() == e

    def test_derivative_of_displayed_block(self):
        e = ExpPoly.term(3, Poly([-2 * 163296000, 163296000]))
        assert e.deriv() == ExpPoly.term(3, Poly([-5 * 163296000, 3 * 163296000]))

    def test_monomial_product(self):
        assert (ExpPoly.term(0, Poly([0, 1])) * ExpPoly.term(2, Poly([1]))
                == ExpPoly.term(2, Poly([0, 1])))

    def test_factor_exp_roundtrip(self):
        rng = random.Random(5)
        for _ in range(20):
            e = ExpPoly({k: rand_poly(rng, 4) for k in (1, 2, 3)})
            s = F(rng.randint(1, 20), rng.randint(1, 5))
            f = e.factor_exp(1, s)
            assert (s * f.shift_exp(1)) == e

    def test_factor_exp_not_divisible(self):
        e = ExpPoly({0: Poly([1]), 2: Poly([1])})
        with pytest.raises(NotDivisible):
            e.factor_exp(1)

    def test_factor_exp_trivial(self):
        assert ExpPoly.term(2, Poly([0, 1])).factor_exp(2) == \
            ExpPoly.term(0, Poly([0, 1]))

    def test_eval_exact_at_zero(self):
        e = ExpPoly({0: Poly([3]), 1: Poly([4, 99]), 2: Poly([-5])})
        assert e.eval_exact_at_zero() == 2

    def test_eval_ball_constant(self):
        b = ExpPoly.term(0, Poly([5])).eval_ball(F(7), 64)
        assert b.is_exact() and b.mid == 5

    def test_eval_ball_exact_at_zero(self):
        e = ExpPoly({1: Poly([2, 1]), 3: Poly([-2])})
        b = e.eval_ball(0, 64)
        assert b.is_exact() and b.mid == 0

    def test_eval_ball_containment_at_4x_precision(self):
        rng = random.Random(13)
        for _ in range(15):
            e = ExpPoly({k: rand_poly(rng, 3) for k in range(rng.randint(1, 4))})
            t0 = F(rng.randint(-8, 8), rng.randint(1, 5))
            coarse = e.eval_ball(t0, 64)
            fine = e.eval_ball(t0, 256)
            assert coarse.lower <= fine.lower and fine.upper <= coarse.upper

    def test_derivative_linearity_randomized(self):
        rng = random.Random(3)
        for _ in range(20):
            a = ExpPoly({k: rand_poly(rng, 3) for k in (0, 2)})
            b = ExpPoly({k: rand_poly(rng, 3) for k in (1, 2)})
            assert (a + b).deriv() == a.deriv() + b.deriv()
            assert (a * b).deriv() == a.deriv() * b + a * b.deriv()


class TestPartialFractions:
    def test_textbook_decomposition(self):
        form = pfd_decompose(Poly([1]), [(0, 1), (1, 1)])
        assert form.terms == (PartialFractionTerm(F(1), 0, 1),
                              PartialFractionTerm(F(-1), 1, 1))

    def test_recompose_textbook(self):
        form = PartialFractionForm(Poly.zero(), [
            PartialFractionTerm(F(1), 0, 1), PartialFractionTerm(F(-1), 1, 1)])
        num, den = pfd_recompose(form)
        assert num == Poly([1]) and den == Poly([0, 1, 1])

    def test_recompose_poly_part_only(self):
        q = Poly([1, 2, 3])
        num, den = pfd_recompose(PartialFractionForm(q, ()))
        assert num == q and den == Poly([1])

    def test_degree_error(self):
        with pytest.raises(DegreeError):
            pfd_decompose(Poly([0, 0, 1]), [(0, 1), (1, 1)])

    def test_roundtrip_randomized(self):
        # shifts in {0,1,2,3}, multiplicities up to 10, proper numerators
        rng = random.Random(20240818)
        for _ in range(25):
            shifts = rng.sample((0, 1, 2, 3), rng.randint(1, 3))
            factors = [(a, rng.randint(1, 10)) for a in shifts]
            total = sum(m for _, m in factors)
            num = Poly([F(rng.randint(-9, 9), rng.randint(1, 4))
                        for _ in range(rng.randint(1, total))])
            if num.is_zero():
                continue
            form = pfd_decompose(num, factors)
            got_num, got_den = pfd_recompose(form)
            den = Poly([1])
            for a, m in factors:
                den = den * Poly([a, 1]) ** m
            assert rational_functions_equal(got_num, got_den, num, den)

    def test_decomposition_of_bound_numerator(self):
        # oracle: multiply the produced terms back over the common denominator
        form = pfd_decompose(Poly(P_COEFFS) * F(1, 900), [(0, 4), (1, 10)])
        num, den = pfd_recompose(form)
        target = Poly.monomial(900, 4) * Poly([1, 1]) ** 10
        assert rational_functions_equal(num, den, Poly(P_COEFFS), target)
        assert form.poly_part.is_zero()

    def test_canonical_ordering_and_merge(self):
        form = PartialFractionForm(Poly.zero(), [
            PartialFractionTerm(F(1), 2, 3), PartialFractionTerm(F(1), 0, 1),
            PartialFractionTerm(F(2), 2, 3), PartialFractionTerm(F(-1), 0, 1)])
        assert form.terms == (PartialFractionTerm(F(3), 2, 3),)

    def test_derivative_matches_recomposed_derivative(self):
        form = pfd_decompose(Poly([1, 1]), [(0, 2), (1, 1)])
        dnum, dden = pfd_recompose(form.deriv())
        num, den = pfd_recompose(form)
        # quotient rule on the recomposed fraction
        q_num = num.deriv() * den - num * den.deriv()
        q_den = den * den
        assert rational_functions_equal(dnum, dden, q_num, q_den)

    def test_eval_exact(self):
        form = pfd_decompose(Poly([1]), [(0, 1), (1, 1)])
        assert form.eval_exact(F(1, 2)) == F(1) / (F(1, 2) * F(3, 2))


class TestKernelMap:
    def test_displayed_term(self):
        assert laplace_kernel_of(PartialFractionTerm(F(13, 90), 1, 4)) == \
            KernelTerm(F(13, 540), 3, 1)

    def test_simple_pole_at_zero(self):
        assert laplace_kernel_of(PartialFractionTerm(F(1), 0, 1)) == \
            KernelTerm(F(1), 0, 0)

    def test_order_ten_factorial_scaling(self):
        # oracle: 1800 * 9! = 653184000
        import math
        assert 1800 * math.factorial(9) == 653184000
        assert laplace_kernel_of(PartialFractionTerm(F(-1, 1800), 1, 10)) == \
            KernelTerm(F(-1, 653184000), 9, 1)

    def test_linearity_on_term_lists(self):
        rng = random.Random(11)
        for _ in range(20):
            a = PartialFractionTerm(F(rng.randint(1, 9), rng.randint(1, 9)),
                                    rng.randint(0, 3), rng.randint(1, 8))
            c1, c2 = F(rng.randint(-5, 5)), F(rng.randint(1, 5))
            scaled = PartialFractionTerm(c1 * a.coeff + c2 * a.coeff,
                                         a.shift, a.order)
            k = laplace_kernel_of(a)
            ks = laplace_kernel_of(scaled)
            assert ks.coeff == (c1 + c2) * k.coeff
            assert (ks.power, ks.decay) == (k.power, k.decay)
