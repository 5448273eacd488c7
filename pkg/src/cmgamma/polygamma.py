"""Certified enclosures for the polygamma functions psi^(m), m >= 1, x > 0.

With s = m + 1 and f(t) = (x + t)^(-s),

    psi^(m)(x) = (-1)^(m+1) * m! * sum_{i >= 0} f(i).

The head sum_{i < N} is summed exactly (each term is a rational).  The tail
sum_{i >= N} is enclosed by Euler-Maclaurin around a = x + N:

    T = a^(-m)/m + f(N)/2
        + sum_{k=1..K} B_{2k}/(2k)! * rising(s, 2k-1) * a^(-s-2k+1)  +  R_K,

where a^(-m)/m is the integral comparison term and the remainder satisfies

    |R_K| <= max|periodized B_{2K+1}| / (2K+1)! * integral of |f^(2K+1)|
           = 2*zeta(2K+1)/(2pi)^(2K+1) * rising(s, 2K+1)/(s+2K) * a^(-s-2K).

We weaken that rationally with 2*pi > 25/4 and zeta(2K+1) <= 5/4 (K >= 1),
so the whole enclosure is exact rational arithmetic end to end: the radius
is the exact remainder bound plus the (power-of-two) dyadic rounding slop.
N is chosen so the Euler-Maclaurin terms can reach ~2^-w before diverging;
small x needs no special handling because the head terms are exact.

The integral-representation quadrature (`polygamma_quadrature_crosscheck`)
is a heuristic cross-check only: its radius is an error *estimate* from the
adaptive scheme, not a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mp

from .algebra import as_fraction
from .ball import Ball, round_nearest
from .errors import DomainError, PrecisionError, QuadratureFailure

MAX_ORDER = 32

_BASE_GUARD_BITS = 32


@dataclass(frozen=True)
class PrecisionPolicy:
    """Target precision plus per-derivative-order working-precision guard."""

    target_bits: int = 128
    guard_bits_per_order: int = 16

    def __post_init__(self):
        if self.target_bits < 8:
            raise ValueError("target_bits must be >= 8")
        if self.guard_bits_per_order < 0:
            raise ValueError("guard_bits_per_order must be >= 0")

    def working_bits(self, order: int) -> int:
        return self.target_bits + _BASE_GUARD_BITS + self.guard_bits_per_order * order


@lru_cache(maxsize=None)
def _bernoulli(n: int) -> Fraction:
    p, q = mpmath.bernfrac(n)
    return Fraction(int(p), int(q))


def _floor_frac(q: Fraction) -> int:
    return q.numerator // q.denominator


@lru_cache(maxsize=8192)
def _zeta_like_sum(s: int, x: Fraction, wbits: int) -> tuple[Fraction, Fraction]:
    """Enclosure (mid, rad) of sum_{i>=0} (x+i)^(-s), exact rational fields."""
    round_bits = wbits + 24
    for attempt in range(4):
        n_terms = max(0, ((wbits + 16) * (1 + attempt)) // 3 + 1 - _floor_frac(x))
        head = Fraction(0)
        slop = Fraction(0)
        for i in range(n_terms):
            t, e = round_nearest((x + i) ** -s, round_bits)
            head += t
            slop += e
        a = x + n_terms
        integral = a ** -(s - 1) / (s - 1)
        tail = integral + a ** -s / 2
        scale = head - slop + integral  # true value exceeds this
        target = scale * Fraction(1, 2 ** (wbits + 8))
        rising = Fraction(s)  # rising(s, 1)
        remainder = None
        prev_bound = None
        k = 0
        while k < 100000:
            k += 1
            # rising(s, 2k-1) = rising(s, 2k-3) * (s+2k-3)(s+2k-2)
            if k > 1:
                rising *= (s + 2 * k - 3) * (s + 2 * k - 2)
            term = _bernoulli(2 * k) / math.factorial(2 * k) * rising * a ** -(s + 2 * k - 1)
            t, e = round_nearest(term, round_bits)
            tail += t
            slop += e
            bound = (Fraction(5, 2) * Fraction(4, 25) ** (2 * k + 1)
                     * rising * (s + 2 * k - 1) * a ** -(s + 2 * k))
            if bound <= target:
                remainder = bound
                break
            if prev_bound is not None and bound > prev_bound:
                break  # the asymptotic terms started diverging; need larger N
            prev_bound = bound
        if remainder is not None:
            mid, e = round_nearest(head + tail, round_bits)
            return mid, slop + e + remainder
    raise PrecisionError(
        f"series tail for s={s}, x={x} not certifiable at {wbits} working bits")


def _polygamma_rational(m: int, x: Fraction, prec: int,
                        policy: PrecisionPolicy) -> Ball:
    wbits = policy.working_bits(m)
    mid, rad = _zeta_like_sum(m + 1, x, wbits)
    fac = math.factorial(m)
    sign = 1 if m % 2 == 1 else -1
    ball = Ball._make(sign * fac * mid, fac * rad, prec)
    if ball.mid != 0 and ball.rad > abs(ball.mid) * Fraction(1, 2 ** prec):
        raise PrecisionError(
            f"polygamma({m}, {x}) enclosure wider than 2^-{prec} relative")
    return ball


def polygamma(m: int, x, prec: int = 128,
              policy: PrecisionPolicy | None = None) -> Ball:
    """Certified enclosure of psi^(m)(x) for integer m >= 1 and x > 0.

    x may be an exact rational or a Ball; Ball arguments are handled through
    the strict monotonicity of psi^(m) (its derivative psi^(m+1) is
    sign-definite), by evaluating at the interval endpoints and hulling.
    """
    if not isinstance(m, int) or m < 1:
        raise DomainError("derivative order m must be an integer >= 1")
    if m > MAX_ORDER:
        raise DomainError(f"m > {MAX_ORDER} unsupported")
    if policy is None:
        policy = PrecisionPolicy(target_bits=prec)
    if isinstance(x, Ball):
        if x.lower <= 0:
            raise DomainError("x must be strictly positive")
        if x.is_exact():
            return _polygamma_rational(m, x.mid, prec, policy)
        lo = _polygamma_rational(m, x.lower, prec, policy)
        hi = _polygamma_rational(m, x.upper, prec, policy)
        return Ball.hull(lo, hi)
    x = as_fraction(x)
    if x <= 0:
        raise DomainError("x must be strictly positive")
    return _polygamma_rational(m, x, prec, policy)


def polygamma_recurrence_shift(m: int, x, k: int, prec: int = 128,
                               policy: PrecisionPolicy | None = None) -> Ball:
    """psi^(m)(x) computed as psi^(m)(x+k) minus the exact telescoped shift.

    Uses psi^(m)(x) = psi^(m)(x+k) - sum_{j=0}^{k-1} (-1)^m m!/(x+j)^(m+1);
    k = 0 is the identity.  Must agree (overlapping enclosures) with the
    direct series path.
    """
    if k < 0:
        raise DomainError("shift count k must be >= 0")
    x = as_fraction(x)
    if x <= 0:
        raise DomainError("x must be strictly positive")
    shifted = polygamma(m, x + k, prec, policy)
    sign = 1 if m % 2 == 0 else -1
    fac = math.factorial(m)
    correction = Fraction(0)
    for j in range(k):
        correction += sign * fac * (x + j) ** -(m + 1)
    return shifted - correction


def polygamma_quadrature_crosscheck(m: int, x, prec: int = 64) -> Ball:
    """Non-certified quadrature of the integral form of psi^(m).

    Integrates (-1)^(m+1) * t^m e^(-x t) / (1 - e^(-t)) over (0, inf) with
    tanh-sinh quadrature.  The returned radius is the scheme's own error
    estimate, NOT a rigorous bound; use only to cross-validate the series.
    """
    if not isinstance(m, int) or m < 1:
        raise DomainError("derivative order m must be an integer >= 1")
    x = as_fraction(x)
    if x <= 0:
        raise DomainError("x must be strictly positive")
    with mp.workprec(prec + 48):
        xf = mp.mpf(x.numerator) / mp.mpf(x.denominator)

        def integrand(t):
            if t == 0:
                return mp.mpf(1) if m == 1 else mp.mpf(0)
            return t ** m * mp.exp(-xf * t) / (-mp.expm1(-t))

        try:
            val, err = mp.quad(integrand, [0, 1, 10, mp.inf],
                               error=True, maxdegree=10)
        except Exception as exc:  # mpmath failures surface as various types
            raise QuadratureFailure(str(exc)) from exc
        if not mp.isfinite(val) or not mp.isfinite(err):
            raise QuadratureFailure("quadrature produced a non-finite result")
        if err > abs(val) * mp.mpf(2) ** (-prec) * 64 + mp.mpf(2) ** (-prec - 48):
            raise QuadratureFailure(
                f"estimated error {err} too large for {prec}-bit request")
    sign = 1 if m % 2 == 1 else -1
    return Ball._make(sign * _mpf_to_fraction(val),
                      abs(_mpf_to_fraction(err)), prec)


def _mpf_to_fraction(v) -> Fraction:
    # read the raw (sign, mantissa, exponent) triple: exact at any precision
    sign, man, exp, _ = v._mpf_
    if man == 0:
        return Fraction(0)
    out = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -out if sign else out
