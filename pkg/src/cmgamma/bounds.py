"""The concrete functions under study and their exact rational identities.

    B(x) = p(x) / (900 x^4 (x+1)^10)          the rational lower bound
    g(x) = trigamma(x)^2 + tetragamma(x) - B(x)
    R(x) = the 22-term partial-fraction remainder (= q(x)/(1800 x^2 (1+x)^10 (2+x)^10))
    H(x) = trigamma(x) - R(x)                 satisfies g(x) - g(x+1) = (2/x^2) H(x)

All rational parts are differentiated and evaluated through their exact
partial-fraction forms, so every enclosure radius here comes from the
polygamma evaluations alone.  Derivatives of the transcendental part use the
exact Leibniz expansion of d^k[trigamma^2].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import (PartialFractionForm, PartialFractionTerm, Poly,
                      as_fraction, pfd_decompose, pfd_recompose,
                      rational_functions_equal)
from .ball import Ball
from .constants import (BOUND_DEN_FACTORS, SCALE_P, SCALE_Q,
                        SourceConstants, load_constants)
from .errors import DomainError
from .polygamma import PrecisionPolicy, polygamma

#: g has competing ~x^-4 terms; far below this the cancellation outgrows any
#: reasonable precision, so reject by default.
MIN_X = Fraction(1, 2 ** 20)

#: Leibniz needs polygamma orders up to k+2; keep within the supported range.
MAX_DERIVATIVE_ORDER = 12


def _consts(constants: SourceConstants | None) -> SourceConstants:
    return constants if constants is not None else load_constants()


def _check_x(x) -> Fraction:
    x = as_fraction(x)
    if x <= 0:
        raise DomainError("x must be strictly positive")
    return x


def p_eval(x, constants: SourceConstants | None = None) -> Fraction:
    """Exact Horner evaluation of the degree-10 numerator polynomial."""
    return _consts(constants).p(as_fraction(x))


def q_eval(x, constants: SourceConstants | None = None) -> Fraction:
    """Exact Horner evaluation of the degree-21 remainder numerator."""
    return _consts(constants).q(as_fraction(x))


@lru_cache(maxsize=4)
def _bound_pf(constants: SourceConstants | None = None) -> PartialFractionForm:
    """Exact partial fractions of B(x) = p(x)/(900 x^4 (x+1)^10)."""
    c = _consts(constants)
    return pfd_decompose(c.p * Fraction(1, SCALE_P), BOUND_DEN_FACTORS)


@lru_cache(maxsize=64)
def _bound_pf_deriv(k: int, constants: SourceConstants | None = None) -> PartialFractionForm:
    return _bound_pf(constants).deriv_n(k)


@lru_cache(maxsize=64)
def _remainder_pf_deriv(k: int, constants: SourceConstants | None = None) -> PartialFractionForm:
    return _consts(constants).remainder_expansion.deriv_n(k)


def bound_exact(x, constants: SourceConstants | None = None) -> Fraction:
    """B(x) as an exact rational."""
    x = _check_x(x)
    c = _consts(constants)
    return c.p(x) / (SCALE_P * x ** 4 * (x + 1) ** 10)


def bound_eval(x, prec: int = 128, constants: SourceConstants | None = None) -> Ball:
    """B(x) as a Ball; the radius is dyadic rounding only."""
    return Ball.from_fraction(bound_exact(x, constants), prec)


def remainder_exact(x, constants: SourceConstants | None = None) -> Fraction:
    """R(x), evaluated through its exact 22-term partial-fraction form."""
    x = _check_x(x)
    return _consts(constants).remainder_expansion.eval_exact(x)


def g_eval(x, prec: int = 128, policy: PrecisionPolicy | None = None,
           constants: SourceConstants | None = None, min_x: Fraction = MIN_X) -> Ball:
    """Enclosure of g(x) = trigamma(x)^2 + tetragamma(x) - B(x)."""
    return g_derivative(0, x, prec, policy, constants, min_x)


def h_eval(x, prec: int = 128, policy: PrecisionPolicy | None = None,
           constants: SourceConstants | None = None) -> Ball:
    """Enclosure of H(x) = trigamma(x) - R(x)."""
    return h_derivative(0, x, prec, policy, constants)


def g_derivative(k: int, x, prec: int = 128,
                 policy: PrecisionPolicy | None = None,
                 constants: SourceConstants | None = None,
                 min_x: Fraction = MIN_X) -> Ball:
    """Enclosure of the k-th derivative of g at rational x > 0.

    d^k[trigamma^2] expands by Leibniz into sum_j C(k,j) psi^(1+j) psi^(1+k-j),
    d^k[tetragamma] is psi^(k+2), and the rational part differentiates exactly
    through its partial-fraction form.
    """
    if not 0 <= k <= MAX_DERIVATIVE_ORDER:
        raise DomainError(f"derivative order must be in 0..{MAX_DERIVATIVE_ORDER}")
    x = _check_x(x)
    if x < min_x:
        raise DomainError(f"x below cutoff {min_x} rejected (cancellation blow-up)")
    if policy is None:
        policy = PrecisionPolicy(target_bits=prec)
    cache: dict[int, Ball] = {}

    def psi(m: int) -> Ball:
        if m not in cache:
            cache[m] = polygamma(m, x, prec, policy)
        return cache[m]

    acc = None
    for j in range(k + 1):
        term = math.comb(k, j) * (psi(1 + j) * psi(1 + k - j))
        acc = term if acc is None else acc + term
    acc = acc + psi(k + 2)
    rational_part = _bound_pf_deriv(k, constants).eval_exact(x)
    return acc - rational_part


def h_derivative(k: int, x, prec: int = 128,
                 policy: PrecisionPolicy | None = None,
                 constants: SourceConstants | None = None) -> Ball:
    """Enclosure of the k-th derivative of H at rational x > 0."""
    if not 0 <= k <= MAX_DERIVATIVE_ORDER:
        raise DomainError(f"derivative order must be in 0..{MAX_DERIVATIVE_ORDER}")
    x = _check_x(x)
    if policy is None:
        policy = PrecisionPolicy(target_bits=prec)
    rational_part = _remainder_pf_deriv(k, constants).eval_exact(x)
    return polygamma(k + 1, x, prec, policy) - rational_part


@dataclass(frozen=True)
class ExpansionIdentityReport:
    """Verdict of the exact partial-fraction identity checks."""

    expansion_equal: bool
    remark_equal: bool
    diff_terms: tuple[tuple[int, int, Fraction, Fraction], ...]
    detail: str

    @property
    def passed(self) -> bool:
        return self.expansion_equal and self.remark_equal


def _pf_diff(a: PartialFractionForm, b: PartialFractionForm):
    """(shift, order, coeff_a, coeff_b) for every place the forms differ."""
    table: dict[tuple[int, int], list[Fraction]] = {}
    for t in a.terms:
        table.setdefault((t.shift, t.order), [Fraction(0), Fraction(0)])[0] = t.coeff
    for t in b.terms:
        table.setdefault((t.shift, t.order), [Fraction(0), Fraction(0)])[1] = t.coeff
    return tuple((s, o, ca, cb) for (s, o), (ca, cb) in sorted(table.items())
                 if ca != cb)


def pf_expansion_identity_check(
        constants: SourceConstants | None = None) -> ExpansionIdentityReport:
    """Exact check of the two displayed identities for the remainder R(x).

    (a) 1/(2x^2) + 1/x + p(x)/(1800 x^2 (x+1)^10)
        - x^2 p(x+1)/(1800 (x+1)^4 (x+2)^10)  ==  the 22-term expansion;
    (b) the expansion recomposes to q(x)/(1800 x^2 (1+x)^10 (2+x)^10).

    Both sides are put over common denominators with exact arithmetic; on
    failure the report carries the coefficient-level difference.
    """
    c = _consts(constants)
    lhs = PartialFractionForm(Poly.zero(), [
        PartialFractionTerm(Fraction(1, 2), 0, 2),
        PartialFractionTerm(Fraction(1), 0, 1),
    ])
    lhs = lhs + pfd_decompose(c.p * Fraction(1, SCALE_Q), ((0, 2), (1, 10)))
    shifted_num = Poly.monomial(1, 2) * c.p.shift(1) * Fraction(-1, SCALE_Q)
    lhs = lhs + pfd_decompose(shifted_num, ((1, 4), (2, 10)))
    expansion_equal = lhs == c.remainder_expansion
    diff = () if expansion_equal else _pf_diff(lhs, c.remainder_expansion)

    num, den = pfd_recompose(c.remainder_expansion)
    target_den = Poly.monomial(SCALE_Q, 2) * Poly((1, 1)) ** 10 * Poly((2, 1)) ** 10
    remark_equal = rational_functions_equal(num, den, c.q, target_den)

    lines = [f"expansion identity: {'equal' if expansion_equal else 'UNEQUAL'}"]
    for s, o, ca, cb in diff:
        base = "x" if s == 0 else f"(x+{s})"
        lines.append(f"  {base}^-{o}: telescoped side {ca}, transcribed side {cb}")
    lines.append(f"remainder recomposition: {'equal' if remark_equal else 'UNEQUAL'}")
    return ExpansionIdentityReport(expansion_equal, remark_equal, diff,
                                   "\n".join(lines))


@dataclass(frozen=True)
class TelescopingReport:
    """Numerical verdict of g(x) - g(x+1) == (2/x^2) H(x) at one point."""

    x: Fraction
    lhs: Ball
    rhs: Ball
    gap: Fraction
    combined_radius: Fraction

    @property
    def passed(self) -> bool:
        return self.gap <= self.combined_radius

    def detail(self) -> str:
        verdict = "overlap" if self.passed else "DISJOINT"
        return (f"x={self.x}: g(x)-g(x+1) = {self.lhs}; (2/x^2)H(x) = {self.rhs}; "
                f"gap {float(self.gap):.3e} vs radii {float(self.combined_radius):.3e} "
                f"-> {verdict}")


def telescoping_identity_check(x, prec: int = 192,
                               policy: PrecisionPolicy | None = None,
                               constants: SourceConstants | None = None) -> TelescopingReport:
    """Check g(x) - g(x+1) against (2/x^2) H(x) as overlapping enclosures."""
    x = _check_x(x)
    lhs = g_eval(x, prec, policy, constants) - g_eval(x + 1, prec, policy, constants)
    rhs = h_eval(x, prec, policy, constants) * (2 / x ** 2)
    return TelescopingReport(x, lhs, rhs, abs(lhs.mid - rhs.mid),
                             lhs.rad + rhs.rad)
