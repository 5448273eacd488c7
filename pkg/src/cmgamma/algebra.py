"""Exact rational algebra: polynomials, exponential polynomials, partial fractions.

Everything in this module is exact.  Coefficients are ``fractions.Fraction``
throughout, polynomials are dense coefficient tuples (index = power), and an
exponential polynomial is a finite sum

    sum_k  p_k(t) * e^(k*t),   k a nonnegative integer, p_k a rational Poly.

The partial-fraction machinery is restricted to denominators that are products
of (x+a)^m with nonnegative integer shifts a, which is all the downstream
code ever needs; this keeps every decomposition exact over the rationals.

The Laplace kernel map sends c/(x+a)^m to (c/(m-1)!) * t^(m-1) * e^(-a*t),
the unique integrand term with that Laplace transform.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

from .errors import DegreeError, DomainError, NotDivisible

Rat = Union[int, Fraction]

_ZERO = Fraction(0)


def as_fraction(v) -> Fraction:
    """Coerce ints, strings like '3/4' or '0.25', and Fractions to Fraction."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, float):
        raise TypeError("refusing to coerce float to exact Fraction; pass a string")
    raise TypeError(f"cannot interpret {v!r} as an exact rational")


class Poly:
    """Dense univariate polynomial with exact rational coefficients.

    coeffs[i] is the coefficient of the i-th power; the zero polynomial is
    the empty tuple.  Instances are immutable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Rat] = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return cls(())

    @classmethod
    def const(cls, c: Rat) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, c: Rat, power: int) -> "Poly":
        if power < 0:
            raise ValueError("power must be nonnegative")
        return cls((0,) * power + (c,))

    # -- structure ----------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "Poly(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            parts.append(f"{c}" if i == 0 else f"{c}*t^{i}")
        return "Poly(" + " + ".join(parts) + ")"

    def coeff(self, power: int) -> Fraction:
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return _ZERO

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, Poly):
            a, b = self.coeffs, other.coeffs
            if not a or not b:
                return Poly.zero()
            out = [_ZERO] * (len(a) + len(b) - 1)
            for i, ca in enumerate(a):
                if ca == 0:
                    continue
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
            return Poly(out)
        if isinstance(other, (int, Fraction)):
            c = as_fraction(other)
            return Poly(tuple(c * a for a in self.coeffs))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def deriv(self) -> "Poly":
        """Formal derivative."""
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def __call__(self, x: Rat) -> Fraction:
        """Exact Horner evaluation."""
        x = as_fraction(x)
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, c: Rat) -> "Poly":
        """Taylor shift: returns the polynomial q with q(x) = self(x + c)."""
        c = as_fraction(c)
        res = Poly.zero()
        xpc = Poly((c, 1))
        for a in reversed(self.coeffs):
            res = res * xpc + Poly.const(a)
        return res

    # -- division ------------------------------------------------------------

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        """Exact polynomial division with remainder."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        den = other.coeffs
        dd = len(den) - 1
        lead = den[-1]
        if len(rem) - 1 < dd:
            return Poly.zero(), self
        quot = [_ZERO] * (len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            f = rem[i] / lead
            if f != 0:
                quot[i - dd] = f
                for j, dc in enumerate(den):
                    rem[i - dd + j] -= f * dc
        return Poly(quot), Poly(rem[:dd] if dd else ())

    def __floordiv__(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError("polynomial division not exact")
        return q

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * (1 / self.coeffs[-1])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor over the rationals (Euclid)."""
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r.monic()
    return a.monic()


class ExpPoly:
    """Exponential polynomial: finite sum over k >= 0 of p_k(t) * e^(k*t)."""

    __slots__ = ("_blocks",)

    def __init__(self, blocks: Mapping[int, Poly] = ()):
        clean: dict[int, Poly] = {}
        for k, p in dict(blocks).items():
            if not isinstance(k, int) or k < 0:
                raise ValueError("exponents must be nonnegative integers")
            if not isinstance(p, Poly):
                p = Poly(p)
            if not p.is_zero():
                clean[k] = p
        object.__setattr__(self, "_blocks", clean)

    def __setattr__(self, name, value):
        raise AttributeError("ExpPoly is immutable")

    @classmethod
    def zero(cls) -> "ExpPoly":
        return cls({})

    @classmethod
    def term(cls, k: int, poly: Poly | Iterable[Rat]) -> "ExpPoly":
        return cls({k: poly if isinstance(poly, Poly) else Poly(poly)})

    def blocks(self) -> tuple[tuple[int, Poly], ...]:
        """Blocks as ((exponent, poly), ...) sorted by exponent."""
        return tuple(sorted(self._blocks.items()))

    def block(self, k: int) -> Poly:
        return self._blocks.get(k, Poly.zero())

    def exponents(self) -> tuple[int, ...]:
        return tuple(sorted(self._blocks))

    def is_zero(self) -> bool:
        return not self._blocks

    def __eq__(self, other) -> bool:
        if isinstance(other, ExpPoly):
            return self._blocks == other._blocks
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.blocks())

    def __repr__(self) -> str:
        if not self._blocks:
            return "ExpPoly(0)"
        parts = [f"({p!r})*e^{k}t" if k else f"{p!r}" for k, p in self.blocks()]
        return "ExpPoly[" + " + ".join(parts) + "]"

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        if not isinstance(other, ExpPoly):
            return NotImplemented
        out = dict(self._blocks)
        for k, p in other._blocks.items():
            out[k] = out.get(k, Poly.zero()) + p
        return ExpPoly(out)

    def __neg__(self) -> "ExpPoly":
        return ExpPoly({k: -p for k, p in self._blocks.items()})

    def __sub__(self, other: "ExpPoly") -> "ExpPoly":
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "ExpPoly":
        if isinstance(other, ExpPoly):
            out: dict[int, Poly] = {}
            for k1, p1 in self._blocks.items():
                for k2, p2 in other._blocks.items():
                    k = k1 + k2
                    out[k] = out.get(k, Poly.zero()) + p1 * p2
            return ExpPoly(out)
        if isinstance(other, (int, Fraction)):
            c = as_fraction(other)
            return ExpPoly({k: p * c for k, p in self._blocks.items()})
        return NotImplemented

    __rmul__ = __mul__

    def deriv(self) -> "ExpPoly":
        """Exact derivative: d/dt [p(t) e^(kt)] = (p'(t) + k p(t)) e^(kt)."""
        return ExpPoly({k: p.deriv() + k * p for k, p in self._blocks.items()})

    def deriv_n(self, n: int) -> "ExpPoly":
        e = self
        for _ in range(n):
            e = e.deriv()
        return e

    def eval_exact_at_zero(self) -> Fraction:
        """Exact value at t = 0 (every e^(k*0) is 1)."""
        return sum((p(_ZERO) for p in self._blocks.values()), _ZERO)

    def shift_exp(self, k: int) -> "ExpPoly":
        """Multiply by e^(k*t): all exponents move up by k."""
        if k < 0:
            raise ValueError("use factor_exp to lower exponents")
        return ExpPoly({j + k: p for j, p in self._blocks.items()})

    def factor_exp(self, k: int, s: Rat = 1) -> "ExpPoly":
        """Exact division by s * e^(k*t).

        Raises NotDivisible if any exponent is below k (the quotient would
        leave the nonnegative-exponent class); s must be nonzero.
        """
        s = as_fraction(s)
        if s == 0:
            raise DomainError("cannot factor out a zero scale")
        bad = [j for j in self._blocks if j < k]
        if bad:
            raise NotDivisible(
                f"exponent {min(bad)} below requested factor e^({k}t)")
        inv = 1 / s
        return ExpPoly({j - k: p * inv for j, p in self._blocks.items()})

    def eval_ball(self, t0: Rat, prec: int):
        """Enclosure of the value at rational t0 (exact when t0 == 0).

        e^(k*t0) is enclosed once per distinct exponent; the polynomial
        factors are evaluated exactly by Horner.
        """
        from .ball import Ball  # local import avoids a hard module cycle

        t0 = as_fraction(t0)
        exact_part = _ZERO
        ball_part = None
        for k, p in self.blocks():
            pv = p(t0)
            if pv == 0:
                continue
            if k == 0 or t0 == 0:
                exact_part += pv
                continue
            term = Ball.exp_of(k * t0, prec) * pv
            ball_part = term if ball_part is None else ball_part + term
        if ball_part is None:
            return Ball.exact(exact_part, prec)
        return ball_part + exact_part


class PartialFractionTerm(NamedTuple):
    """One term coeff / (x + shift)^order with integer shift >= 0, order >= 1."""

    coeff: Fraction
    shift: int
    order: int


class KernelTerm(NamedTuple):
    """Integrand term coeff * t^power * e^(-decay*t)."""

    coeff: Fraction
    power: int
    decay: int


def _check_term(t: PartialFractionTerm) -> None:
    if t.order < 1:
        raise ValueError("partial-fraction order must be >= 1")
    if t.shift < 0 or not isinstance(t.shift, int):
        raise ValueError("shift must be a nonnegative integer")


class PartialFractionForm:
    """poly_part(x) + sum of coeff/(x+shift)^order terms.

    Terms are merged on (shift, order), zero coefficients dropped, and the
    tuple kept sorted by (shift, order), so equal forms compare equal
    structurally.
    """

    __slots__ = ("poly_part", "terms")

    def __init__(self, poly_part: Poly = Poly.zero(),
                 terms: Iterable[PartialFractionTerm] = ()):
        merged: dict[tuple[int, int], Fraction] = {}
        for t in terms:
            t = PartialFractionTerm(as_fraction(t[0]), int(t[1]), int(t[2]))
            _check_term(t)
            key = (t.shift, t.order)
            merged[key] = merged.get(key, _ZERO) + t.coeff
        canon = tuple(
            PartialFractionTerm(c, s, o)
            for (s, o), c in sorted(merged.items()) if c != 0)
        object.__setattr__(self, "poly_part", poly_part)
        object.__setattr__(self, "terms", canon)

    def __setattr__(self, name, value):
        raise AttributeError("PartialFractionForm is immutable")

    def __eq__(self, other) -> bool:
        if isinstance(other, PartialFractionForm):
            return self.poly_part == other.poly_part and self.terms == other.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.poly_part, self.terms))

    def __repr__(self) -> str:
        bits = []
        if not self.poly_part.is_zero():
            bits.append(repr(self.poly_part))
        for c, a, m in self.terms:
            base = "x" if a == 0 else f"(x+{a})"
            bits.append(f"{c}/{base}^{m}" if m > 1 else f"{c}/{base}")
        return "PF[" + " + ".join(bits or ["0"]) + "]"

    def __add__(self, other: "PartialFractionForm") -> "PartialFractionForm":
        if not isinstance(other, PartialFractionForm):
            return NotImplemented
        return PartialFractionForm(self.poly_part + other.poly_part,
                                   self.terms + other.terms)

    def __neg__(self) -> "PartialFractionForm":
        return self.scale(-1)

    def __sub__(self, other: "PartialFractionForm") -> "PartialFractionForm":
        return self + (-other)

    def scale(self, c: Rat) -> "PartialFractionForm":
        c = as_fraction(c)
        return PartialFractionForm(
            self.poly_part * c,
            tuple(PartialFractionTerm(t.coeff * c, t.shift, t.order)
                  for t in self.terms))

    def deriv(self) -> "PartialFractionForm":
        """Exact derivative: c/(x+a)^m -> -m*c/(x+a)^(m+1)."""
        return PartialFractionForm(
            self.poly_part.deriv(),
            tuple(PartialFractionTerm(-t.order * t.coeff, t.shift, t.order + 1)
                  for t in self.terms))

    def deriv_n(self, n: int) -> "PartialFractionForm":
        f = self
        for _ in range(n):
            f = f.deriv()
        return f

    def eval_exact(self, x: Rat) -> Fraction:
        """Exact rational value at rational x (x must avoid the poles)."""
        x = as_fraction(x)
        for t in self.terms:
            if x + t.shift == 0:
                raise DomainError(f"evaluation at pole x = {x}")
        acc = self.poly_part(x)
        for c, a, m in self.terms:
            acc += c / (x + a) ** m
        return acc

    def kernel_terms(self) -> tuple[KernelTerm, ...]:
        """Laplace kernel image of every term, in term order."""
        return tuple(laplace_kernel_of(t) for t in self.terms)


def laplace_kernel_of(term: PartialFractionTerm) -> KernelTerm:
    """Map coeff/(x+a)^m to its Laplace integrand (coeff/(m-1)!)*t^(m-1)*e^(-a*t)."""
    _check_term(term)
    return KernelTerm(term.coeff / math.factorial(term.order - 1),
                      term.order - 1, term.shift)


def pfd_decompose(num: Poly,
                  den_factors: Sequence[tuple[int, int]]) -> PartialFractionForm:
    """Exact partial fractions of num(x) / prod (x+a)^m over distinct shifts.

    Only proper fractions are accepted: deg(num) must be below the total
    denominator degree (split any polynomial part off first).
    """
    shifts = [a for a, _ in den_factors]
    if len(set(shifts)) != len(shifts):
        raise ValueError("denominator shifts must be pairwise distinct")
    for a, m in den_factors:
        if not isinstance(a, int) or a < 0:
            raise ValueError("shifts must be nonnegative integers")
        if m < 1:
            raise ValueError("multiplicities must be >= 1")
    total = sum(m for _, m in den_factors)
    if num.degree >= total:
        raise DegreeError(
            f"numerator degree {num.degree} >= denominator degree {total}")
    terms: list[PartialFractionTerm] = []
    for a, m in den_factors:
        # Local series around x = -a (u = x + a):  num(u-a) / rest(u-a)
        # = s_0 + s_1 u + ... ; the u^j coefficient feeds order m - j.
        num_u = num.shift(-a)
        rest = Poly.const(1)
        for b, mb in den_factors:
            if b == a:
                continue
            rest = rest * Poly((b - a, 1)) ** mb
        d0 = rest.coeff(0)
        series: list[Fraction] = []
        for j in range(m):
            s = num_u.coeff(j)
            for i in range(j):
                s -= series[i] * rest.coeff(j - i)
            series.append(s / d0)
        for j, s in enumerate(series):
            if s != 0:
                terms.append(PartialFractionTerm(s, a, m - j))
    return PartialFractionForm(Poly.zero(), terms)


def pfd_recompose(form: PartialFractionForm) -> tuple[Poly, Poly]:
    """Collapse a form to a single reduced fraction (num, den).

    The result is gcd-reduced; den is a primitive integer polynomial with
    positive leading coefficient (den = 1 when the form has no terms).
    """
    max_order: dict[int, int] = {}
    for t in form.terms:
        max_order[t.shift] = max(max_order.get(t.shift, 0), t.order)
    den = Poly.const(1)
    for a, m in sorted(max_order.items()):
        den = den * Poly((a, 1)) ** m
    num = form.poly_part * den
    for c, a, m in form.terms:
        cof = Poly.const(c)
        for b, mb in sorted(max_order.items()):
            power = mb - m if b == a else mb
            if power:
                cof = cof * Poly((b, 1)) ** power
        num = num + cof
    g = poly_gcd(num, den)
    if not g.is_zero() and g.degree > 0:
        num = num.divmod(g)[0]
        den = den.divmod(g)[0]
    if num.is_zero():
        return Poly.zero(), Poly.const(1)
    # normalize: den primitive integer, positive leading coefficient
    lead = den.coeffs[-1]
    num = num * (1 / lead)
    den = den * (1 / lead)
    lcm_den = 1
    for c in den.coeffs:
        lcm_den = lcm_den * c.denominator // math.gcd(lcm_den, c.denominator)
    gcd_num = 0
    for c in den.coeffs:
        gcd_num = math.gcd(gcd_num, c.numerator * (lcm_den // c.denominator))
    factor = Fraction(lcm_den, gcd_num or 1)
    return num * factor, den * factor


def rational_functions_equal(n1: Poly, d1: Poly, n2: Poly, d2: Poly) -> bool:
    """Exact equality of n1/d1 and n2/d2 by cross-multiplication."""
    return n1 * d2 == n2 * d1
