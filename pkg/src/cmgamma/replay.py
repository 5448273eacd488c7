"""Mechanical replay of the positivity-chain argument.

The chain starts from the Laplace-kernel numerator theta(t): build it from
the 22-term expansion, differentiate exactly through the three stages

    theta --(10 derivatives)--> e^t * theta1
    theta1 --(10 derivatives)--> 512 e^t * theta2
    theta2 --(9 derivatives)--> bottom stage 725760*(8857350(46+3t)e^t - 1)

and certify positivity bottom-up: the bottom stage is positive by an exact
coefficient comparison (using only e^t >= 1 and t >= 0), and each lower
derivative follows by integration from 0 with a nonnegative initial value.
Everything numeric in the certificate is an exact integer or rational; the
grid spot-check exists only as independent numerical corroboration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import ExpPoly, Poly, as_fraction
from .constants import (CHAIN_LENGTHS, KERNEL_LIFT, KERNEL_SCALE,
                        SourceConstants, load_constants)
from .errors import CertificateFailure, FixtureMismatch, IndeterminateSign
from .reporting import frac_str, stable_json_dumps

_STAGE_FIXTURE_FACTOR = {"theta1": 1, "theta2": 512}


@dataclass(frozen=True)
class StepRecord:
    """One certificate line: a claim, how it was checked, and the verdict."""

    step: int
    name: str
    claim: str
    method: str
    exact_values_used: tuple[tuple[str, str], ...]
    verdict: str  # "pass" | "fail"
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json_dict(self) -> dict:
        return {
            "step": self.step,
            "name": self.name,
            "claim": self.claim,
            "method": self.method,
            "exact_values_used": {k: v for k, v in self.exact_values_used},
            "verdict": self.verdict,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class CertificateReport:
    """Ordered step records plus the overall verdict and a readable trace."""

    steps: tuple[StepRecord, ...]

    @property
    def overall(self) -> bool:
        return all(s.passed for s in self.steps)

    def first_failure(self) -> StepRecord | None:
        for s in self.steps:
            if not s.passed:
                return s
        return None

    def to_json(self) -> str:
        payload = {
            "overall": "pass" if self.overall else "fail",
            "steps": [s.to_json_dict() for s in self.steps],
        }
        return stable_json_dumps(payload, "certificate")

    def to_text(self) -> str:
        lines = []
        for s in self.steps:
            mark = "PASS" if s.passed else "FAIL"
            lines.append(f"[{mark}] step {s.step}: {s.name} -- {s.claim}")
            if s.detail:
                lines.append(f"       {s.detail}")
        lines.append(f"overall: {'PASS' if self.overall else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def require_pass(self) -> None:
        bad = self.first_failure()
        if bad is not None:
            raise CertificateFailure(f"step {bad.step} ({bad.name}) failed: {bad.detail}")


@dataclass(frozen=True)
class ThetaChain:
    """theta, theta1, theta2 and every derivative, all exact ExpPolys."""

    theta: ExpPoly
    theta_derivs: tuple[ExpPoly, ...]
    theta1: ExpPoly
    theta1_derivs: tuple[ExpPoly, ...]
    theta2: ExpPoly
    theta2_derivs: tuple[ExpPoly, ...]

    def stage(self, name: str, order: int = 0) -> ExpPoly:
        base = getattr(self, name)
        if order == 0:
            return base
        derivs = getattr(self, f"{name}_derivs")
        return derivs[order - 1]


def _exppoly_diff(a: ExpPoly, b: ExpPoly) -> str:
    """First mismatching coefficient between two exponential polynomials."""
    for k in sorted(set(a.exponents()) | set(b.exponents())):
        pa, pb = a.block(k), b.block(k)
        if pa == pb:
            continue
        top = max(pa.degree, pb.degree)
        for j in range(top + 1):
            if pa.coeff(j) != pb.coeff(j):
                return (f"e^{k}t block, t^{j}: computed {frac_str(pa.coeff(j))}, "
                        f"fixture {frac_str(pb.coeff(j))}")
    return "structurally equal"


def kernel_image_lifted(constants: SourceConstants) -> ExpPoly:
    """The expansion's Laplace image, multiplied through by e^(LIFT*t).

    Each integrand term c*t^j*e^(-a*t) becomes c*t^j*e^((LIFT-a)*t), which
    stays in nonnegative-exponent territory because every decay is <= LIFT.
    """
    acc = ExpPoly.zero()
    for kt in constants.remainder_expansion.kernel_terms():
        if kt.decay > KERNEL_LIFT:
            raise FixtureMismatch(
                f"kernel decay {kt.decay} exceeds exponent lift {KERNEL_LIFT}")
        acc = acc + ExpPoly.term(KERNEL_LIFT - kt.decay,
                                 Poly.monomial(kt.coeff, kt.power))
    return acc


def build_theta_from_kernel(constants: SourceConstants | None = None) -> ExpPoly:
    """Rebuild theta from the expansion's kernel and match it to the fixture.

    theta = KERNEL_SCALE * e^(2t) * [t e^t - (e^t - 1) * (kernel image)];
    raises FixtureMismatch with the first per-exponent coefficient diff if
    the rebuilt object differs from the transcribed display.
    """
    constants = constants if constants is not None else load_constants()
    lifted = kernel_image_lifted(constants)
    e_t = ExpPoly.term(1, Poly((1,)))
    one = ExpPoly.term(0, Poly((1,)))
    built = KERNEL_SCALE * (ExpPoly.term(1 + KERNEL_LIFT, Poly((0, 1)))
                            - (e_t - one) * lifted)
    if built != constants.theta:
        raise FixtureMismatch("rebuilt theta differs from fixture: "
                              + _exppoly_diff(built, constants.theta))
    return built


def build_chain(constants: SourceConstants | None = None) -> ThetaChain:
    """Differentiate the fixture theta through all three stages exactly."""
    constants = constants if constants is not None else load_constants()
    theta_derivs = []
    cur = constants.theta
    for _ in range(10):
        cur = cur.deriv()
        theta_derivs.append(cur)
    theta1 = theta_derivs[-1].factor_exp(1, 1)
    theta1_derivs = []
    cur = theta1
    for _ in range(10):
        cur = cur.deriv()
        theta1_derivs.append(cur)
    theta2 = theta1_derivs[-1].factor_exp(1, 512)
    theta2_derivs = []
    cur = theta2
    for _ in range(9):
        cur = cur.deriv()
        theta2_derivs.append(cur)
    return ThetaChain(constants.theta, tuple(theta_derivs),
                      theta1, tuple(theta1_derivs),
                      theta2, tuple(theta2_derivs))


def _step(idx: int, name: str, claim: str, method: str, values, ok: bool,
          detail: str = "") -> StepRecord:
    vals = tuple((str(k), str(v)) for k, v in values)
    return StepRecord(idx, name, claim, method, vals,
                      "pass" if ok else "fail", detail)


def verify_kernel_build(constants: SourceConstants | None = None,
                        start: int = 1) -> list[StepRecord]:
    """Certificate fragment: the kernel rebuild reproduces the theta display."""
    constants = constants if constants is not None else load_constants()
    try:
        build_theta_from_kernel(constants)
        ok, detail = True, "all four exponent blocks match"
    except FixtureMismatch as exc:
        ok, detail = False, str(exc)
    rec = _step(start, "kernel-build",
                "scale * e^2t * [t e^t - (e^t - 1) * kernel(expansion)] equals theta",
                "exact-exppoly-equality",
                [("kernel_scale", KERNEL_SCALE)], ok, detail)
    return [rec]


def verify_derivative_fixtures(chain: ThetaChain,
                               constants: SourceConstants | None = None,
                               start: int = 2) -> list[StepRecord]:
    """Certificate fragment: the displayed derivative formulas match.

    Minimum fixture set: theta', theta^(10) (= e^t theta1), theta1',
    theta1^(10) (= 512 e^t theta2), theta2^(9); the intermediate displays are
    implied by exact differentiation and pinned at t=0 by the value table.
    """
    constants = constants if constants is not None else load_constants()
    checks = [
        ("theta-prime", chain.stage("theta", 1), constants.theta_prime),
        ("theta-10th", chain.stage("theta", 10), constants.theta1.shift_exp(1)),
        ("theta1-prime", chain.stage("theta1", 1), constants.theta1_prime),
        ("theta1-10th", chain.stage("theta1", 10),
         512 * constants.theta2.shift_exp(1)),
        ("theta2-9th", chain.stage("theta2", 9), constants.theta2_d9),
    ]
    out = []
    for i, (name, computed, fixture) in enumerate(checks):
        ok = computed == fixture
        out.append(_step(start + i, f"formula-{name}",
                         f"computed {name.replace('-', ' ')} equals the displayed fixture",
                         "exact-exppoly-equality", [],
                         ok, "" if ok else _exppoly_diff(computed, fixture)))
    return out


def verify_initial_values(chain: ThetaChain,
                          constants: SourceConstants | None = None,
                          start: int = 7) -> list[StepRecord]:
    """Certificate fragment: all 29 tabulated t=0 values match, plus theta(0)=0."""
    constants = constants if constants is not None else load_constants()
    records = []
    idx = start
    theta0 = chain.theta.eval_exact_at_zero()
    records.append(_step(idx, "initial-theta-zero", "theta(0) = 0",
                         "exact-evaluation", [("theta(0)", frac_str(theta0))],
                         theta0 == 0))
    idx += 1
    bad: list[str] = []
    used: list[tuple[str, str]] = []
    for stage, length in CHAIN_LENGTHS.items():
        for order in range(1, length + 1):
            got = chain.stage(stage, order).eval_exact_at_zero()
            want = Fraction(constants.initial_values[stage][order])
            if got != want:
                bad.append(f"{stage}^({order})(0): computed {frac_str(got)}, "
                           f"table {frac_str(want)}")
    used.append(("values_checked", "29"))
    zeros = all(constants.initial_values["theta"][o] == 0 for o in range(1, 5))
    if not zeros:
        bad.append("theta derivative orders 1..4 must vanish at 0")
    records.append(_step(idx, "initial-value-table",
                         "all 29 tabulated derivative values at t=0 match the chain",
                         "exact-evaluation", used, not bad,
                         "; ".join(bad) if bad else "29/29 equal"))
    return records


def verify_divisibility(chain: ThetaChain, start: int = 9) -> list[StepRecord]:
    """Certificate fragment: the factor-out steps are exact.

    theta^(10) must carry no e^0 block (so e^t divides it), and theta1^(10)
    must carry no e^0 block with every coefficient divisible by 512.
    """
    records = []
    t10 = chain.stage("theta", 10)
    ok1 = 0 not in t10.exponents()
    records.append(_step(start, "divisibility-theta10",
                         "theta^(10) has no e^0 block (e^t factors out exactly)",
                         "exponent-support-check",
                         [("exponents", ",".join(map(str, t10.exponents())))], ok1))
    t110 = chain.stage("theta1", 10)
    ok2 = 0 not in t110.exponents()
    div512 = all(c.denominator == 1 and c.numerator % 512 == 0
                 for _, p in t110.blocks() for c in p.coeffs)
    records.append(_step(start + 1, "divisibility-theta1-10th",
                         "theta1^(10) has no e^0 block and 512 divides every coefficient",
                         "exact-integer-divisibility",
                         [("exponents", ",".join(map(str, t110.exponents())))],
                         ok2 and div512))
    return records


def _bottom_stage_positivity(stage: ExpPoly) -> tuple[bool, list, str]:
    """Coefficient-level proof that the bottom stage is positive for t >= 0.

    Requires the shape P(t)e^t + c with P having nonnegative coefficients:
    then the value is >= P(0) + c for all t >= 0 (using e^t >= 1, t >= 0),
    and P(0) + c > 0 is an exact integer comparison.
    """
    if any(k not in (0, 1) for k in stage.exponents()):
        return False, [], "bottom stage is not of the form P(t)e^t + c"
    p1 = stage.block(1)
    p0 = stage.block(0)
    if p0.degree > 0:
        return False, [], "e^0 block is not constant"
    if any(c < 0 for c in p1.coeffs):
        return False, [], "e^t block has a negative coefficient"
    const = p0.coeff(0)
    lower = p1(Fraction(0)) + const
    values = [("e^t_block_at_0", frac_str(p1(Fraction(0)))),
              ("constant_block", frac_str(const)),
              ("lower_bound", frac_str(lower))]
    return lower > 0, values, f"value >= {frac_str(lower)} > 0 for all t >= 0"


def chain_positivity_certificate(chain: ThetaChain,
                                 constants: SourceConstants | None = None,
                                 start: int = 1) -> CertificateReport:
    """The five-step positivity chain, bottom stage upward.

    1. the bottom stage theta2^(9) is positive on [0, inf) by an exact
       coefficient comparison (only e^t >= 1 and t >= 0 are used);
    2. integrating from 0 with the tabulated nonnegative initial values,
       every theta2 derivative down to theta2 itself is positive on (0, inf);
    3. theta1^(10) = 512 e^t theta2 > 0, and the same induction over the
       tabulated theta1 initial values gives theta1 > 0;
    4. theta^(10) = e^t theta1 > 0, the theta initial values are >= 0 and
       theta(0) = 0, so theta is increasing and positive on (0, inf);
    5. hence the kernel integrand is nonnegative, H is completely monotonic,
       and so is g(x) - g(x+1) = (2/x^2) H(x) as a product of completely
       monotonic factors; the shift induction transfers this to g itself.
    """
    constants = constants if constants is not None else load_constants()
    steps: list[StepRecord] = []
    idx = start

    # the bottom stage is taken from the transcribed display (equal to the
    # computed one once the formula fixtures have been verified)
    ok1, vals1, det1 = _bottom_stage_positivity(constants.theta2_d9)
    steps.append(_step(idx, "bottom-stage-positive",
                       "theta2^(9)(t) > 0 for all t >= 0",
                       "coefficient-sign-check", vals1, ok1, det1))
    idx += 1

    def induction(stage: str, top_order: int, ok_above: bool,
                  base_value: Fraction, name: str, claim: str) -> StepRecord:
        table = constants.initial_values[stage]
        bad = [o for o in range(1, top_order + 1) if table[o] < 0]
        vals = [(f"{stage}({0})", frac_str(base_value))]
        vals += [(f"{stage}^({o})(0)", str(table[o])) for o in range(1, top_order + 1)]
        ok = ok_above and not bad and base_value >= 0
        detail = ("initial values nonnegative; integration from 0 lifts "
                  "positivity down the chain" if ok else
                  f"negative initial value at orders {bad}" if bad else
                  "precondition above failed")
        return _step(idx, name, claim, "integration-from-zero-induction", vals,
                     ok, detail)

    steps.append(induction("theta2", 8, ok1,
                           chain.theta2.eval_exact_at_zero(),
                           "theta2-chain-positive",
                           "theta2^(i) > 0 on (0, inf) for i = 8..0"))
    idx += 1

    ok2 = steps[-1].passed
    steps.append(induction("theta1", 9, ok2,
                           chain.theta1.eval_exact_at_zero(),
                           "theta1-chain-positive",
                           "theta1^(10) = 512 e^t theta2 > 0, hence "
                           "theta1^(i) > 0 on (0, inf) for i = 9..0"))
    idx += 1

    ok3 = steps[-1].passed
    theta0 = chain.theta.eval_exact_at_zero()
    table = constants.initial_values["theta"]
    bad = [o for o in range(1, 10) if table[o] < 0]
    ok4 = ok3 and not bad and theta0 == 0
    steps.append(_step(idx, "theta-chain-positive",
                       "theta^(10) = e^t theta1 > 0, hence theta^(i) > 0 on "
                       "(0, inf) for i = 9..1 and theta >= 0 with theta(0) = 0",
                       "integration-from-zero-induction",
                       [("theta(0)", frac_str(theta0))]
                       + [(f"theta^({o})(0)", str(table[o])) for o in range(1, 10)],
                       ok4,
                       "theta increases from theta(0) = 0" if ok4 else
                       "precondition failed"))
    idx += 1

    ok5 = ok4
    steps.append(_step(idx, "cm-conclusion",
                       "the kernel integrand theta(t) e^(-(x+2)t)/(e^t - 1) is "
                       "nonnegative, so H is completely monotonic; so is "
                       "g(x) - g(x+1) = (2/x^2) H(x) as a product of completely "
                       "monotonic factors, and the shift induction (with the "
                       "derivatives vanishing at infinity) extends this to g "
                       "for every derivative order k >= 0",
                       "cm-closure-inference",
                       [("kernel_scale", str(KERNEL_SCALE))], ok5,
                       "sign conditions established by steps 1-4" if ok5 else
                       "positivity chain incomplete"))
    return CertificateReport(tuple(steps))


def replay_proof(constants: SourceConstants | None = None) -> CertificateReport:
    """Full proof replay: kernel build, formula fixtures, initial values,
    divisibility, then the five positivity steps.  Never raises on a failed
    check; failures become 'fail' verdicts so CI can report them."""
    constants = constants if constants is not None else load_constants()
    steps: list[StepRecord] = []
    steps += verify_kernel_build(constants, start=1)
    chain = build_chain(constants)
    steps += verify_derivative_fixtures(chain, constants, start=2)
    steps += verify_initial_values(chain, constants, start=7)
    steps += verify_divisibility(chain, start=9)
    cert = chain_positivity_certificate(chain, constants, start=11)
    return CertificateReport(tuple(steps) + cert.steps)


@dataclass(frozen=True)
class SpotcheckEntry:
    stage: str
    order: int
    t: Fraction
    verdict: str
    enclosure: str


@dataclass(frozen=True)
class SpotcheckReport:
    entries: tuple[SpotcheckEntry, ...]

    @property
    def passed(self) -> bool:
        return all(e.verdict in ("positive", "boundary-zero") for e in self.entries)

    def to_json(self) -> str:
        payload = {
            "overall": "pass" if self.passed else "fail",
            "entries": [
                {"stage": e.stage, "order": e.order, "t": frac_str(e.t),
                 "verdict": e.verdict, "enclosure": e.enclosure}
                for e in self.entries
            ],
        }
        return stable_json_dumps(payload, "spotcheck")


def grid_positivity_spotcheck(chain: ThetaChain,
                              stages: Sequence[tuple[str, int]],
                              grid: Iterable,
                              prec: int = 128) -> SpotcheckReport:
    """Numerically corroborate stage positivity on a grid of t values.

    t = 0 with an exactly zero value is reported as a boundary case, not a
    failure.  A straddling enclosure escalates precision (x2, x4) and then
    raises IndeterminateSign.
    """
    entries = []
    for stage, order in stages:
        e = chain.stage(stage, order)
        for t in grid:
            t = as_fraction(t)
            if t < 0:
                raise IndeterminateSign("grid points must be t >= 0")
            verdict = None
            for mult in (1, 2, 4):
                ball = e.eval_ball(t, prec * mult)
                s = ball.sign()
                if s > 0:
                    verdict = "positive"
                elif ball.is_exact() and ball.mid == 0:
                    verdict = "boundary-zero" if t == 0 else "negative"
                elif s < 0:
                    verdict = "negative"
                if verdict:
                    break
            if verdict is None:
                raise IndeterminateSign(
                    f"{stage}^({order}) at t={t} straddles 0 after escalation")
            entries.append(SpotcheckEntry(stage, order, t, verdict, str(ball)))
    return SpotcheckReport(tuple(entries))
