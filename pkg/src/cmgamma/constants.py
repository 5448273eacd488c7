"""Loader for the transcribed exact constants (single source of truth).

The constants live in ``data/source_constants.txt``; the file documents its
own line-oriented grammar ([poly NAME] / [pf NAME] / [values NAME] sections
holding exact rationals).  Everything downstream (the bound functions, the
kernel build, the derivative-chain fixtures, the initial-value table)
reads from this one file, so a transcription error is caught by the exact
identity tests instead of propagating silently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from .algebra import ExpPoly, PartialFractionForm, PartialFractionTerm, Poly
from .errors import ConstantsFormatError

DEFAULT_CONSTANTS_PATH = Path(__file__).parent / "data" / "source_constants.txt"

# Denominator structure of the two displayed rational functions:
#   B(x) = p(x) / (SCALE_P * x^4 (x+1)^10)
#   R(x) = q(x) / (SCALE_Q * x^2 (1+x)^10 (2+x)^10)
SCALE_P = 900
BOUND_DEN_FACTORS = ((0, 4), (1, 10))
SCALE_Q = 1800
REMAINDER_DEN_FACTORS = ((0, 2), (1, 10), (2, 10))

# The kernel normalization: H(x) = (1/KERNEL_SCALE) * integral of
# theta(t) e^(-(x+2)t)/(e^t - 1);  KERNEL_SCALE = SCALE_Q * 9! and the
# exponent lift below shifts every decaying integrand term into e^(k t),
# k >= 0, territory before multiplying out.
KERNEL_SCALE = 653184000
KERNEL_LIFT = 2

CHAIN_LENGTHS = {"theta": 10, "theta1": 10, "theta2": 9}


@dataclass(frozen=True, eq=False)  # identity hash: instances are cached singletons
class SourceConstants:
    """All transcribed exact fixtures, parsed and assembled."""

    p: Poly
    q: Poly
    remainder_expansion: PartialFractionForm
    theta: ExpPoly
    theta_prime: ExpPoly
    theta1: ExpPoly
    theta1_prime: ExpPoly
    theta2: ExpPoly
    theta2_d9: ExpPoly
    initial_values: dict[str, dict[int, int]]
    source_path: Path


def _parse_rational(tok: str, path, lineno: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConstantsFormatError(f"{path}:{lineno}: bad rational {tok!r}") from exc


def parse_constants_text(text: str, path="<string>") -> dict[str, object]:
    """Parse the documented grammar into {'poly NAME': Poly, 'pf NAME': ...}."""
    sections: dict[str, object] = {}
    kind = name = None
    poly_coeffs: dict[int, Fraction] = {}
    poly_scale = Fraction(1)
    pf_terms: list[PartialFractionTerm] = []
    values: dict[str, int] = {}

    def flush():
        nonlocal poly_coeffs, poly_scale, pf_terms, values
        if kind is None:
            return
        key = f"{kind} {name}"
        if key in sections:
            raise ConstantsFormatError(f"{path}: duplicate section [{key}]")
        if kind == "poly":
            top = max(poly_coeffs, default=-1)
            sections[key] = Poly(
                [poly_scale * poly_coeffs.get(i, Fraction(0)) for i in range(top + 1)])
        elif kind == "pf":
            sections[key] = PartialFractionForm(Poly.zero(), pf_terms)
        else:
            sections[key] = dict(values)
        poly_coeffs, poly_scale, pf_terms, values = {}, Fraction(1), [], {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConstantsFormatError(f"{path}:{lineno}: unterminated section header")
            flush()
            parts = line[1:-1].split()
            if len(parts) != 2 or parts[0] not in ("poly", "pf", "values"):
                raise ConstantsFormatError(f"{path}:{lineno}: bad section header {line!r}")
            kind, name = parts
            continue
        if kind is None:
            raise ConstantsFormatError(f"{path}:{lineno}: entry before any section")
        toks = line.split()
        if kind == "poly":
            if toks[0] == "scale":
                if len(toks) != 2:
                    raise ConstantsFormatError(f"{path}:{lineno}: bad scale line")
                poly_scale = _parse_rational(toks[1], path, lineno)
                continue
            if len(toks) != 2:
                raise ConstantsFormatError(f"{path}:{lineno}: expected '<power> <rational>'")
            power = int(toks[0])
            if power < 0 or power in poly_coeffs:
                raise ConstantsFormatError(f"{path}:{lineno}: bad or repeated power {power}")
            poly_coeffs[power] = _parse_rational(toks[1], path, lineno)
        elif kind == "pf":
            if len(toks) != 3:
                raise ConstantsFormatError(f"{path}:{lineno}: expected '<coeff> <shift> <order>'")
            pf_terms.append(PartialFractionTerm(
                _parse_rational(toks[0], path, lineno), int(toks[1]), int(toks[2])))
        else:
            if len(toks) != 2:
                raise ConstantsFormatError(f"{path}:{lineno}: expected '<label> <integer>'")
            if toks[0] in values:
                raise ConstantsFormatError(f"{path}:{lineno}: repeated label {toks[0]!r}")
            values[toks[0]] = int(toks[1])
    flush()
    return sections


def _assemble_exppoly(sections, base: str, path) -> ExpPoly:
    blocks: dict[int, Poly] = {}
    prefix = f"poly {base}.e"
    for key, val in sections.items():
        if key.startswith(prefix):
            blocks[int(key[len(prefix):])] = val
    if not blocks:
        raise ConstantsFormatError(f"{path}: no blocks found for {base!r}")
    return ExpPoly(blocks)


def _get(sections, key: str, path):
    if key not in sections:
        raise ConstantsFormatError(f"{path}: missing section [{key}]")
    return sections[key]


@lru_cache(maxsize=8)
def load_constants(path: str | Path | None = None) -> SourceConstants:
    """Load and assemble the constants file (default: the packaged one)."""
    path = Path(path) if path is not None else DEFAULT_CONSTANTS_PATH
    sections = parse_constants_text(path.read_text(), path)
    init: dict[str, dict[int, int]] = {}
    for stage in CHAIN_LENGTHS:
        raw = _get(sections, f"values {stage}_init", path)
        init[stage] = {int(k): v for k, v in raw.items()}
        want = set(range(1, CHAIN_LENGTHS[stage] + 1))
        if set(init[stage]) != want:
            raise ConstantsFormatError(
                f"{path}: {stage}_init must list orders {sorted(want)}")
    consts = SourceConstants(
        p=_get(sections, "poly p", path),
        q=_get(sections, "poly q", path),
        remainder_expansion=_get(sections, "pf remainder", path),
        theta=_assemble_exppoly(sections, "theta", path),
        theta_prime=_assemble_exppoly(sections, "theta_prime", path),
        theta1=_assemble_exppoly(sections, "theta1", path),
        theta1_prime=_assemble_exppoly(sections, "theta1_prime", path),
        theta2=_assemble_exppoly(sections, "theta2", path),
        theta2_d9=_assemble_exppoly(sections, "theta2_d9", path),
        initial_values=init,
        source_path=path,
    )
    if consts.p.degree != 10 or consts.q.degree != 21:
        raise ConstantsFormatError(f"{path}: p must have degree 10 and q degree 21")
    if len(consts.remainder_expansion.terms) != 22:
        raise ConstantsFormatError(f"{path}: remainder expansion must have 22 terms")
    return consts
