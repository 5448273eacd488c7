"""Constants file: grammar, structure, and the frozen checksum."""

import hashlib
from fractions import Fraction as F

import pytest

from cmgamma.algebra import PartialFractionTerm
from cmgamma.constants import (DEFAULT_CONSTANTS_PATH, CHAIN_LENGTHS,
                               load_constants, parse_constants_text)
from cmgamma.errors import ConstantsFormatError

# Guards against accidental edits; substantive errors are caught by the
# exact identity tests, this catches any drift at all.
FROZEN_SHA256 = "2aecc7a02adf180115e0267ab53fbe748b9a96e4ac0898560eeae533125604ad"


def test_checksum_frozen():
    digest = hashlib.sha256(DEFAULT_CONSTANTS_PATH.read_bytes()).hexdigest()
    assert digest == FROZEN_SHA256


def test_shapes(consts):
    assert consts.p.degree == 10
    assert consts.q.degree == 21
    assert len(consts.remainder_expansion.terms) == 22
    assert consts.theta.exponents() == (0, 1, 2, 3)
    assert consts.theta1.exponents() == (0, 1, 2)
    assert consts.theta2.exponents() == (0, 1)
    total = sum(len(consts.initial_values[s]) for s in CHAIN_LENGTHS)
    assert total == 29


def test_known_entries(consts):
    assert consts.p(0) == 450
    assert consts.q(0) == 1382400
    assert PartialFractionTerm(F(1, 2), 0, 1) in consts.remainder_expansion.terms
    assert PartialFractionTerm(F(-251, 120), 1, 2) in consts.remainder_expansion.terms
    assert consts.initial_values["theta"][5] == 1632960000
    assert consts.initial_values["theta2"][1] == 141434891210025


def test_theta2_at_zero_oracle(consts):
    # oracle: direct arithmetic on the displayed constants
    assert consts.theta2.eval_exact_at_zero() == 6428310336000 * 19 - 87648575175
    assert consts.theta2.eval_exact_at_zero() == 122050247808825


def test_loader_caches_default(consts):
    assert load_constants() is consts


def test_parse_scale_and_powers():
    sections = parse_constants_text("[poly a]\nscale -4\n0 2\n2 1/2\n")
    poly = sections["poly a"]
    assert poly.coeffs == (F(-8), F(0), F(-2))


def test_parse_pf_section():
    sections = parse_constants_text("[pf f]\n1/2 0 1\n-3 2 5\n")
    form = sections["pf f"]
    assert form.terms == (PartialFractionTerm(F(1, 2), 0, 1),
                          PartialFractionTerm(F(-3), 2, 5))


@pytest.mark.parametrize("text", [
    "0 450\n",                      # entry before section
    "[poly a]\n0 1\n0 2\n",         # repeated power
    "[poly a]\nx 1\n",              # non-integer power
    "[weird a]\n",                  # unknown section kind
    "[poly a\n",                    # unterminated header
    "[values v]\na 1\na 2\n",       # repeated label
    "[poly a]\n0 1 2\n",            # wrong arity
])
def test_grammar_errors(text):
    with pytest.raises((ConstantsFormatError, ValueError)):
        parse_constants_text(text)


def test_mutated_file_loads_but_differs(mutate_constants):
    path = mutate_constants(r"5 1632960000", "5 1632960001")
    consts = load_constants(path)
    assert consts.initial_values["theta"][5] == 1632960001
