"""Certified tri-/tetra-gamma numerics and complete-monotonicity proof replay.

Layers, bottom up:

- :mod:`cmgamma.algebra`: exact rational polynomials, exponential
  polynomials, partial fractions, and the Laplace kernel map;
- :mod:`cmgamma.ball`: midpoint-radius enclosures over exact dyadics;
- :mod:`cmgamma.polygamma`: certified psi^(m) enclosures with an
  independent (non-certified) quadrature cross-check;
- :mod:`cmgamma.constants`: the transcribed exact fixtures;
- :mod:`cmgamma.bounds`: p, q, B, g, H, their derivatives and identities;
- :mod:`cmgamma.replay`: the mechanical positivity-chain proof replay;
- :mod:`cmgamma.scan`: grid scans for complete monotonicity;
- :mod:`cmgamma.cli`: the command-line front end.
"""

from .algebra import (ExpPoly, KernelTerm, PartialFractionForm,
                      PartialFractionTerm, Poly, laplace_kernel_of,
                      pfd_decompose, pfd_recompose)
from .ball import Ball
from .bounds import (bound_eval, bound_exact, g_derivative, g_eval,
                     h_derivative, h_eval, p_eval,
                     pf_expansion_identity_check, q_eval,
                     telescoping_identity_check)
from .constants import SourceConstants, load_constants
from .errors import (CertificateFailure, CmGammaError, ConstantsFormatError,
                     DegreeError, DomainError, FixtureMismatch,
                     IndeterminateSign, NotDivisible, PrecisionError,
                     QuadratureFailure)
from .polygamma import (PrecisionPolicy, polygamma,
                        polygamma_quadrature_crosscheck,
                        polygamma_recurrence_shift)
from .replay import (CertificateReport, ThetaChain, build_chain,
                     build_theta_from_kernel, chain_positivity_certificate,
                     grid_positivity_spotcheck, replay_proof,
                     verify_derivative_fixtures, verify_initial_values)
from .scan import (CmScanReport, GridSpec, cm_scan, decay_check,
                   default_grid, inequality_scan)

__version__ = "0.1.0"

__all__ = [
    "Ball", "CertificateFailure", "CertificateReport", "CmGammaError",
    "CmScanReport", "ConstantsFormatError", "DegreeError", "DomainError",
    "ExpPoly", "FixtureMismatch", "GridSpec", "IndeterminateSign",
    "KernelTerm", "NotDivisible", "SourceConstants", "PartialFractionForm",
    "PartialFractionTerm", "Poly", "PrecisionError", "PrecisionPolicy",
    "QuadratureFailure", "ThetaChain", "bound_eval", "bound_exact",
    "build_chain", "build_theta_from_kernel", "chain_positivity_certificate",
    "cm_scan", "decay_check", "default_grid", "g_derivative", "g_eval",
    "grid_positivity_spotcheck", "h_derivative", "h_eval",
    "inequality_scan", "laplace_kernel_of", "load_constants", "p_eval",
    "pf_expansion_identity_check", "pfd_decompose", "pfd_recompose",
    "polygamma", "polygamma_quadrature_crosscheck",
    "polygamma_recurrence_shift", "q_eval", "replay_proof",
    "telescoping_identity_check", "verify_derivative_fixtures",
    "verify_initial_values",
]
