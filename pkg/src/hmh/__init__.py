"""Numerical verification of heat-kernel, Gutzmer, Poisson, Plancherel and
Paley-Wiener identities on the Heisenberg motion group H^n x| T^d."""

from .harness import RunConfig, SuiteResult, make_test_function, run_suite
from .numerics import QuadratureError, QuadratureRule, VerificationReport
from .spectral_identities import (ComplexGroupPoint, FourierMatrix, complexified_rep_norm,
                                  fourier_transform_hm, gutzmer_lhs, gutzmer_rhs,
                                  paley_wiener_check, plancherel_check, poisson_apply,
                                  poisson_identity_check)
from .twisted_transforms import (BandLimitedFunction, TwistedSlice, bergman_norm,
                                 direct_integral_norm, heat_multiplier_apply, segal_bargmann)

__version__ = "0.1.0"

__all__ = [
    "BandLimitedFunction", "ComplexGroupPoint", "FourierMatrix", "QuadratureError", "QuadratureRule",
    "RunConfig", "SuiteResult", "TwistedSlice", "VerificationReport", "bergman_norm",
    "complexified_rep_norm", "direct_integral_norm", "fourier_transform_hm", "gutzmer_lhs",
    "gutzmer_rhs", "heat_multiplier_apply", "make_test_function", "paley_wiener_check",
    "plancherel_check", "poisson_apply", "poisson_identity_check", "run_suite", "segal_bargmann",
]
