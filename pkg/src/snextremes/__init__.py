"""Skew-normal maxima: norming constants, tail-stable distribution functions and
Gumbel convergence rates."""
from ._backend import BACKEND
from .convergence import (
    DistanceReport,
    ProofDiagnostics,
    RateCurve,
    leading_term,
    max_cdf,
    monte_carlo_check,
    proof_diagnostics,
    rate_curve,
    sup_distance,
    sup_profile,
)
from .norming import (
    AuxSequences,
    NormingConstants,
    aux_sequences,
    bound_suite,
    n_zero,
    solve_constants,
)
from .skew_normal import (
    Regime,
    RegimeError,
    ShapeParameter,
    SurvivalEvaluation,
    SurvivalMethod,
    cdf,
    mills_bracket,
    pdf,
    sample,
    survival,
    tail_expansion,
)
from .special import (
    DomainError,
    LogScaledValue,
    lambert_w0,
    normal_cdf,
    normal_mills_bracket,
    normal_pdf,
    normal_survival,
    owen_t,
)

__version__ = "0.1.0"
