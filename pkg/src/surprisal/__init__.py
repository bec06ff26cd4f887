"""Relative entropy, relative variance and majorization of classical spectra."""

from .core import (
    Dichotomy,
    MeasureSet,
    Spectrum,
    chi,
    dichotomy,
    eta,
    iid_power,
    max_variance_spectrum,
    measures,
    monotone_M,
    mutual_information,
    renyi_entropy,
    surprisal_cumulants,
    tensor,
    trace_distance,
    validate_spectrum,
)
from .lorenz import (
    LorenzCurve,
    TransitionVerdict,
    approx_transition,
    dominates,
    eval_at,
    exact_transition,
    lorenz_curve,
    slope_bounds,
)
from .approx import (
    ApproxState,
    SmoothedBounds,
    cantelli_envelopes,
    flat_approximation,
    smoothed_divergences,
    steep_approximation,
)
from .transitions import (
    RateReport,
    SufficiencyVerdict,
    catalyst_bound,
    entropy_production_bound,
    iid_error_bound,
    iid_rate_bound,
    landauer,
    marginal_budget,
    sufficient_condition,
)
from .spectral import CharPoly, PowerSums, newton_girard, poly_roots, power_sums_from_renyi, spectrum_from_renyi
from .harness import PropertyReport, SamplerConfig, run_suite

__version__ = "0.1.0"
