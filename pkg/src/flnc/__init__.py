"""Finite-length network coding over lossy line networks.

Simulators for block and sliding-window random linear coding through
multi-hop erasure links, exact loss-rate formulas and bounds for the
full-block scheme, Monte Carlo estimation for the rest, and search plus
curve-fitting tools for the optimal finite-length coding rate.
"""

from .analytic import (
    BoundPair,
    binom_pmf,
    entropy_H,
    full_rank_probability,
    plr_gaussian_upper,
    plr_rlnc,
    plr_rlnc_bounds,
    std_normal_cdf,
    zubkov_C,
)
from .gf import GF2, DEFAULT_POLYNOMIALS, GfElement, GfField
from .linalg import GfMatrix, IngestOutcome, ProgressiveDecoder, rank
from .montecarlo import PlrEstimate, estimate_plr, estimate_plr_curve
from .network import LineNetwork, RngStream, erase, min_cut
from .optimizer import (
    RatePoint,
    RateSearchResult,
    RateSet,
    make_evaluator,
    optimal_rate,
    optimal_rate_curve,
)
from .rateanalysis import (
    ExpFit,
    SlopeSummary,
    average_slope,
    fit_saturating_exp,
    slope_at,
)
from .schemes import (
    DEFAULT_FIELD,
    CodeSpec,
    DeliveryReport,
    Scheme,
    Slot,
    build_generator,
    run_generation,
    run_stream_swnc,
    swnc_coded_generator,
    swnc_window,
    transmit_schedule,
)

__version__ = "0.1.0"

__all__ = [
    "BoundPair",
    "CodeSpec",
    "DEFAULT_FIELD",
    "DEFAULT_POLYNOMIALS",
    "DeliveryReport",
    "ExpFit",
    "GF2",
    "GfElement",
    "GfField",
    "GfMatrix",
    "IngestOutcome",
    "LineNetwork",
    "PlrEstimate",
    "ProgressiveDecoder",
    "RatePoint",
    "RateSearchResult",
    "RateSet",
    "RngStream",
    "Scheme",
    "Slot",
    "SlopeSummary",
    "average_slope",
    "binom_pmf",
    "build_generator",
    "entropy_H",
    "erase",
    "estimate_plr",
    "estimate_plr_curve",
    "fit_saturating_exp",
    "full_rank_probability",
    "make_evaluator",
    "min_cut",
    "optimal_rate",
    "optimal_rate_curve",
    "plr_gaussian_upper",
    "plr_rlnc",
    "plr_rlnc_bounds",
    "rank",
    "run_generation",
    "run_stream_swnc",
    "slope_at",
    "std_normal_cdf",
    "swnc_coded_generator",
    "swnc_window",
    "transmit_schedule",
    "zubkov_C",
]
