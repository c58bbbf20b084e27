"""Coalescing-lineage simulation and verification toolkit.

Long-range ancestral graphs on the integers: every site i attaches to the
site i - R_i with heavy-tailed jumps R_i, components receive iid colours,
and windowed colour sums converge to fractional Brownian motion.  The
package computes the exact renewal-weight machinery of that limit and
simulates the graph at scale to verify it.
"""

from .increments import IncrementLaw
from .renewal import (
    AsymptoticConstants,
    PairDetail,
    RenewalTable,
    compute_renewal_weights,
    solve_self_convolution,
)
from .lineages import (
    ComponentPartition,
    MomentBatch,
    PairMeetBatch,
    component_moment_batch,
    components_on_window,
    decoupled_overlap_batch,
    mrca_pair_batch,
    window_jumps,
)
from .paths import (
    ColouringLaw,
    PathEnsemble,
    coloured_sum_batch,
    empirical_covariance,
    fbm_covariance,
    finite_window_covariance,
    hurst_estimate,
    make_ensemble,
)
from .diagnostics import (
    BetaPrimeLaw,
    MomentScalingReport,
    SteinFactors,
    c_tilde,
    covariance_condition_check,
    cramer_wold_samples,
    ks_distance,
    moment_scaling,
    stein_factors,
)
from .seedbank import (
    SeedbankModel,
    c_alpha_n,
    seedbank_components,
    seedbank_moment_scaling,
    seedbank_pair_batch,
    seedbank_pair_coalescence,
)

__version__ = "0.1.0"

__all__ = [
    "IncrementLaw",
    "AsymptoticConstants",
    "PairDetail",
    "RenewalTable",
    "compute_renewal_weights",
    "solve_self_convolution",
    "ComponentPartition",
    "MomentBatch",
    "PairMeetBatch",
    "component_moment_batch",
    "components_on_window",
    "decoupled_overlap_batch",
    "mrca_pair_batch",
    "window_jumps",
    "ColouringLaw",
    "PathEnsemble",
    "coloured_sum_batch",
    "empirical_covariance",
    "fbm_covariance",
    "finite_window_covariance",
    "hurst_estimate",
    "make_ensemble",
    "BetaPrimeLaw",
    "MomentScalingReport",
    "SteinFactors",
    "c_tilde",
    "covariance_condition_check",
    "cramer_wold_samples",
    "ks_distance",
    "moment_scaling",
    "stein_factors",
    "SeedbankModel",
    "c_alpha_n",
    "seedbank_components",
    "seedbank_moment_scaling",
    "seedbank_pair_batch",
    "seedbank_pair_coalescence",
    "__version__",
]
