"""Stationary-set estimation of oscillatory integrals.

Evaluates two-dimensional monomial-surface extension integrals, the level
profiles and window volumes that bound them, the coefficient boxes realizing
the lower bound, and the dyadic ledgers that pin the critical integrability
exponent q_k = k(k+1)(k+2)/6 + 2.
"""

from .backends import backend_name
from .basis import (
    MonomialBasis,
    MultiIndex,
    PhaseCoefficients,
    basis_dimension,
    eval_phase,
    monomial_basis,
    phase,
    phase_from_json,
    phi,
)
from .dualbox import DeltaTuple, DualBoundResult, build_delta_tuple, dual_bound, order_nodes
from .gridset import GridSet, StripCensus, projection_intervals, shifted_core, stationary_gridset, strip_census
from .masscurve import MassCurve, extension_value, mass_curve
from .omega import (
    OmegaBox,
    critical_exponent,
    divergence_ledger,
    omega_box_construct,
    omega_field_check,
    omega_membership,
)
from .quadrature import QuadResult, direct_integral_1d, direct_integral_2d, ikromov_check
from .rebase import RebasedExpansion, coeff_l1_norm, rebase, rescale
from .stationary import (
    LevelProfile,
    MonotonicityReport,
    VolumeEstimate,
    level_profile,
    monotonicity_changes,
    stationary_reconstruct,
    sup_window_measure,
    theorem1_ratio,
    window_volume,
)

__version__ = "0.1.0"
