"""Polynomial spirals: winding maps, Hölder exponents, box dimension and Assouad spectrum."""

__version__ = "0.1.0"

from .dimension import (
    CoverRecord,
    DimensionEstimate,
    LengthReport,
    analytic_cover_count,
    analytic_local_cover_count,
    analytic_window_count,
    assouad_spectrum_closed,
    box_dim_closed,
    estimate_box_dim,
    estimate_spectrum,
    grid_cover_count,
    length_classification,
    partial_lengths,
    phase_transition,
    spectrum_bounds,
    spiral_grid_count,
    trivial_dims,
)
from .errors import DomainError, NumericError, PreconditionError, ResourceError
from .holder import (
    BoundTable,
    GtMap,
    HolderEstimate,
    PiecewiseMap,
    WindingMap,
    bound_table,
    box_alpha_bound,
    build_piecewise_map,
    critical_antipodal,
    critical_dominance,
    estimate_forward_exponent,
    estimate_inverse_exponent,
    spectrum_distortion_bound,
    g_t_from_alpha,
    g_t_sharp_exponents,
    inverse_bound_from_spectrum,
    same_argument_point,
    sharp_alpha_bound,
    spectrum_alpha_bound,
    stable_gap,
    winding_conjugate,
)
from .lipschitz import (
    DistortionReport,
    EquivalenceMap,
    PairSampler,
    apply_equivalence,
    distortion_stats,
    log_perturbation_decay,
)
from .spiral import (
    SpiralPoint,
    Turn,
    WindingFunction,
    arclength,
    invert_arclength,
    log_damped_example,
    sample_curve,
    sample_turn,
    spiral_point,
    turn_arclength,
    turn_arclengths,
    turn_bounds,
    turn_index,
)
