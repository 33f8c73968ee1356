"""Hölder exponent bounds, winding maps and their empirical certification."""

from .bounds import (
    BoundTable,
    admissible_alpha,
    bound_table,
    box_alpha_bound,
    spectrum_distortion_bound,
    g_t_sharp_exponents,
    inverse_bound_from_spectrum,
    sharp_alpha_bound,
    spectrum_alpha_bound,
    winding_conjugate,
)
from .estimators import HolderEstimate, critical_dominance, estimate_forward_exponent, estimate_inverse_exponent
from .maps import (
    GtMap,
    PiecewiseMap,
    WindingMap,
    build_piecewise_map,
    critical_antipodal,
    g_t_from_alpha,
    same_argument_point,
    stable_gap,
)

__all__ = [
    "BoundTable",
    "GtMap",
    "HolderEstimate",
    "PiecewiseMap",
    "WindingMap",
    "admissible_alpha",
    "bound_table",
    "box_alpha_bound",
    "build_piecewise_map",
    "critical_antipodal",
    "critical_dominance",
    "estimate_forward_exponent",
    "estimate_inverse_exponent",
    "spectrum_distortion_bound",
    "g_t_from_alpha",
    "g_t_sharp_exponents",
    "inverse_bound_from_spectrum",
    "same_argument_point",
    "sharp_alpha_bound",
    "spectrum_alpha_bound",
    "stable_gap",
    "winding_conjugate",
]
