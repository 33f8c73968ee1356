"""
Box dimension and Assouad spectrum
==================================

Covering numbers of the spiral are counted exactly turn by turn and fitted on
a log-log grid. The box dimension is ``max(2/(1+p), 1)``, and the Assouad
spectrum interpolates from it up to 2 with one phase transition at
``theta = p/(1+p)``.
"""

import numpy as np

from windspiral import (
    assouad_spectrum_closed,
    estimate_box_dim,
    estimate_spectrum,
    phase_transition,
    spectrum_bounds,
)

for p in (0.25, 0.5, 2.0):
    est = estimate_box_dim(p)
    print(f"p={p}: fitted box dimension {est.value:.4f}, closed form {est.closed_form:.4f}")

p = 0.5
print(f"\nAssouad spectrum of S_{p}; transition at theta = {phase_transition(p):.4f}")
print(" theta  estimate  closed   general bounds")
for theta in np.linspace(0.1, 0.9, 9):
    est = estimate_spectrum(p, theta)
    lo, hi = spectrum_bounds(p, theta)
    print(f" {theta:.2f}   {est.value:.4f}    {assouad_spectrum_closed(p, theta):.4f}   [{lo:.4f}, {hi:.4f}]")
