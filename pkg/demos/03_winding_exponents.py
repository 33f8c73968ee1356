"""
Hölder exponents of the winding maps g_t
========================================

``g_t(x) = x**(t p) exp(i x**-t)`` maps ``(0, 1)`` onto the spiral. Its sharp
forward and inverse Hölder exponents are ``min(t p/(t+1), 1)`` and
``max(t p, 1)``. The estimators recover both from pair families that probe
antipodal points on one turn and same-argument points many turns apart.
"""

from windspiral import (
    GtMap,
    estimate_forward_exponent,
    estimate_inverse_exponent,
    g_t_sharp_exponents,
    sharp_alpha_bound,
    spectrum_alpha_bound,
    box_alpha_bound,
)

p = 1.3
print(f"p={p}: beta leaves 1 at t = {1 / p:.3f}, alpha reaches 1 at t = {1 / (p - 1):.3f}")
print("   t   alpha  alpha_hat   beta   beta_hat")
for t in (0.25, 0.5, 1.0, 2.0, 3.0, 4.0):
    g = GtMap(p, t)
    a, b = g_t_sharp_exponents(p, t)
    fa = estimate_forward_exponent(g).exponent
    fb = estimate_inverse_exponent(g).exponent
    print(f"{t:5.2f}  {a:.4f}  {fa:.4f}   {b:7.4f}  {fb:7.4f}")

# for a fixed inverse exponent, dimension theory caps alpha at weaker levels
print("\nalpha caps at p=1:  beta  sharp  spectrum  box")
for beta in (1.0, 2.0, 4.0, 16.0):
    print(f"                   {beta:5.1f}  {sharp_alpha_bound(1, beta):.3f}  {spectrum_alpha_bound(1, beta):.3f}     {box_alpha_bound(1):.3f}")
