"""
Turns and length of a polynomial spiral
=======================================

The spiral ``x**-p exp(ix)`` for ``x >= 1`` winds infinitely often around the
origin. Its turns shrink like ``k**-p``, so the total length is finite exactly
when ``p > 1``.
"""

import numpy as np

from windspiral import WindingFunction, length_classification, spiral_point, turn_arclengths

# a point on the spiral carries its parameter, radius and argument
print(spiral_point(WindingFunction.polynomial(1.0), 2 * np.pi))

# turn lengths times k**p settle to (2 pi)**(1 - p)
ks = np.array([1, 10, 100, 1000, 10_000])
for p in (0.5, 1.0, 2.0):
    scaled = turn_arclengths(WindingFunction.polynomial(p), ks) * ks**p
    print(f"p={p}: k**p * L_k =", np.round(scaled, 5), " limit", round((2 * np.pi) ** (1 - p), 5))

# partial lengths grow like K**(1-p), log K, or converge
for p in (0.5, 1.0, 2.0):
    rep = length_classification(p, 100_000)
    print(f"p={p}: sum of first {rep.K} turns = {rep.partial_sum:.4f}, model {rep.growth_model}, length {rep.verdict}")
