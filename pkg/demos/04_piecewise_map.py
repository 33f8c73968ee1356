"""
A winding map with prescribed exponents
=======================================

Splitting ``(0, 1)`` into intervals of length proportional to ``k**(-p/alpha)``
and sending the k-th interval onto the k-th turn gives a map that is
``alpha``-Hölder with an inverse that is ``beta``-Hölder for
``beta = p alpha/(p - alpha)``, which is optimal.
"""

import numpy as np

from windspiral import build_piecewise_map, estimate_forward_exponent, estimate_inverse_exponent

m = build_piecewise_map(1.0, 0.6)
alpha, beta = m.target
print(f"target exponents alpha={alpha}, beta={beta:.4f}")

# the map is continuous across interval boundaries
k = np.array([1, 10, 100, 1000])
b = m.tail(k + 1)
print("jump at boundaries:", np.abs(m.forward(b) - m.forward(np.nextafter(b, 0))).max())

fa = estimate_forward_exponent(m)
fb = estimate_inverse_exponent(m)
print(f"estimated alpha {fa.exponent:.4f} (families {fa.families})")
print(f"estimated beta  {fb.exponent:.4f} via {max(fb.families, key=fb.families.get)}")
