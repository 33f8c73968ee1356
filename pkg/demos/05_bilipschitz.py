"""
Bi-Lipschitz spirals and a logarithmic obstruction
==================================================

If ``phi(x) = eps(x) x**-p`` with ``eps`` Lipschitz and pinned between two
positive constants, sending ``x**-p exp(ix)`` to ``phi(x) exp(ix)`` distorts
distances by a bounded factor. A logarithmic factor ``(log x)**gamma`` is not
of this kind, and the decay diagnostic below shows why the optimal exponent
pair for ``S_p`` cannot be reached on that spiral.
"""

import numpy as np

from windspiral import EquivalenceMap, PairSampler, distortion_stats, log_perturbation_decay, log_damped_example

phi = log_damped_example(1.0)
print("factor bounds", phi.bounds, "Lipschitz constant", round(phi.lipschitz, 4))

F = EquivalenceMap.to_comparable(phi)
for budget in (100_000, 200_000):
    rep = distortion_stats(F, PairSampler(seed=0), budget)
    print(f"budget {budget}: ratio in [{rep.min_ratio:.4f}, {rep.max_ratio:.4f}], split {rep.regime_split}")

ls = [10**2, 10**3, 10**4, 10**5, 10**6]
for p, gamma, alpha in ((2.0, 1.0, 1.0), (1.0, 0.5, 0.5)):
    vals = log_perturbation_decay(p, gamma, alpha, ls)
    print(f"(p, gamma, alpha)=({p}, {gamma}, {alpha}):", np.round(vals, 5), f"drop {vals[0] / vals[-1]:.2f}x")
