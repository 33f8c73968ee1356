"""Vectorised adaptive Gauss-Legendre quadrature.

Many intervals are integrated at once: every panel is evaluated with a
10-point and a 21-point rule, panels whose two estimates disagree by more
than their share of the tolerance are bisected, and the process repeats
level by level.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import NumericError

_LO_NODES, _LO_WEIGHTS = np.polynomial.legendre.leggauss(10)
_HI_NODES, _HI_WEIGHTS = np.polynomial.legendre.leggauss(21)

DEFAULT_TOL = 1e-10
MAX_LEVEL = 60


def _rule(f, lo, hi, nodes, weights):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * nodes[None, :]
    return half * (f(x) @ weights)


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a,
    b,
    tol: float = DEFAULT_TOL,
    max_level: int = MAX_LEVEL,
) -> np.ndarray:
    """Integrate ``f`` over each interval ``[a[i], b[i]]``.

    Parameters
    ----------
    f : callable
        Vectorised integrand; receives a 2-D array of abscissae.
    a, b : array_like
        Interval endpoints, broadcast against each other.
    tol : float
        Absolute error target per interval.
    max_level : int
        Maximum number of bisection levels before giving up.

    Returns
    -------
    numpy.ndarray
        Integral estimates with the broadcast shape of ``a`` and ``b``.

    Raises
    ------
    NumericError
        If some panel still fails the error test after ``max_level``
        bisections.
    """
    a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    shape = a.shape
    a = a.ravel()
    b = b.ravel()
    total = np.zeros(a.size)
    width = np.abs(b - a)
    width[width == 0] = 1.0

    owner = np.arange(a.size)
    lo, hi = a.copy(), b.copy()
    for _ in range(max_level + 1):
        if owner.size == 0:
            return total.reshape(shape)
        coarse = _rule(f, lo, hi, _LO_NODES, _LO_WEIGHTS)
        fine = _rule(f, lo, hi, _HI_NODES, _HI_WEIGHTS)
        share = tol * np.abs(hi - lo) / width[owner]
        ok = np.abs(fine - coarse) <= share
        np.add.at(total, owner[ok], fine[ok])
        bad = ~ok
        owner, lo, hi = owner[bad], lo[bad], hi[bad]
        mid = 0.5 * (lo + hi)
        owner = np.concatenate([owner, owner])
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
    if owner.size == 0:
        return total.reshape(shape)
    raise NumericError(f"quadrature did not converge within {max_level} levels")
