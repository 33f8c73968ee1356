"""Closed-form Hölder exponent bounds for homeomorphisms onto polynomial spirals.

Throughout, a homeomorphism ``f : (0, 1) -> S_p`` is (alpha, beta)-Hölder
when ``|x-y|**beta / C <= |f(x)-f(y)| <= C |x-y|**alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError


def g_t_sharp_exponents(p: float, t: float) -> tuple[float, float]:
    """Sharp (alpha, beta) of ``g_t(x) = x**(t p) exp(i / x**t)``."""
    if not (p > 0 and t > 0):
        raise DomainError("p and t must be positive")
    return min(t * p / (t + 1.0), 1.0), max(t * p, 1.0)


def winding_conjugate(p: float, alpha: float) -> float:
    """Smallest possible inverse exponent ``p alpha / (p - alpha)``.

    Raises ``DomainError`` for ``alpha >= p``: no alpha-Hölder
    homeomorphism onto ``S_p`` exists there.
    """
    if not 0 < alpha < p:
        raise DomainError(f"need 0 < alpha < p, got alpha={alpha}, p={p}")
    return p * alpha / (p - alpha)


def sharp_alpha_bound(p: float, beta: float) -> float:
    if beta < 1:
        raise DomainError("beta must be >= 1")
    if math.isinf(beta):
        return min(p, 1.0)
    return min(p * beta / (p + beta), 1.0)


def spectrum_alpha_bound(p: float, beta: float) -> float:
    """Upper bound on alpha obtainable from the Assouad spectrum."""
    if beta < 1:
        raise DomainError("beta must be >= 1")
    if math.isinf(beta):
        return min((p + 1.0) / 2.0, 1.0)
    return min((p * beta + beta) / (p + 2.0 * beta), 1.0)


def box_alpha_bound(p: float) -> float:
    """Upper bound on alpha obtainable from the box dimension."""
    if not p > 0:
        raise DomainError("p must be positive")
    return min((p + 1.0) / 2.0, 1.0)


def inverse_bound_from_spectrum(p: float, alpha: float) -> float:
    """Lower bound on beta obtainable from the Assouad spectrum."""
    if not 0 < alpha <= 1:
        raise DomainError("alpha must lie in (0, 1]")
    denom = 1.0 + p - 2.0 * alpha
    if denom <= 0:
        raise DomainError(f"1 + p - 2 alpha = {denom} must be positive")
    return max(p * alpha / denom, 1.0)


def spectrum_distortion_bound(dim_a_x: float, theta0: float, alpha: float, beta: float) -> float:
    """Lower bound on ``dim_A Y`` for an (alpha, beta)-Hölder image ``Y`` of ``X``.

    ``theta0`` is the first window exponent at which the Assouad spectrum
    of ``X`` reaches its Assouad dimension ``dim_a_x``.
    """
    if not (0 < alpha <= 1 <= beta):
        raise DomainError("need 0 < alpha <= 1 <= beta")
    if not 0 < theta0 <= 1:
        raise DomainError("theta0 must lie in (0, 1]")
    denom = beta - alpha * theta0
    if denom <= 0:
        raise DomainError("beta - alpha * theta0 must be positive")
    return dim_a_x * (1.0 - theta0) / denom


def admissible_alpha(p: float) -> tuple[float, float]:
    """Range ``[p/(p+1), min(p, 1)]`` of forward exponents with a sharp partner.

    The right end is open when ``p <= 1``.
    """
    return p / (p + 1.0), min(p, 1.0)


def check_admissible(p: float, alpha: float) -> None:
    lo, hi = admissible_alpha(p)
    if not (p > 0 and lo - 1e-15 <= alpha < p and 0 < alpha <= 1):
        raise DomainError(f"alpha={alpha} outside [p/(p+1), p) ∩ (0, 1] for p={p}")


@dataclass(frozen=True)
class BoundTable:
    """The three alpha upper bounds evaluated on a (p, beta) grid.

    Arrays have shape ``(len(p), len(beta))``; ``box`` ignores beta.
    """

    p: np.ndarray
    beta: np.ndarray
    sharp: np.ndarray
    spectrum: np.ndarray
    box: np.ndarray


def bound_table(p_values, beta_values) -> BoundTable:
    p = np.atleast_1d(np.asarray(p_values, dtype=float))
    b = np.atleast_1d(np.asarray(beta_values, dtype=float))
    sharp = np.array([[sharp_alpha_bound(pp, bb) for bb in b] for pp in p])
    spec = np.array([[spectrum_alpha_bound(pp, bb) for bb in b] for pp in p])
    box = np.array([[box_alpha_bound(pp)] * b.size for pp in p])
    return BoundTable(p=p, beta=b, sharp=sharp, spectrum=spec, box=box)
