"""Empirical forward and inverse Hölder exponents of winding maps.

Pairs ``(y, x)`` are described by the anchor ``y`` and the argument
offset ``2*pi*m + angle`` of ``f(x)`` past ``f(y)``. Slopes of
``log |f(y) - f(x)|`` against ``log (y - x)`` are fitted along families
of pairs:

* ``critical``: antipodal partners (``m = 0``, ``angle = pi``) across the
  anchor grid;
* ``local``: partners at ``angle = pi * 10**-j`` with the anchor fixed;
* ``m=<m>``: same-argument partners ``m`` turns further in;
* ``prop=<c>``: same-argument partners ``c`` times the anchor's own turn
  count further in.

The forward exponent is the smallest slope among the critical and local
families and the inverse exponent the largest slope among the others
together with the local ones. A seeded scan of random pairs reports how far
any pair beats the critical envelope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .._fit import fit_line
from ..errors import DomainError, NumericError
from .maps import WindingMap

DEFAULT_M_GRID = (1, 3, 10, 30, 100, 300, 1000)
PROPORTIONAL_FACTORS = (0.5, 1.0, 2.0)
#: Angles ``pi * 10**-j`` used by the local families.
LOCAL_DECADES = tuple(range(1, 10))
DEFAULT_BUDGET = 10_000
MIN_POINTS = 8
MIN_DECADES = 4.0


@dataclass(frozen=True)
class HolderEstimate:
    """A fitted Hölder exponent.

    Attributes
    ----------
    exponent : float
        The certified slope.
    slope_residual : float
        Largest absolute residual of the winning regression.
    scale_range : tuple of float
        Smallest and largest anchor ``y``.
    pair_budget : int
        Number of random pairs scanned.
    envelope_ratio : float
        Largest Hölder quotient among the random pairs, relative to the
        envelope at the same anchor (critical pair for the forward map, the
        strongest family pair for the inverse).
    families : dict
        Fitted slope of every pair family.
    """

    exponent: float
    slope_residual: float
    scale_range: tuple[float, float]
    pair_budget: int
    envelope_ratio: float = math.nan
    families: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (self.exponent > 0 and self.slope_residual >= 0 and self.scale_range[0] < self.scale_range[1]):
            raise DomainError("inconsistent HolderEstimate")


def _check_grid(map_: WindingMap, y_grid):
    y = np.sort(np.asarray(map_.default_grid() if y_grid is None else y_grid, dtype=float))
    if np.unique(y).size < 2:
        raise DomainError("need at least two distinct scales")
    if np.any((y <= 0) | (y >= 1)):
        raise DomainError("anchors must lie in (0, 1)")
    if y.size < MIN_POINTS:
        raise DomainError(f"need at least {MIN_POINTS} anchors, got {y.size}")
    gap, image = map_.pair(y, 0.0, math.pi)
    if not (np.all(np.isfinite(gap) & (gap > 0)) and np.all(np.isfinite(image) & (image > 0))):
        raise NumericError("critical pairs underflow at these anchors; use coarser scales")
    span = math.log10(gap.max() / gap.min())
    if span < MIN_DECADES:
        raise DomainError(f"critical gaps span {span:.2f} decades; need {MIN_DECADES}")
    return y


def _fit(gap, image):
    lg = np.log10(gap)
    return fit_line(lg, np.log10(image))


def _local_slopes(map_, y):
    angles = math.pi * 10.0 ** -np.asarray(LOCAL_DECADES, dtype=float)
    yy = np.repeat(y, angles.size)
    aa = np.tile(angles, y.size)
    gap, image = map_.pair(yy, 0.0, aa)
    fits = [
        fit_line(np.log10(g), np.log10(i), drop=0.0)
        for g, i in zip(gap.reshape(y.size, -1), image.reshape(y.size, -1))
    ]
    return fits


def _random_pairs(map_, y, budget, rng, beyond_antipode_only=False):
    """Random anchors log-uniform over the grid span with mixed offsets."""
    lo, hi = math.log(y.min()), math.log(y.max())
    ys = np.exp(rng.uniform(lo, hi, budget))
    m = np.zeros(budget)
    angle = np.empty(budget)
    if beyond_antipode_only:
        near = np.zeros(budget, dtype=bool)
    else:
        near = rng.random(budget) < 0.5
    # near pairs sit between the antipode and the anchor
    angle[near] = math.pi * 10.0 ** rng.uniform(-9.0, 0.0, near.sum())
    far = ~near
    nf = int(far.sum())
    m[far] = np.floor(10.0 ** rng.uniform(0.0, 3.0, nf)) - 1.0
    angle[far] = rng.uniform(0.0, 2.0 * math.pi, nf)
    # with m = 0 the partner must lie past the antipode
    first = far & (m == 0)
    angle[first] = math.pi + rng.uniform(0.0, 1.0, int(first.sum())) * math.pi
    return ys, m, angle


def estimate_forward_exponent(
    map_: WindingMap,
    y_grid=None,
    *,
    pair_budget: int = DEFAULT_BUDGET,
    seed: int = 0,
) -> HolderEstimate:
    """Fit the forward Hölder exponent of ``map_``.

    Parameters
    ----------
    map_ : WindingMap
        Map to certify.
    y_grid : array_like, optional
        Anchors in ``(0, 1)``; at least 8 points whose critical gaps span
        at least 4 decades. Defaults to ``map_.default_grid()``.
    pair_budget : int
        Number of random pairs in the envelope scan.
    seed : int
        Seed of the random scan.
    """
    y = _check_grid(map_, y_grid)
    crit = _fit(*map_.pair(y, 0.0, math.pi))
    local = _local_slopes(map_, y)
    worst_local = min(local, key=lambda f: f.slope)
    families = {"critical": crit.slope, "local": worst_local.slope}
    win = crit if crit.slope <= worst_local.slope else worst_local
    alpha = win.slope

    ratio = math.nan
    if pair_budget > 0:
        rng = np.random.default_rng(seed)
        ys, m, angle = _random_pairs(map_, y, pair_budget, rng)
        gap, image = map_.pair(ys, m, angle)
        cgap, cimage = map_.pair(ys, 0.0, math.pi)
        q = np.log(image) - alpha * np.log(gap)
        qc = np.log(cimage) - alpha * np.log(cgap)
        ratio = float(np.exp(np.max(q - qc)))
    return HolderEstimate(
        exponent=alpha,
        slope_residual=win.residual,
        scale_range=(float(y[0]), float(y[-1])),
        pair_budget=int(pair_budget),
        envelope_ratio=ratio,
        families=families,
    )


def estimate_inverse_exponent(
    map_: WindingMap,
    y_grid=None,
    m_grid=None,
    *,
    pair_budget: int = DEFAULT_BUDGET,
    seed: int = 0,
) -> HolderEstimate:
    """Fit the inverse Hölder exponent ``beta`` of ``map_``.

    ``m_grid`` holds positive integers spanning at least two decades.
    """
    y = _check_grid(map_, y_grid)
    ms = np.asarray(DEFAULT_M_GRID if m_grid is None else m_grid, dtype=float)
    if ms.size == 0 or np.any(ms < 1) or np.any(ms != np.round(ms)):
        raise DomainError("m_grid must hold positive integers")
    if math.log10(ms.max() / ms.min()) < 2 - 1e-12:
        raise DomainError("m_grid must span at least two decades")

    fits = {}
    for m in ms:
        fits[f"m={int(m)}"] = _fit(*map_.pair(y, m, 0.0))
    turns = map_.turns(y)
    for c in PROPORTIONAL_FACTORS:
        mm = np.maximum(1.0, np.round(c * turns))
        fits[f"prop={c:g}"] = _fit(*map_.pair(y, mm, 0.0))
    fits["local"] = max(_local_slopes(map_, y), key=lambda f: f.slope)
    name = max(fits, key=lambda n: fits[n].slope)
    win = fits[name]
    beta = win.slope

    ratio = math.nan
    if pair_budget > 0:
        rng = np.random.default_rng(seed)
        ys, m, angle = _random_pairs(map_, y, pair_budget, rng)
        gap, image = map_.pair(ys, m, angle)
        q = beta * np.log(gap) - np.log(image)
        # envelope: the strongest family quotient at the same anchor
        env = np.full(ys.shape, -np.inf)
        for mm in list(ms) + [None]:
            if mm is None:
                mm = np.maximum(1.0, np.round(map_.turns(ys)))
            g, i = map_.pair(ys, mm, 0.0)
            env = np.maximum(env, beta * np.log(g) - np.log(i))
        ratio = float(np.exp(np.max(q - env)))
    return HolderEstimate(
        exponent=beta,
        slope_residual=win.residual,
        scale_range=(float(y[0]), float(y[-1])),
        pair_budget=int(pair_budget),
        envelope_ratio=ratio,
        families={k: f.slope for k, f in fits.items()},
    )


def critical_dominance(
    map_: WindingMap,
    alpha: float,
    n_pairs: int = 100_000,
    *,
    y_grid=None,
    seed: int = 0,
) -> float:
    """Largest ratio of the alpha-Hölder quotient of a random pair to the critical one.

    Only pairs whose partner lies past the antipode are drawn.
    """
    y = _check_grid(map_, y_grid)
    rng = np.random.default_rng(seed)
    ys, m, angle = _random_pairs(map_, y, n_pairs, rng, beyond_antipode_only=True)
    gap, image = map_.pair(ys, m, angle)
    cgap, cimage = map_.pair(ys, 0.0, math.pi)
    q = np.log(image) - alpha * np.log(gap)
    qc = np.log(cimage) - alpha * np.log(cgap)
    return float(np.exp(np.max(q - qc)))
