from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class LineFit:
    slope: float
    intercept: float
    residual: float  # max |residual| over the fitted points
    used: int


def fit_line(u, v, decade=None, drop: float = 1.0, min_points: int = 3) -> LineFit:
    """Ordinary least squares of ``v`` on ``u``.

    ``decade`` holds the log10 scale of each point (defaults to ``u``).
    The finest and coarsest ``drop`` decades are discarded first, unless
    that would leave fewer than ``min_points`` points.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    d = u if decade is None else np.asarray(decade, dtype=float)
    ok = np.isfinite(u) & np.isfinite(v) & np.isfinite(d)
    u, v, d = u[ok], v[ok], d[ok]
    if np.unique(u).size < 2:
        raise DomainError("need at least two distinct scales to fit a slope")
    keep = (d >= d.min() + drop - 1e-9) & (d <= d.max() - drop + 1e-9)
    if keep.sum() >= min_points and np.unique(u[keep]).size >= 2:
        u, v = u[keep], v[keep]
    slope, intercept = np.polyfit(u, v, 1)
    resid = v - (slope * u + intercept)
    return LineFit(float(slope), float(intercept), float(np.max(np.abs(resid))), int(u.size))


def geometric_grid(lo: float, hi: float, per_decade: int) -> np.ndarray:
    """Geometric grid from ``lo`` to ``hi`` with ``per_decade`` points per decade."""
    if not 0 < lo < hi:
        raise DomainError("need 0 < lo < hi")
    n = int(round(np.log10(hi / lo) * per_decade)) + 1
    return np.geomspace(lo, hi, max(n, 2))
