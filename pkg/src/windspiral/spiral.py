"""Winding functions, spirals and their full turns.

A winding function ``phi`` on ``[1, inf)`` defines the spiral
``{phi(x) exp(ix) : x > 1}``. The parameter ``x`` doubles as the
(unreduced) polar argument, so the k-th full turn is the parameter
interval ``(1 + 2*pi*(k-1), 1 + 2*pi*k]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, ResourceError
from .quadrature import DEFAULT_TOL, integrate

TWO_PI = 2.0 * math.pi

#: Largest number of points :func:`sample_turn` will return.
POINT_CAP = 50_000_000


@dataclass(frozen=True)
class WindingFunction:
    """A radius profile ``phi`` together with its derivative.

    Use the constructors :meth:`polynomial`, :meth:`log_perturbed` and
    :meth:`comparable` rather than building instances directly.

    ``monotone_from`` is the parameter beyond which ``phi`` is strictly
    decreasing. It is 1 except for the log-perturbed family, whose
    profile vanishes at ``x = 1`` and only decreases past ``exp(gamma/p)``.
    """

    kind: str
    p: float
    eval: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)
    deriv: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)
    gamma: float | None = None
    factor: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False, compare=False)
    bounds: tuple[float, float] | None = None
    lipschitz: float | None = None
    monotone_from: float = 1.0

    def __call__(self, x):
        return self.eval(np.asarray(x, dtype=float))

    @classmethod
    def polynomial(cls, p: float) -> "WindingFunction":
        """``phi(x) = x**-p``."""
        if not p > 0:
            raise DomainError(f"p must be positive, got {p}")
        return cls(
            kind="polynomial",
            p=float(p),
            eval=lambda x: np.exp(-p * np.log(x)),
            deriv=lambda x: -p * np.exp(-(p + 1.0) * np.log(x)),
        )

    @classmethod
    def log_perturbed(cls, p: float, gamma: float) -> "WindingFunction":
        """``phi(x) = x**-p * log(x)**gamma``."""
        if not (p > 0 and gamma > 0):
            raise DomainError("p and gamma must be positive")

        def ev(x):
            return np.exp(-p * np.log(x)) * np.log(x) ** gamma

        def dv(x):
            lx = np.log(x)
            return np.exp(-(p + 1.0) * lx) * lx ** (gamma - 1.0) * (gamma - p * lx)

        return cls(
            kind="log_perturbed",
            p=float(p),
            gamma=float(gamma),
            eval=ev,
            deriv=dv,
            monotone_from=math.exp(gamma / p),
        )

    @classmethod
    def comparable(
        cls,
        p: float,
        factor: Callable,
        factor_deriv: Callable,
        lipschitz: float,
        lower: float,
        upper: float,
        *,
        check_up_to: float = 1e15,
        n_check: int = 200_001,
    ) -> "WindingFunction":
        """``phi(x) = factor(x) * x**-p`` for a bounded Lipschitz ``factor``.

        The declared constants are verified by sampling ``factor`` on a
        geometric grid over ``[1, check_up_to]``; a ``DomainError`` is
        raised if the factor leaves ``[lower, upper]``, if a difference
        quotient between neighbouring samples exceeds ``lipschitz``, or
        if the resulting ``phi`` fails to decrease.
        """
        if not (p > 0 and 0 < lower <= upper < math.inf and lipschitz >= 0):
            raise DomainError("need p > 0, 0 < lower <= upper < inf and lipschitz >= 0")

        xs = np.unique(np.concatenate([np.geomspace(1.0, check_up_to, n_check), np.linspace(1.0, 100.0, 20_001)]))
        eps = np.asarray(factor(xs), dtype=float)
        if not np.all(np.isfinite(eps)) or eps.min() < lower or eps.max() > upper:
            raise DomainError(
                f"factor leaves the declared bounds [{lower}, {upper}] "
                f"(sampled range [{np.nanmin(eps):.6g}, {np.nanmax(eps):.6g}])"
            )
        quotient = np.abs(np.diff(eps)) / np.diff(xs)
        if quotient.max() > lipschitz * (1 + 1e-9):
            raise DomainError(f"factor is not {lipschitz}-Lipschitz (sampled quotient {quotient.max():.6g})")
        phi = eps * np.exp(-p * np.log(xs))
        if np.any(np.diff(phi) >= 0):
            raise DomainError("phi = factor * x**-p is not strictly decreasing")

        def ev(x):
            return factor(x) * np.exp(-p * np.log(x))

        def dv(x):
            return (factor_deriv(x) - p * factor(x) / x) * np.exp(-p * np.log(x))

        return cls(
            kind="comparable",
            p=float(p),
            eval=ev,
            deriv=dv,
            factor=factor,
            bounds=(float(lower), float(upper)),
            lipschitz=float(lipschitz),
        )

    def speed(self, x):
        """Polar arc-length density ``sqrt(phi**2 + phi'**2)``."""
        x = np.asarray(x, dtype=float)
        return np.hypot(self.eval(x), self.deriv(x))


def log_damped_example(p: float) -> WindingFunction:
    """``phi(x) = 3 / (5 x**p x**(-1/x) + x**(p/2) log x)``.

    A non-polynomial profile whose ratio to ``x**-p`` is Lipschitz and
    bounded away from 0 and infinity. The profile is only decreasing on
    all of ``[1, inf)`` for ``p >= 0.8``.
    """

    def factor(x):
        lx = np.log(x)
        return 3.0 / (5.0 * np.exp(-lx / x) + np.exp(-0.5 * p * lx) * lx)

    def factor_deriv(x):
        lx = np.log(x)
        a = np.exp(-lx / x)
        b = np.exp(-0.5 * p * lx)
        # d/dx of 5 x^(-1/x) + x^(-p/2) log x
        dden = 5.0 * a * (lx - 1.0) / x**2 + b * (1.0 - 0.5 * p * lx) / x
        den = 5.0 * a + b * lx
        return -3.0 * dden / den**2

    xs = np.geomspace(1.0, 1e15, 400_001)
    eps = factor(xs)
    dense = np.linspace(1.0, 60.0, 600_001)
    lip = float(np.max(np.abs(factor_deriv(np.concatenate([xs, dense])))))
    lo = float(min(eps.min(), factor(dense).min()))
    hi = float(max(eps.max(), factor(dense).max()))
    return WindingFunction.comparable(
        p, factor, factor_deriv, lipschitz=1.05 * lip, lower=0.95 * lo, upper=1.05 * hi
    )


@dataclass(frozen=True)
class SpiralPoint:
    x: float
    radius: float
    arg: float
    coords: tuple[float, float]


@dataclass(frozen=True)
class Turn:
    k: int
    x_lo: float
    x_hi: float


def turn_bounds(k: int) -> Turn:
    if k < 1:
        raise DomainError(f"turn index must be >= 1, got {k}")
    return Turn(k, 1.0 + TWO_PI * (k - 1), 1.0 + TWO_PI * k)


def spiral_point(phi: WindingFunction, x: float) -> SpiralPoint:
    if not x >= 1:
        raise DomainError(f"spiral parameter must be >= 1, got {x}")
    r = float(phi(x))
    return SpiralPoint(x=float(x), radius=r, arg=float(x), coords=(r * math.cos(x), r * math.sin(x)))


def turn_index(x: float) -> int:
    """Index ``k`` of the full turn containing parameter ``x > 1``."""
    if not x > 1:
        raise DomainError(f"turn_index needs x > 1, got {x}")
    k = max(1, math.ceil((x - 1.0) / TWO_PI))
    # the float guess can be off by one at turn boundaries
    while x > 1.0 + TWO_PI * k:
        k += 1
    while k > 1 and x <= 1.0 + TWO_PI * (k - 1):
        k -= 1
    return k


def turn_indices(x) -> np.ndarray:
    """Vectorised :func:`turn_index`."""
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 1)):
        raise DomainError("turn_indices needs every x > 1")
    k = np.maximum(1.0, np.ceil((x - 1.0) / TWO_PI))
    k += x > 1.0 + TWO_PI * k
    k -= (k > 1) & (x <= 1.0 + TWO_PI * (k - 1))
    return k.astype(np.int64)


def arclength(phi: WindingFunction, a, b, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Length of the spiral between parameters ``a`` and ``b`` (vectorised)."""
    return integrate(phi.speed, a, b, tol=tol)


def turn_arclength(phi: WindingFunction, k: int, tol: float = DEFAULT_TOL) -> float:
    turn = turn_bounds(k)
    return float(arclength(phi, turn.x_lo, turn.x_hi, tol=tol))


def turn_arclengths(phi: WindingFunction, ks, tol: float = DEFAULT_TOL, chunk: int = 200_000) -> np.ndarray:
    """Lengths of many turns; ``ks`` is an integer array."""
    ks = np.asarray(ks, dtype=np.int64)
    out = np.empty(ks.size)
    for start in range(0, ks.size, chunk):
        kk = ks[start : start + chunk].astype(float)
        out[start : start + chunk] = arclength(phi, 1.0 + TWO_PI * (kk - 1), 1.0 + TWO_PI * kk, tol=tol)
    return out


def invert_arclength(phi: WindingFunction, x_lo, x_hi, s, tol: float = 1e-10, max_iter: int = 200) -> np.ndarray:
    """Parameters ``x`` in ``[x_lo, x_hi]`` with ``arclength(x, x_hi) == s``.

    Safeguarded Newton iteration inside a shrinking bracket; whenever a
    Newton step leaves the bracket the step is replaced by bisection.
    """
    x_lo, x_hi, s = (np.array(v, dtype=float) for v in np.broadcast_arrays(x_lo, x_hi, s))
    shape = x_lo.shape
    x_lo, x_hi, s = x_lo.ravel(), x_hi.ravel(), s.ravel()
    lo, hi = x_lo.copy(), x_hi.copy()
    x = 0.5 * (lo + hi)
    active = np.ones(x.shape, dtype=bool)
    for _ in range(max_iter):
        if not active.any():
            break
        xa = x[active]
        resid = arclength(phi, xa, x_hi[active], tol=0.01 * tol) - s[active]
        # resid > 0 means x is too far out (too small)
        lo_a, hi_a = lo[active], hi[active]
        lo_a = np.where(resid > 0, xa, lo_a)
        hi_a = np.where(resid > 0, hi_a, xa)
        step = resid / phi.speed(xa)
        cand = xa + step
        inside = (cand > lo_a) & (cand < hi_a)
        cand = np.where(inside, cand, 0.5 * (lo_a + hi_a))
        done = (np.abs(cand - xa) <= tol * np.maximum(1.0, np.abs(xa))) | (hi_a - lo_a <= tol)
        lo[active], hi[active] = lo_a, hi_a
        x[active] = cand
        idx = np.flatnonzero(active)
        active[idx[done]] = False
    return x.reshape(shape)


def sample_turn(
    phi: WindingFunction, k: int, max_gap: float, point_cap: int = POINT_CAP
) -> list[SpiralPoint]:
    """Points along turn ``k`` equally spaced in arc length.

    Consecutive points are at planar distance at most ``max_gap``; the
    first and last points sit on the turn boundaries (outer one first).
    """
    if not max_gap > 0:
        raise DomainError("max_gap must be positive")
    turn = turn_bounds(k)
    length = turn_arclength(phi, k)
    n = max(1, math.ceil(length / max_gap))
    if n + 1 > point_cap:
        raise ResourceError(f"turn {k} at gap {max_gap} needs {n + 1} points (cap {point_cap})")
    xs = _arc_uniform(phi, turn, length, n)
    pts = _points(phi, xs)
    while True:
        gaps = np.hypot(*np.diff(pts, axis=0).T)
        bad = np.flatnonzero(gaps > max_gap)
        if bad.size == 0:
            break
        if xs.size + bad.size > point_cap:
            raise ResourceError(f"turn {k} at gap {max_gap} exceeds the point cap {point_cap}")
        xs = np.sort(np.concatenate([xs, 0.5 * (xs[bad] + xs[bad + 1])]))
        pts = _points(phi, xs)
    radii = phi(xs)
    return [
        SpiralPoint(x=float(x), radius=float(r), arg=float(x), coords=(float(c[0]), float(c[1])))
        for x, r, c in zip(xs, radii, pts)
    ]


def _points(phi, xs):
    r = phi(xs)
    return np.column_stack([r * np.cos(xs), r * np.sin(xs)])


def _arc_uniform(phi, turn, length, n):
    # cumulative length on a dense grid, then linear inversion
    m = max(64, 8 * n)
    grid = np.linspace(turn.x_lo, turn.x_hi, m + 1)
    seg = arclength(phi, grid[:-1], grid[1:])
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    targets = np.linspace(0.0, cum[-1], n + 1)
    xs = np.interp(targets, cum, grid)
    xs[0], xs[-1] = turn.x_lo, turn.x_hi
    return xs


def sample_curve(phi: WindingFunction, x_lo: float, x_hi: float, max_gap: float, point_cap: int = POINT_CAP) -> np.ndarray:
    """Planar samples of the spiral over ``[x_lo, x_hi]`` as an (n, 2) array.

    Uses a uniform parameter step per turn sized from the largest speed
    on that turn, so consecutive samples are within ``max_gap``. Meant
    for rasterisation; :func:`sample_turn` is the arc-uniform variant.
    """
    if not (max_gap > 0 and x_hi > x_lo >= 1):
        raise DomainError("need max_gap > 0 and 1 <= x_lo < x_hi")
    k_lo = turn_index(x_lo) if x_lo > 1 else 1
    k_hi = turn_index(x_hi)
    ks = np.arange(k_lo, k_hi + 1)
    starts = np.maximum(1.0 + TWO_PI * (ks - 1.0), x_lo)
    stops = np.minimum(1.0 + TWO_PI * ks, x_hi)
    probe = starts[:, None] + (stops - starts)[:, None] * np.linspace(0.0, 1.0, 33)[None, :]
    vmax = phi.speed(probe).max(axis=1) * 1.05
    counts = np.maximum(1, np.ceil(vmax * (stops - starts) / max_gap)).astype(np.int64)
    total = int(counts.sum()) + 1
    if total > point_cap:
        raise ResourceError(f"{total} samples needed, cap is {point_cap}")
    rep = np.repeat(np.arange(ks.size), counts)
    offs = np.arange(total - 1) - np.repeat(np.cumsum(counts) - counts, counts)
    xs = starts[rep] + (stops - starts)[rep] * offs / counts[rep]
    xs = np.append(xs, x_hi)
    return _points(phi, xs)
