"""Covering numbers, box dimension and Assouad spectrum of polynomial spirals.

Two independent routes to the covering number ``N_r``:

* an *analytic* count built from the turn decomposition: the turns that are
  still ``r``-separated are covered one arc at a time, the tightly wound
  core is covered as a filled disk;
* a brute-force *grid* count of occupied mesh-``r`` cells over a dense
  sampling of the (truncated) curve.

Dimension estimates are least-squares slopes over a geometric scale grid
and always carry the closed-form value they are meant to reproduce.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._fit import fit_line, geometric_grid
from .errors import DomainError, PreconditionError, ResourceError
from .spiral import TWO_PI, WindingFunction, sample_curve, turn_arclengths

#: Grid oracle sampling step as a fraction of the mesh.
GRID_GAP_FRACTION = 0.1
GRID_POINT_CAP = 50_000_000
#: The grid method keeps turns up to this multiple of k(r_min).
GRID_TURN_FACTOR = 4
#: Analytic counts refuse to sum more turns than this.
ANALYTIC_TERM_CAP = 500_000_000
_COUNT_CAP = 2**62
_CHUNK = 2_000_000


def _threads() -> int:
    env = os.environ.get("WINDSPIRAL_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


@dataclass(frozen=True)
class CoverRecord:
    r: float
    count: int
    method: str
    theta: float | None = None

    def __post_init__(self):
        if self.count < 1:
            raise DomainError("a cover needs at least one set")
        if self.method not in ("analytic", "grid"):
            raise DomainError(f"unknown method {self.method!r}")
        if self.theta is not None and not self.r**self.theta > self.r:
            raise DomainError("window radius r**theta must exceed r")


@dataclass(frozen=True)
class DimensionEstimate:
    value: float
    scale_range: tuple[float, float]
    residual: float
    closed_form: float
    records: tuple[CoverRecord, ...] = ()


# ---------------------------------------------------------------- closed forms


def box_dim_closed(p: float) -> float:
    return max(2.0 / (1.0 + p), 1.0)


def phase_transition(p: float) -> float:
    return p / (1.0 + p)


def assouad_spectrum_closed(p: float, theta: float) -> float:
    """Assouad spectrum of the polynomial spiral at window exponent ``theta``."""
    if not 0 < theta < 1:
        raise DomainError(f"theta must lie in (0, 1), got {theta}")
    if p < 1:
        return min(2.0 / ((1.0 + p) * (1.0 - theta)), 2.0)
    return min(1.0 + theta / (p * (1.0 - theta)), 2.0)


def spectrum_bounds(p: float, theta: float) -> tuple[float, float]:
    """General lower/upper bounds on the spectrum from the box dimension."""
    box = box_dim_closed(p)
    return box, min(box / (1.0 - theta), 2.0)


def trivial_dims(p: float) -> tuple[float, float, float, float]:
    """(Hausdorff, packing, Assouad, quasi-Assouad) dimensions; independent of ``p``."""
    return 1.0, 1.0, 2.0, 2.0


# ---------------------------------------------------------------- turn counters


def _critical_index(bound: float, exponent: float) -> int:
    # unique k >= 1 with k**-exponent <= bound < (k-1)**-exponent
    guess = bound ** (-1.0 / exponent)
    if guess > 2.0**52:
        raise ResourceError("turn index exceeds exact float range; scale too fine")
    k = max(1, math.ceil(guess))
    while float(k) ** -exponent > bound:
        k += 1
    while k > 1 and not bound < float(k - 1) ** -exponent:
        k -= 1
    return k


def k_of_r(p: float, r: float) -> int:
    """Index of the first turn wound tighter than ``r``."""
    if not 0 < r < 1:
        raise DomainError(f"r must lie in (0, 1), got {r}")
    return _critical_index(r, p + 1.0)


def l_of_r(p: float, r: float, theta: float) -> int:
    """Index of the first turn inside the window ``B(0, r**theta)``."""
    if not 0 < r < 1 or not 0 < theta < 1:
        raise DomainError("need r and theta in (0, 1)")
    return _critical_index(r**theta, p)


def _ceil_sum(p: float, r: float, k_lo: int, k_hi: int) -> int:
    """Sum of ceil(k**-p / r) for k_lo <= k <= k_hi."""
    if k_hi - k_lo + 1 > ANALYTIC_TERM_CAP:
        raise ResourceError(f"analytic count would sum {k_hi - k_lo + 1} turns")
    total = 0
    for start in range(k_lo, k_hi + 1, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, k_hi + 1), dtype=float)
        total += int(np.ceil(np.power(k, -p) / r).astype(np.int64).sum())
    return total


def _disk_term(radius: float, r: float) -> int:
    v = (radius / r) ** 2
    if v >= _COUNT_CAP:
        raise ResourceError("cover count overflows the integer width")
    return math.ceil(v)


def analytic_cover_count(p: float, r: float) -> CoverRecord:
    """``ceil((k^-p/r)^2) + sum_{k<=k(r)} ceil(k^-p/r)`` with ``k = k(r)``."""
    k = k_of_r(p, r)
    count = _disk_term(float(k) ** -p, r) + _ceil_sum(p, r, 1, k)
    if count >= _COUNT_CAP:
        raise ResourceError("cover count overflows the integer width")
    return CoverRecord(r=r, count=count, method="analytic")


def analytic_local_cover_count(p: float, r: float, theta: float) -> CoverRecord:
    """Cover count of ``B(0, r**theta)`` below the phase transition.

    The window holds the turns ``l(r) .. L(r)`` that are still separated
    at scale ``r`` plus the core disk ``B(0, L(r)**-p)``.
    """
    if theta >= phase_transition(p):
        raise DomainError(
            f"theta={theta} is past the phase transition {phase_transition(p):.6g}; "
            "use analytic_window_count (full-window formula)"
        )
    big, small = k_of_r(p, r), l_of_r(p, r, theta)
    if big <= small:
        raise DomainError(f"r={r} is too coarse: L(r)={big} <= l(r)={small}")
    count = _disk_term(float(big) ** -p, r) + _ceil_sum(p, r, small, big)
    return CoverRecord(r=r, count=count, method="analytic", theta=theta)


def analytic_window_count(p: float, r: float, theta: float) -> CoverRecord:
    """Local count at the spiral centre for any ``theta``.

    Falls back to the full-window count ``ceil((r**theta / r)**2)`` when
    the window lies entirely inside the tightly wound core.
    """
    try:
        return analytic_local_cover_count(p, r, theta)
    except DomainError:
        return CoverRecord(r=r, count=_disk_term(r**theta, r), method="analytic", theta=theta)


# ---------------------------------------------------------------- grid oracle


def _cell_keys(points: np.ndarray, r: float) -> np.ndarray:
    ij = np.floor(points / r).astype(np.int64)
    return np.unique(ij[:, 0] * (1 << 32) + ij[:, 1])


def _check_gap(points: np.ndarray, r: float) -> None:
    if len(points) > 1:
        gap = float(np.max(np.hypot(*np.diff(points, axis=0).T)))
        if gap > GRID_GAP_FRACTION * r * (1 + 1e-9):
            raise PreconditionError(f"sample gap {gap:.3g} exceeds r/10 = {GRID_GAP_FRACTION * r:.3g}")


def _window_mask(points, window):
    center, radius = window
    if radius < 0:
        raise PreconditionError("window radius must be non-negative")
    return np.hypot(points[:, 0] - center[0], points[:, 1] - center[1]) <= radius


def grid_cover_count(points, r: float, window=None) -> CoverRecord:
    """Number of mesh-``r`` grid cells met by an ordered point sample.

    ``points`` is an (n, 2) array sampled along a curve with consecutive
    gaps at most ``r/10``; ``window`` is an optional ``(center, radius)``
    restricting the count to one ball.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    _check_gap(pts, r)
    if window is not None:
        if window[1] < r:
            raise PreconditionError("window radius must be at least r")
        pts = pts[_window_mask(pts, window)]
    keys = _cell_keys(pts, r)
    return CoverRecord(r=r, count=max(1, keys.size), method="grid")


def _disk_cell_keys(radius: float, r: float) -> np.ndarray:
    """Keys of all mesh-``r`` cells meeting the closed disk ``B(0, radius)``."""
    if radius <= 0:
        return np.empty(0, dtype=np.int64)
    n = math.floor(radius / r) + 1
    cols = np.arange(-n, n)
    near = np.where(cols >= 0, cols * r, (cols + 1) * r)
    near = np.where((cols * r <= 0) & ((cols + 1) * r >= 0), 0.0, np.abs(near))
    ok = near <= radius
    cols, near = cols[ok], near[ok]
    half = np.sqrt(radius**2 - near**2)
    lo = np.floor(-half / r).astype(np.int64)
    hi = np.floor(half / r).astype(np.int64)
    counts = hi - lo + 1
    col = np.repeat(cols, counts)
    row = np.repeat(lo, counts) + (np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts))
    return col.astype(np.int64) * (1 << 32) + row


def _inverse_radius(phi: WindingFunction, radius: float) -> float:
    """Smallest parameter with ``phi(x) <= radius``."""
    lo = phi.monotone_from
    if phi(lo) <= radius:
        return lo
    hi = lo * 2.0
    while phi(hi) > radius:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if phi(mid) > radius:
            lo = mid
        else:
            hi = mid
    return hi


def spiral_grid_count(
    phi: WindingFunction,
    r: float,
    x_max: float,
    window_radius: float | None = None,
    point_cap: int = GRID_POINT_CAP,
) -> CoverRecord:
    """Grid cover count of the spiral truncated at parameter ``x_max``.

    The discarded core ``B(0, phi(x_max))`` is counted as a filled disk.
    With ``window_radius`` the count is restricted to ``B(0, window_radius)``.
    """
    gap = GRID_GAP_FRACTION * r
    x_lo = 1.0 if window_radius is None else _inverse_radius(phi, window_radius)
    core = float(phi(x_max))
    if window_radius is not None:
        core = min(core, window_radius)
    keys = [_disk_cell_keys(core, r)]
    budget = point_cap
    if x_lo < x_max:
        # blocks of turns small enough to keep memory bounded
        k0 = max(1, math.ceil((x_lo - 1.0) / TWO_PI))
        k1 = math.ceil((x_max - 1.0) / TWO_PI)
        edges = [x_lo]
        k = k0
        while edges[-1] < x_max:
            est = float(phi.speed(max(edges[-1], 1.0))) * TWO_PI / gap
            step = max(1, int(_CHUNK / max(est, 1.0)))
            k = min(k + step, k1)
            edges.append(min(1.0 + TWO_PI * k, x_max))
        for a, b in zip(edges[:-1], edges[1:]):
            if b <= a:
                continue
            pts = sample_curve(phi, a, b, gap, point_cap=budget)
            budget -= len(pts)
            if window_radius is not None:
                pts = pts[np.hypot(pts[:, 0], pts[:, 1]) <= window_radius]
            keys.append(_cell_keys(pts, r))
    cells = np.unique(np.concatenate(keys))
    theta = None
    if window_radius is not None:
        theta = math.log(window_radius) / math.log(r)
    return CoverRecord(r=r, count=max(1, cells.size), method="grid", theta=theta)


def grid_truncation(p: float, r_min: float) -> float:
    """Parameter cut-off ``1 + 2 pi * 4 k(r_min)`` used by the grid method."""
    return 1.0 + TWO_PI * GRID_TURN_FACTOR * k_of_r(p, r_min)


# ---------------------------------------------------------------- estimators


def _map(fn, items):
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _check_span(r_grid, method):
    r = np.asarray(r_grid, dtype=float)
    if r.size < 2 or np.any((r <= 0) | (r >= 1)):
        raise DomainError("scales must lie in (0, 1)")
    # brute-force grids are only feasible at coarse scales
    need = 2 if method == "grid" else 4
    if np.log10(r.max() / r.min()) < need - 1e-9:
        raise DomainError(f"scale grid must span at least {need} decades for method {method!r}")
    return np.sort(r)


def default_box_grid(p: float, per_decade: int = 8) -> np.ndarray:
    """Scales for box-dimension fits; deeper near ``p = 1`` (log corrections)."""
    r_min = 1e-12 if abs(p - 1.0) <= 0.25 else 1e-10
    return geometric_grid(r_min, 1e-2, per_decade)


def default_spectrum_grid(p: float, theta: float, per_decade: int = 8) -> np.ndarray:
    """Scales for spectrum fits at window exponent ``theta``.

    Below the phase transition the finest scale is limited by the number
    of turns summed (``k(r) <= 10**7``). Past it the count is a filled
    disk and the grid is chosen so that the window-to-scale ratio
    ``r**(theta-1)`` runs from 10 to ``10**8``.
    """
    if theta < phase_transition(p):
        r_min = max(10.0 ** (-7.0 * (p + 1.0)), 1e-16)
        return geometric_grid(r_min, 1e-2, per_decade)
    lo, hi = -8.0 / (1.0 - theta), -1.0 / (1.0 - theta)
    n = int(round((hi - lo) * per_decade)) + 1
    return np.logspace(lo, hi, n)


def estimate_box_dim(p: float, r_grid=None, method: str = "analytic") -> DimensionEstimate:
    """Slope of ``log N_r`` against ``-log r``."""
    r = _check_span(default_box_grid(p) if r_grid is None else r_grid, method)
    if method == "analytic":
        records = _map(lambda s: analytic_cover_count(p, s), list(r))
    elif method == "grid":
        phi = WindingFunction.polynomial(p)
        x_max = grid_truncation(p, r.min())
        records = _map(lambda s: spiral_grid_count(phi, s, x_max), list(r))
    else:
        raise DomainError(f"unknown method {method!r}")
    counts = np.array([rec.count for rec in records], dtype=float)
    fit = fit_line(-np.log(r), np.log(counts), decade=np.log10(r))
    return DimensionEstimate(
        value=fit.slope,
        scale_range=(float(r.min()), float(r.max())),
        residual=fit.residual,
        closed_form=box_dim_closed(p),
        records=tuple(records),
    )


def estimate_spectrum(p: float, theta: float, r_grid=None, method: str = "analytic") -> DimensionEstimate:
    """Slope of ``log N_r(B(0, r^theta))`` against ``log(r^theta / r)``.

    The window is centred at the spiral's limit point, the extremal centre.
    """
    if not 0 < theta < 1:
        raise DomainError(f"theta must lie in (0, 1), got {theta}")
    r = _check_span(default_spectrum_grid(p, theta) if r_grid is None else r_grid, method)
    if method == "analytic":
        records = _map(lambda s: analytic_window_count(p, s, theta), list(r))
    elif method == "grid":
        phi = WindingFunction.polynomial(p)
        x_max = grid_truncation(p, r.min())
        records = _map(lambda s: spiral_grid_count(phi, s, x_max, window_radius=s**theta), list(r))
    else:
        raise DomainError(f"unknown method {method!r}")
    counts = np.array([rec.count for rec in records], dtype=float)
    fit = fit_line((1.0 - theta) * -np.log(r), np.log(counts), decade=np.log10(r))
    return DimensionEstimate(
        value=fit.slope,
        scale_range=(float(r.min()), float(r.max())),
        residual=fit.residual,
        closed_form=assouad_spectrum_closed(p, theta),
        records=tuple(records),
    )


# ---------------------------------------------------------------- length


@dataclass(frozen=True)
class LengthReport:
    K: int
    partial_sum: float
    verdict: str
    growth_ratio: float
    growth_model: str
    last_increment: float

    def __iter__(self):
        return iter((self.partial_sum, self.verdict))


def length_classification(p: float, K: int) -> LengthReport:
    """Partial length of the first ``K`` turns and the finite/infinite verdict.

    The growth ratio divides the partial sum by ``log K`` (p = 1), by
    ``K**(1-p)`` (p < 1), or is the partial sum itself (p > 1).
    """
    if K < 2:
        raise DomainError("K must be at least 2")
    lengths = turn_arclengths(WindingFunction.polynomial(p), np.arange(1, K + 1))
    total = float(np.sum(lengths))
    if p > 1:
        ratio, model = total, "partial_sum"
    elif p == 1:
        ratio, model = total / math.log(K), "log K"
    else:
        ratio, model = total / K ** (1.0 - p), "K^(1-p)"
    return LengthReport(
        K=int(K),
        partial_sum=total,
        verdict="finite" if p > 1 else "infinite",
        growth_ratio=ratio,
        growth_model=model,
        last_increment=float(lengths[-1]),
    )


def partial_lengths(p: float, Ks) -> np.ndarray:
    """Cumulative turn lengths at each checkpoint in ``Ks``."""
    Ks = np.asarray(Ks, dtype=np.int64)
    lengths = turn_arclengths(WindingFunction.polynomial(p), np.arange(1, int(Ks.max()) + 1))
    return np.cumsum(lengths)[Ks - 1]
