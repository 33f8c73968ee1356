"""Winding homeomorphisms from ``(0, 1)`` onto the polynomial spiral.

Two families are provided:

* ``g_t(x) = x**(t p) exp(i x**-t)``, which sends ``x`` to the spiral
  point with parameter ``x**-t``;
* the piecewise construction, which cuts ``(0, 1)`` into intervals
  ``J^k`` of length proportional to ``k**(-p/alpha)``, bends each one by
  ``u -> 1 - (1 - u)**alpha`` and lays it along turn ``k`` at constant
  speed.

Both expose :meth:`WindingMap.pair`, which evaluates a pair of points
``y`` and ``x < y`` whose images differ in argument by ``2*pi*m + angle``.
The domain gap ``y - x`` and image distance are returned without forming
``x`` explicitly, so neither suffers cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .._fit import geometric_grid
from ..errors import DomainError
from ..spiral import TWO_PI, WindingFunction, arclength, invert_arclength, turn_arclengths, turn_indices
from .bounds import check_admissible, g_t_sharp_exponents, winding_conjugate

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(21)


def critical_antipodal(t: float, y):
    """Largest ``x < y`` whose ``g_t`` image is antipodal to that of ``y``."""
    y = np.asarray(y, dtype=float)
    return y - stable_gap(t, y, math.pi)


def same_argument_point(t: float, y, m):
    """The ``m``-th largest ``x < y`` whose ``g_t`` image has the argument of ``g_t(y)``."""
    if np.any(np.asarray(m) < 1):
        raise DomainError("m must be a positive integer")
    y = np.asarray(y, dtype=float)
    return y - stable_gap(t, y, TWO_PI * np.asarray(m, dtype=float))


def stable_gap(t: float, y, delta):
    """``y - (y**-t + delta)**(-1/t)`` without cancellation.

    Written as ``-y * expm1(-log1p(delta y**t) / t)``, which stays accurate
    to a few ulps for every ``y`` in ``(0, 1)`` and ``delta > 0``.
    """
    y = np.asarray(y, dtype=float)
    delta = np.asarray(delta, dtype=float)
    if not t > 0:
        raise DomainError("t must be positive")
    if np.any((y <= 0) | (y >= 1)) or np.any(delta <= 0):
        raise DomainError("need y in (0, 1) and delta > 0")
    z = delta * np.exp(t * np.log(y))
    return -y * np.expm1(-np.log1p(z) / t)


def _radial_drop(r0, theta0, d, p):
    """``r0 - r1`` for radii ``r = theta**-p`` at ``theta0`` and ``theta0 + d``."""
    return -r0 * np.expm1(-p * np.log1p(d / theta0))


def _chord(r0, r1, dr, angle):
    return np.sqrt(dr**2 + 4.0 * r0 * r1 * np.sin(0.5 * angle) ** 2)


def _offset_arclength(phi: WindingFunction, theta0, d):
    """Spiral length between ``theta0`` and ``theta0 + d`` for ``d`` below a turn."""
    s = 0.5 * d[:, None] * (1.0 + _GL_NODES[None, :])
    return 0.5 * d * (phi.speed(theta0[:, None] + s) @ _GL_WEIGHTS)


@dataclass(frozen=True)
class WindingMap:
    """Common interface of the winding homeomorphisms.

    Subclasses implement :meth:`forward`, :meth:`argument_of`,
    :meth:`pair` and :meth:`default_grid`.
    """

    p: float

    kind = "abstract"

    @property
    def target(self) -> tuple[float, float]:
        """The sharp (alpha, beta) pair this map realizes."""
        raise NotImplementedError

    def forward(self, x) -> np.ndarray:
        """Image points as complex numbers."""
        raise NotImplementedError

    def argument_of(self, x) -> np.ndarray:
        raise NotImplementedError

    def pair(self, y, m, angle) -> tuple[np.ndarray, np.ndarray]:
        """``(y - x, |f(y) - f(x)|)`` where ``arg f(x) = arg f(y) + 2*pi*m + angle``."""
        raise NotImplementedError

    def turns(self, y) -> np.ndarray:
        """Turn count ``(arg f(y) - 1) / 2 pi`` as a float."""
        return (self.argument_of(y) - 1.0) / TWO_PI

    def default_grid(self) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class GtMap(WindingMap):
    """``g_t(x) = x**(t p) exp(i x**-t)``."""

    t: float = 1.0
    kind = "g_t"

    def __post_init__(self):
        if not (self.p > 0 and self.t > 0):
            raise DomainError("p and t must be positive")

    @property
    def target(self) -> tuple[float, float]:
        return g_t_sharp_exponents(self.p, self.t)

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if np.any((x <= 0) | (x >= 1)):
            raise DomainError("g_t is defined on (0, 1)")
        return x

    def argument_of(self, x):
        x = self._check(x)
        return np.exp(-self.t * np.log(x))

    def radius(self, x):
        x = self._check(x)
        return np.exp(self.t * self.p * np.log(x))

    def forward(self, x):
        return self.radius(x) * np.exp(1j * self.argument_of(x))

    def pair(self, y, m, angle):
        y, m, angle = (np.asarray(v, dtype=float) for v in np.broadcast_arrays(y, m, angle))
        y = self._check(y)
        d = TWO_PI * m + angle
        gap = stable_gap(self.t, y, d)
        r0 = self.radius(y)
        theta0 = self.argument_of(y)
        dr = _radial_drop(r0, theta0, d, self.p)
        return gap, _chord(r0, r0 - dr, dr, angle)

    def default_grid(self) -> np.ndarray:
        return geometric_grid(1e-7, 1e-1, 8)


# Euler-Maclaurin tails take over from direct summation past this index.
DIRECT_TERMS = 10_000
#: Turn indices beyond this are outside the represented spiral.
MAX_TURN = 10**15


def _em_tail(n, s):
    """``sum_{j >= n} j**-s`` by Euler-Maclaurin (accurate to ~1e-20 relative for n >= 1e4)."""
    n = np.asarray(n, dtype=float)
    lead = np.exp((1.0 - s) * np.log(n)) / (s - 1.0)
    ns = np.exp(-s * np.log(n))
    corr = 0.5 + s / (12.0 * n) - s * (s + 1) * (s + 2) / (720.0 * n**3)
    corr += s * (s + 1) * (s + 2) * (s + 3) * (s + 4) / (30240.0 * n**5)
    return lead + ns * corr


@dataclass(frozen=True)
class PiecewiseMap(WindingMap):
    """Piecewise homeomorphism with sharp exponents ``(alpha, p alpha / (p - alpha))``.

    ``J^k = [T(k+1), T(k))`` with ``T(k) = sum_{j >= k} j**-s / Z``,
    ``s = p / alpha`` and ``Z`` chosen so ``T(1) = 1``. A point at
    relative position ``u`` in ``J^k`` (``u = 0`` at the inner end) goes
    to the point of turn ``k`` whose arc distance from the outer end is
    ``(1 - u)**alpha`` times the turn length.
    """

    alpha: float = 0.5
    kind = "piecewise"
    _tail: np.ndarray = field(init=False, repr=False, compare=False)
    _phi: WindingFunction = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        check_admissible(self.p, self.alpha)
        s = self.s
        k = np.arange(1, DIRECT_TERMS + 1, dtype=float)
        terms = np.exp(-s * np.log(k))
        tail = np.empty(DIRECT_TERMS + 2)
        tail[DIRECT_TERMS + 1] = _em_tail(DIRECT_TERMS + 1, s)
        tail[1 : DIRECT_TERMS + 1] = np.cumsum(terms[::-1])[::-1] + tail[DIRECT_TERMS + 1]
        tail[0] = np.nan
        object.__setattr__(self, "_tail", tail)
        object.__setattr__(self, "_phi", WindingFunction.polynomial(self.p))

    @property
    def s(self) -> float:
        return self.p / self.alpha

    @property
    def target(self) -> tuple[float, float]:
        return self.alpha, winding_conjugate(self.p, self.alpha)

    @property
    def normalizer(self) -> float:
        """``Z = sum_{k >= 1} k**-s``."""
        return float(self._tail[1])

    # interval bookkeeping -------------------------------------------------

    def _raw_tail(self, k):
        k = np.asarray(k, dtype=np.int64)
        small = k <= DIRECT_TERMS + 1
        out = np.empty(k.shape)
        out[small] = self._tail[k[small]]
        out[~small] = _em_tail(k[~small], self.s)
        return out

    def tail(self, k):
        """``T(k) = sup J^k``."""
        return self._raw_tail(k) / self.normalizer

    def interval_length(self, k):
        """``|J^k| = k**-s / Z``."""
        k = np.asarray(k, dtype=float)
        return np.exp(-self.s * np.log(k)) / self.normalizer

    def block_length(self, a, b):
        """``sum_{j=a}^{b} |J^j|`` (zero when ``b < a``)."""
        a, b = (np.asarray(v, dtype=np.int64) for v in np.broadcast_arrays(a, b))
        out = np.zeros(a.shape)
        short = (b >= a) & (b - a < 1000)
        if short.any():
            aa, bb = a[short], b[short]
            acc = np.zeros(aa.shape)
            for off in range(int((bb - aa).max()) + 1):
                j = aa + off
                acc += np.where(j <= bb, self.interval_length(np.maximum(j, 1)), 0.0)
            out[short] = acc
        long_ = b - a >= 1000
        if long_.any():
            out[long_] = self.tail(a[long_]) - self.tail(b[long_] + 1)
        return out

    def locate(self, y):
        """Turn index ``k`` and relative position ``u`` of ``y`` in ``J^k``."""
        shape = np.shape(y)
        y = np.atleast_1d(np.asarray(y, dtype=float)).ravel()
        if np.any((y <= 0) | (y >= 1)):
            raise DomainError("the map is defined on (0, 1)")
        tz = self._tail[1:] / self.normalizer  # T(1..DIRECT_TERMS+1), decreasing
        k = np.searchsorted(-tz, -y, side="right").astype(np.int64)  # T(k) > y >= T(k+1)
        far = y < tz[-1]
        if far.any():
            s = self.s
            guess = np.exp(-np.log((s - 1.0) * y[far] * self.normalizer) / (s - 1.0))
            if np.any(guess > MAX_TURN):
                raise DomainError("y lies beyond the represented turns")
            kf = np.maximum(np.floor(guess).astype(np.int64), DIRECT_TERMS)
            yf = y[far]
            for _ in range(64):
                up = self.tail(kf + 1) > yf
                down = self.tail(kf) <= yf
                if not (up.any() or down.any()):
                    break
                kf = kf + up - down
            k[far] = kf
        u = np.clip((y - self.tail(k + 1)) / self.interval_length(k), 0.0, 1.0)
        if shape == ():
            return k[0], u[0]
        return k.reshape(shape), u.reshape(shape)

    # geometry --------------------------------------------------------------

    def turn_lengths(self, k):
        k = np.asarray(k, dtype=np.int64)
        uk, inv = np.unique(k, return_inverse=True)
        return turn_arclengths(self._phi, uk)[inv].reshape(k.shape)

    def argument_of(self, x):
        k, u = self.locate(x)
        lam = self.turn_lengths(k)
        # arc distance from the inner end of the turn
        with np.errstate(divide="ignore"):
            from_inner = -lam * np.expm1(self.alpha * np.log1p(-u))
        hi = 1.0 + TWO_PI * k
        return invert_arclength(self._phi, hi - TWO_PI, hi, from_inner)

    def forward(self, x):
        theta = self.argument_of(x)
        return self._phi(theta) * np.exp(1j * theta)

    def preimage(self, theta):
        """``f^{-1}`` at spiral parameter ``theta`` (exact up to quadrature)."""
        theta = np.asarray(theta, dtype=float)
        k = turn_indices(theta)
        lam = self.turn_lengths(k)
        a = arclength(self._phi, 1.0 + TWO_PI * (k - 1), theta)
        w = np.exp(np.log(np.maximum(a, 0.0) / lam) / self.alpha)
        return self.tail(k + 1) + (1.0 - w) * self.interval_length(k)

    def pair(self, y, m, angle):
        y, m, angle = (np.asarray(v, dtype=float) for v in np.broadcast_arrays(y, m, angle))
        shape = y.shape
        y, m, angle = y.ravel(), m.ravel(), angle.ravel()
        theta0 = self.argument_of(y)
        d = TWO_PI * m + angle
        phi, alpha = self._phi, self.alpha

        k0 = turn_indices(theta0)
        lam0 = self.turn_lengths(k0)
        a0 = arclength(phi, 1.0 + TWO_PI * (k0 - 1), theta0)
        w0 = np.exp(np.log(np.maximum(a0, 1e-300) / lam0) / alpha)
        theta1 = theta0 + d
        k1 = np.maximum(turn_indices(theta1), k0)

        gap = np.empty(y.shape)
        same = k1 == k0
        if same.any():
            da = _offset_arclength(phi, theta0[same], d[same])
            a, lam = a0[same], lam0[same]
            with np.errstate(divide="ignore", invalid="ignore"):
                grow = w0[same] * np.expm1(np.log1p(da / a) / alpha)
            fresh = np.exp(np.log(da / lam) / alpha)
            gap[same] = np.where(a > 0, grow, fresh) * self.interval_length(k0[same])
        diff = ~same
        if diff.any():
            kk0, kk1 = k0[diff], k1[diff]
            lam1 = self.turn_lengths(kk1)
            a1 = arclength(phi, 1.0 + TWO_PI * (kk1 - 1), theta1[diff])
            w1 = np.exp(np.log(np.maximum(a1, 1e-300) / lam1) / alpha)
            gap[diff] = (
                (1.0 - w0[diff]) * self.interval_length(kk0)
                + self.block_length(kk0 + 1, kk1 - 1)
                + w1 * self.interval_length(kk1)
            )
        r0 = phi(theta0)
        dr = _radial_drop(r0, theta0, d, self.p)
        image = _chord(r0, r0 - dr, dr, angle)
        return gap.reshape(shape), image.reshape(shape)

    def turns(self, y):
        k, _ = self.locate(y)
        return k.astype(float)

    def default_grid(self, k_min: float = 10.0, k_max: float = 1e6, per_decade: int = 8) -> np.ndarray:
        """Midpoints of ``J^k`` for geometrically spaced turns ``k``.

        Midpoints keep the anchors away from the turn boundaries, where
        the map changes regime.
        """
        ks = np.unique(np.round(geometric_grid(k_min, k_max, per_decade)).astype(np.int64))
        return self.tail(ks + 1) + 0.5 * self.interval_length(ks)


def g_t_from_alpha(p: float, alpha: float) -> GtMap:
    """The ``g_t`` with ``t = alpha / (p - alpha)``."""
    check_admissible(p, alpha)
    return GtMap(p=float(p), t=alpha / (p - alpha))


def build_piecewise_map(p: float, alpha: float) -> PiecewiseMap:
    return PiecewiseMap(p=float(p), alpha=float(alpha))
