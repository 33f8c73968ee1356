"""Bi-Lipschitz equivalence between ``S_p`` and comparable spirals.

For a winding function ``phi(x) = eps(x) x**-p`` with ``eps`` Lipschitz
and bounded away from 0 and infinity, the map
``x**-p exp(ix) -> phi(x) exp(ix)`` is bi-Lipschitz. This module applies
that map, measures its distortion on stratified random pairs, and evaluates
the diagnostic that separates ``S_p`` from ``x**-p (log x)**gamma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as gamma_fn
from scipy.special import gammaincc

from .errors import DomainError, PreconditionError
from .holder.bounds import winding_conjugate
from .spiral import TWO_PI, SpiralPoint, WindingFunction

MIN_BUDGET = 10_000
Y_RANGE = (1.0, 1e6)
NEAR_DECADES = (-9.0, -3.0)
#: Below this relative separation the factor difference uses its derivative.
_SMALL_STEP = 1e-4
_CHUNK = 200_000
DIRECT_TERMS = 1_000_000


def _radial_drop(phi: WindingFunction, y, h):
    """``phi(y) - phi(y + h)`` without cancellation for small ``h``."""
    poly = np.exp(-phi.p * np.log(y)) * -np.expm1(-phi.p * np.log1p(h / y))
    if phi.kind == "polynomial":
        return poly
    if phi.kind != "comparable":
        return phi(y) - phi(y + h)
    eps_y = phi.factor(y)
    small = h < _SMALL_STEP * y
    deps = np.where(small, -phi_factor_deriv(phi, y + 0.5 * h) * h, eps_y - phi.factor(y + h))
    return eps_y * poly + deps * np.exp(-phi.p * np.log(y + h))


def phi_factor_deriv(phi: WindingFunction, x):
    # phi' = (eps' - p eps / x) x**-p, so eps' = phi' x**p + p eps / x
    return phi.deriv(x) * np.exp(phi.p * np.log(x)) + phi.p * phi.factor(x) / x


def _distance(phi: WindingFunction, y, h):
    """``|phi(y+h) e^{i(y+h)} - phi(y) e^{iy}|``."""
    r0 = phi(y)
    dr = _radial_drop(phi, y, h)
    return np.sqrt(dr**2 + 4.0 * r0 * (r0 - dr) * np.sin(0.5 * h) ** 2)


@dataclass(frozen=True)
class EquivalenceMap:
    """``source(x) exp(ix) -> target(x) exp(ix)``.

    Build with :meth:`to_comparable`; :meth:`inverse` swaps the roles.
    """

    source: WindingFunction
    target: WindingFunction

    def __post_init__(self):
        if self.source.p != self.target.p:
            raise DomainError("source and target must share the exponent p")
        kinds = {self.source.kind, self.target.kind}
        if not kinds <= {"polynomial", "comparable"} or "polynomial" not in kinds:
            raise DomainError("one side must be S_p and the other a comparable spiral")

    @classmethod
    def to_comparable(cls, phi: WindingFunction) -> "EquivalenceMap":
        if phi.kind not in ("comparable", "polynomial"):
            raise DomainError(f"phi must be comparable to x**-p, got kind {phi.kind!r}")
        return cls(WindingFunction.polynomial(phi.p), phi)

    @property
    def p(self) -> float:
        return self.source.p

    def inverse(self) -> "EquivalenceMap":
        return EquivalenceMap(self.target, self.source)

    def action(self, x):
        """Image radii and arguments for parameters ``x >= 1``."""
        x = np.asarray(x, dtype=float)
        if np.any(~(x >= 1)):
            raise DomainError("parameters must be >= 1")
        return self.target(x), x


def apply_equivalence(map_: EquivalenceMap, x: float) -> SpiralPoint:
    """Image of the source point with parameter ``x``."""
    r, arg = map_.action(x)
    r, arg = float(r), float(arg)
    return SpiralPoint(x=arg, radius=r, arg=arg, coords=(r * math.cos(arg), r * math.sin(arg)))


@dataclass(frozen=True)
class PairSampler:
    """Seeded sampler of parameter pairs ``x = y + h > y >= 1``.

    The budget is split in thirds: offsets with ``h mod 2 pi`` outside
    ``(pi/2, 3 pi/2)``, offsets inside it, and near-coincident offsets
    ``h = y * 10**u`` with ``u`` uniform over ``near_decades``. Anchors
    ``y`` are log-uniform over ``y_range``.
    """

    seed: int = 0
    y_range: tuple[float, float] = Y_RANGE
    near_decades: tuple[float, float] = NEAR_DECADES
    max_turns: float = 1e4

    def sample(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        rng = np.random.default_rng(self.seed)
        y = np.exp(rng.uniform(math.log(self.y_range[0]), math.log(self.y_range[1]), n))
        n_easy = n // 3
        n_hard = n // 3
        n_near = n - n_easy - n_hard
        top = math.log10(self.max_turns)
        m_easy = np.floor(10.0 ** rng.uniform(0.0, top, n_easy))
        easy = TWO_PI * m_easy + rng.uniform(-0.5 * math.pi, 0.5 * math.pi, n_easy)
        m_hard = np.floor(10.0 ** rng.uniform(0.0, top, n_hard)) - 1.0
        hard = TWO_PI * m_hard + rng.uniform(0.5 * math.pi, 1.5 * math.pi, n_hard)
        near = y[n_easy + n_hard :] * 10.0 ** rng.uniform(*self.near_decades, n_near)
        return y, np.concatenate([easy, hard, near])


@dataclass(frozen=True)
class DistortionReport:
    min_ratio: float
    max_ratio: float
    pair_budget: int
    regime_split: dict

    def __post_init__(self):
        if not 0 < self.min_ratio <= self.max_ratio:
            raise DomainError("need 0 < min_ratio <= max_ratio")

    @property
    def spread(self) -> float:
        return self.max_ratio / self.min_ratio


def distortion_stats(map_: EquivalenceMap, sampler: PairSampler | None = None, budget: int = MIN_BUDGET) -> DistortionReport:
    """Extreme distance ratios ``|F(a) - F(b)| / |a - b|`` over sampled pairs."""
    if budget < MIN_BUDGET:
        raise PreconditionError(f"budget must be at least {MIN_BUDGET}")
    sampler = PairSampler() if sampler is None else sampler
    y, h = sampler.sample(budget)
    lo, hi = math.inf, 0.0
    for start in range(0, budget, _CHUNK):
        yy, hh = y[start : start + _CHUNK], h[start : start + _CHUNK]
        ratio = _distance(map_.target, yy, hh) / _distance(map_.source, yy, hh)
        lo, hi = min(lo, float(ratio.min())), max(hi, float(ratio.max()))
    phase = np.mod(h, TWO_PI)
    inside = int(np.count_nonzero((phase > 0.5 * math.pi) & (phase < 1.5 * math.pi)))
    return DistortionReport(lo, hi, int(budget), {"inside": inside, "outside": int(budget - inside)})


def _log_tail(l: int, s: float, a: float, direct: int = DIRECT_TERMS) -> float:
    """``sum_{k >= l} k**-s (log k)**a``: direct terms, then the integral tail."""
    k = np.arange(l, l + direct, dtype=float)
    lk = np.log(k)
    head = float(np.sum(np.exp(-s * lk) * lk**a))
    n = float(l + direct)
    z = (s - 1.0) * math.log(n)
    integral = gamma_fn(a + 1.0) * gammaincc(a + 1.0, z) / (s - 1.0) ** (a + 1.0)
    return head + integral + 0.5 * n**-s * math.log(n) ** a


def log_perturbation_decay(p: float, gamma: float, alpha: float, l_grid) -> list[float]:
    """``l**-p (log l)**gamma / (sum_{k >= l} k**(-p/alpha) (log k)**(gamma/alpha))**beta``.

    ``beta = p alpha / (p - alpha)`` is the exponent that would be sharp for
    ``S_p``. A sequence tending to 0 means no (alpha, beta)-Hölder winding
    onto ``x**-p (log x)**gamma`` is possible.
    """
    if not p > 0 or not gamma >= 0:
        raise DomainError("need p > 0 and gamma >= 0")
    beta = winding_conjugate(p, alpha)
    ls = np.asarray(l_grid)
    if ls.size < 2 or np.any(np.diff(ls) <= 0) or ls[0] < 2:
        raise PreconditionError("l_grid must be increasing integers >= 2")
    if math.log10(ls[-1] / ls[0]) < 3 - 1e-12:
        raise PreconditionError("l_grid must span at least three decades")
    s, a = p / alpha, gamma / alpha
    out = []
    for l in ls.astype(np.int64):
        num = math.exp(-p * math.log(l)) * math.log(l) ** gamma
        out.append(float(num / _log_tail(int(l), s, a) ** beta))
    return out
