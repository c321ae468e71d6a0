"""Pure-birth embedding of the allocation chain.

Bin i is a birth process with rates k**beta_i; the chain is its jump chain and
bin 1 monopolises iff its explosion time beats bin 2's.  This module holds the
explosion-time moments, a truncated sampler, the critical initial curve and
the resulting limit predictions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from urnlab import births
from urnlab.errors import NotExplosive, OutOfRegime, Unclassified
from urnlab.feedback import BinState, FeedbackParams
from urnlab.rng import Stream, as_u64
from urnlab.stats import normal_cdf

# Euler-Maclaurin is applied from this index on; below it terms are summed
_EM_START = 100
# tolerance for the equality tests of the case analysis (alpha == alpha_cr, ...)
REGIME_RTOL = 1e-12


@dataclass(frozen=True)
class BirthProcessSpec:
    beta: float
    start_k: int = 1

    def __post_init__(self):
        if not math.isfinite(self.beta) or self.beta <= 0:
            raise ValueError(f"beta must be positive, got {self.beta!r}")
        if int(self.start_k) != self.start_k or self.start_k < 1:
            raise ValueError(f"start_k must be an integer >= 1, got {self.start_k!r}")


@dataclass(frozen=True)
class ExplosionMoments:
    mean: float
    variance: float
    third_abs_bound: float
    # bound on the quadrature error of ``mean`` (the others are far smaller)
    mean_error: float = 0.0

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


def power_tail_sum(p: float, k: int) -> tuple[float, float]:
    """``sum_{i >= k} i**-p`` for p > 1, with an absolute error bound.

    Terms below ``_EM_START`` are added directly (smallest first).  The rest
    is the Euler-Maclaurin expansion through the B6 term; for the completely
    monotone summand the remainder is bounded by the first omitted (B8) term.
    The result always lies in the integral bracket
    ``[int_k^inf, k**-p + int_k^inf]``.
    """
    if p <= 1:
        raise NotExplosive(f"sum of i**-{p} diverges")
    if k < 1:
        raise ValueError("k must be >= 1")
    c = max(int(k), _EM_START)
    head = 0.0
    for i in range(c - 1, int(k) - 1, -1):
        head += i ** (-p)
    tail, err = births.em_tail(float(p), c)
    return head + tail, err + 4e-16 * (head + tail)


def is_explosive(spec: BirthProcessSpec) -> bool:
    # sum of k**-beta converges iff beta > 1
    return spec.beta > 1


def explosion_moments(spec: BirthProcessSpec) -> ExplosionMoments:
    if not is_explosive(spec):
        raise NotExplosive(f"beta={spec.beta} <= 1: explosion time is infinite")
    b, k = spec.beta, spec.start_k
    mean, err = power_tail_sum(b, k)
    var, _ = power_tail_sum(2 * b, k)
    third, _ = power_tail_sum(3 * b, k)
    return ExplosionMoments(mean, var, 7.0 * third, err)


def default_truncation(spec: BirthProcessSpec) -> int:
    return max(10**6, 100 * spec.start_k)


@dataclass(frozen=True)
class ExplosionDraws:
    samples: np.ndarray
    truncation_K: int
    tail_mean: float
    # std of the holding times past K that were replaced by their mean
    tail_std: float
    exact: bool


def _plan(spec: BirthProcessSpec, K: int, exact_terms, block_frac):
    if not is_explosive(spec):
        raise NotExplosive(f"beta={spec.beta} <= 1: explosion time is infinite")
    if K < spec.start_k:
        raise ValueError(f"truncation_K={K} below start_k={spec.start_k}")
    plan = births.holding_plan(spec.beta, spec.start_k, K + 1, exact_terms, block_frac)
    tail_mean, _ = power_tail_sum(spec.beta, K + 1)
    tail_var, _ = power_tail_sum(2 * spec.beta, K + 1)
    return plan, tail_mean, math.sqrt(tail_var)


def sample_explosion_time(spec: BirthProcessSpec, truncation_K: int | None, rng: Stream,
                          exact_terms: int | None = None, block_frac: float = 0.01) -> float:
    """Holding times for levels start_k..K drawn, levels past K replaced by their mean."""
    K = default_truncation(spec) if truncation_K is None else truncation_K
    plan, tail_mean, _ = _plan(spec, K, exact_terms, block_frac)
    t, rng.counter = births.draw_plan(plan.shape, plan.scale, as_u64(rng.seed), as_u64(rng.index), rng.counter)
    return float(t) + tail_mean


def sample_explosion_times(spec: BirthProcessSpec, n: int, seed: int,
                           truncation_K: int | None = None, exact_terms: int | None = None,
                           block_frac: float = 0.01) -> ExplosionDraws:
    """``n`` truncated explosion times; sample i uses stream i of ``seed``.

    ``exact_terms=None`` draws every holding time up to K individually.  A
    finite value switches the levels past ``start_k + exact_terms`` to
    moment-matched Gamma blocks (see :mod:`urnlab.births`).
    """
    K = default_truncation(spec) if truncation_K is None else truncation_K
    plan, tail_mean, tail_std = _plan(spec, K, exact_terms, block_frac)
    t = births.sample_plan(plan, n, seed) + tail_mean
    return ExplosionDraws(t, K, tail_mean, tail_std, plan.exact)


@dataclass(frozen=True)
class CriticalCurve:
    alpha_cr: float
    nu_cr: float

    def __call__(self, x: float) -> float:
        return self.nu_cr * x**self.alpha_cr


def _check_regime(params: FeedbackParams) -> None:
    if not 1 < params.beta1 <= params.beta2:
        raise OutOfRegime(f"need 1 < beta1 <= beta2, got ({params.beta1}, {params.beta2})")


def critical_curve(params: FeedbackParams) -> CriticalCurve:
    _check_regime(params)
    a = (params.beta1 - 1) / (params.beta2 - 1)
    return CriticalCurve(a, a ** (1.0 / (params.beta2 - 1)))


def rho(params: FeedbackParams, mu: float) -> float:
    nu = critical_curve(params).nu_cr
    return -mu * math.sqrt((2 * params.beta2 - 1) / nu)


@dataclass(frozen=True)
class InitialCurveSpec:
    """y(x) = nu * x**alpha + mu * x**delta."""

    alpha: float
    nu: float
    mu: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.nu <= 0:
            raise ValueError(f"nu must be positive, got {self.nu}")
        if not 0 <= self.delta < self.alpha:
            raise ValueError(f"delta must lie in [0, alpha), got {self.delta}")

    @classmethod
    def on_critical_curve(cls, params: FeedbackParams, mu: float = 0.0, delta: float = 0.0):
        cc = critical_curve(params)
        return cls(cc.alpha_cr, cc.nu_cr, mu, delta)


def _round_half_away(v: float) -> int:
    return int(math.floor(v + 0.5)) if v >= 0 else -int(math.floor(-v + 0.5))


def initial_y(x: int, spec: InitialCurveSpec) -> tuple[int, bool]:
    """Rounded starting count for bin 2 and whether it had to be clamped up to 1."""
    if x < 1:
        raise ValueError("x must be >= 1")
    y = _round_half_away(spec.nu * x**spec.alpha + spec.mu * x**spec.delta)
    if y < 1:
        return 1, True
    return y, False


class LimitKind(enum.Enum):
    BIN1_ALMOST_SURELY = "bin1"
    BIN2_ALMOST_SURELY = "bin2"
    NORMAL_LIMIT = "normal"
    HALF = "half"


@dataclass(frozen=True)
class UnreflectedPrediction:
    kind: LimitKind
    # limiting P(bin 1 monopolises)
    limit: float
    rho: float | None = None


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=REGIME_RTOL, abs_tol=REGIME_RTOL)


def classify_unreflected(params: FeedbackParams, spec: InitialCurveSpec) -> UnreflectedPrediction:
    """Limit of P(bin 1 monopolises) along starts (x, y(x)) as x grows."""
    cc = critical_curve(params)
    bin1 = UnreflectedPrediction(LimitKind.BIN1_ALMOST_SURELY, 1.0)
    bin2 = UnreflectedPrediction(LimitKind.BIN2_ALMOST_SURELY, 0.0)
    if not _close(spec.alpha, cc.alpha_cr):
        return bin1 if spec.alpha < cc.alpha_cr else bin2
    if not _close(spec.nu, cc.nu_cr):
        return bin1 if spec.nu < cc.nu_cr else bin2
    half_a = cc.alpha_cr / 2
    if _close(spec.delta, half_a):
        r = rho(params, spec.mu)
        return UnreflectedPrediction(LimitKind.NORMAL_LIMIT, normal_cdf(r), r)
    if spec.delta < half_a:
        return UnreflectedPrediction(LimitKind.HALF, 0.5)
    if spec.mu == 0:
        raise Unclassified("on the critical curve with delta in (alpha_cr/2, alpha_cr) mu must be nonzero")
    return bin2 if spec.mu > 0 else bin1


def monopoly_prob_normal(params: FeedbackParams, start: BinState) -> float:
    """Phi((E T2 - E T1) / sd(T1 - T2)) with exact explosion-time moments."""
    _check_regime(params)
    m1 = explosion_moments(BirthProcessSpec(params.beta1, start.x))
    m2 = explosion_moments(BirthProcessSpec(params.beta2, start.y))
    sd = math.sqrt(m1.variance + m2.variance)
    if sd == 0:
        raise ValueError("explosion-time variance underflowed; start counts too large")
    return normal_cdf((m2.mean - m1.mean) / sd)
