"""Sampling sums of pure-birth holding times.

A birth process with rates ``i**beta`` spends an Exp(i**beta) time at level i.
The time to climb from ``lo`` to ``hi`` is the sum of those holding times.  A
:class:`HoldingPlan` fixes how the sum is drawn: individually for the first
``exact_terms`` levels, then in blocks of relative width ``block_frac``, each
block drawn as one Gamma variable matching the block's mean and variance.
With ``exact_terms`` at least ``hi - lo`` the draw is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba as nb
import numpy as np

from urnlab import rng as _rng


@dataclass(frozen=True)
class HoldingPlan:
    beta: float
    lo: int
    hi: int
    shape: np.ndarray
    scale: np.ndarray

    @property
    def mean(self) -> float:
        return float(np.sum(self.shape * self.scale))

    @property
    def variance(self) -> float:
        return float(np.sum(self.shape * self.scale**2))

    @property
    def exact(self) -> bool:
        return bool(np.all(self.shape == 1.0)) and len(self.shape) == self.hi - self.lo


# blocks wider than this get their moments from tail-sum differences
_DIRECT_BLOCK = 64


@nb.njit(cache=True)
def em_tail(p, c):
    """Euler-Maclaurin value of sum_{i >= c} i**-p through the B6 term, and
    the first omitted term, which bounds the error for this summand."""
    fc = float(c)
    tail = (
        fc ** (1.0 - p) / (p - 1.0)
        + 0.5 * fc ** (-p)
        + p * fc ** (-p - 1.0) / 12.0
        - p * (p + 1) * (p + 2) * fc ** (-p - 3.0) / 720.0
        + p * (p + 1) * (p + 2) * (p + 3) * (p + 4) * fc ** (-p - 5.0) / 30240.0
    )
    rising = p * (p + 1) * (p + 2) * (p + 3) * (p + 4) * (p + 5) * (p + 6)
    return tail, rising * fc ** (-p - 7.0) / 1209600.0


@nb.njit(cache=True)
def _block_sum(p, i, j):
    # sum_{q=i}^{j-1} q**-p
    if j - i <= _DIRECT_BLOCK:
        m = 0.0
        for q in range(j - 1, i - 1, -1):
            m += float(q) ** (-p)
        return m
    a, _ = em_tail(p, i)
    b, _ = em_tail(p, j)
    return a - b


@nb.njit(cache=True)
def _build_plan(beta, lo, hi, exact_terms, block_frac):
    n_exact = min(hi - lo, exact_terms)
    # count blocks first so the arrays are allocated once
    n_blocks = 0
    i = lo + n_exact
    while i < hi:
        i = min(hi, i + max(1, int(i * block_frac)))
        n_blocks += 1
    shape = np.ones(n_exact + n_blocks)
    scale = np.empty(n_exact + n_blocks)
    for j in range(n_exact):
        scale[j] = float(lo + j) ** (-beta)
    i = lo + n_exact
    b = n_exact
    while i < hi:
        j = min(hi, i + max(1, int(i * block_frac)))
        m = _block_sum(beta, i, j)
        v = _block_sum(2.0 * beta, i, j)
        if j - i == 1:
            scale[b] = m
        else:
            shape[b] = m * m / v
            scale[b] = v / m
        b += 1
        i = j
    return shape, scale


def holding_plan(beta: float, lo: int, hi: int, exact_terms: int | None = None,
                 block_frac: float = 0.01) -> HoldingPlan:
    if not 1 <= lo <= hi:
        raise ValueError(f"need 1 <= lo <= hi, got lo={lo}, hi={hi}")
    if exact_terms is None:
        exact_terms = hi - lo
    shape, scale = _build_plan(float(beta), int(lo), int(hi), int(exact_terms), float(block_frac))
    return HoldingPlan(float(beta), int(lo), int(hi), shape, scale)


@nb.njit(cache=True)
def draw_plan(shape, scale, seed, stream, counter):
    """One draw of the planned sum; returns ``(value, next_counter)``."""
    total = 0.0
    for b in range(shape.shape[0]):
        if shape[b] == 1.0:
            total += -np.log1p(-_rng.uniform(seed, stream, counter)) * scale[b]
            counter += 1
        else:
            g, counter = _rng.gamma_unit_scale(seed, stream, counter, shape[b])
            total += g * scale[b]
    return total, counter


@nb.njit(cache=True, parallel=True)
def _draw_plan_batch(shape, scale, seed, first, n):
    out = np.empty(n)
    for i in nb.prange(n):
        out[i], _ = draw_plan(shape, scale, seed, first + i, 0)
    return out


def sample_plan(plan: HoldingPlan, n: int, seed: int, first_stream: int = 0) -> np.ndarray:
    """``n`` independent draws; draw i uses stream ``first_stream + i``."""
    return _draw_plan_batch(plan.shape, plan.scale, _rng.as_u64(seed), first_stream, n)


@nb.njit(cache=True, parallel=True)
def _race_batch(shape1, scale1, shape2, scale2, seed, first, n):
    win1 = np.zeros(n, dtype=np.bool_)
    for i in nb.prange(n):
        t1, c = draw_plan(shape1, scale1, seed, first + i, 0)
        t2, _ = draw_plan(shape2, scale2, seed, first + i, c)
        win1[i] = t1 < t2
    return win1


def race_plans(plan1: HoldingPlan, plan2: HoldingPlan, n: int, seed: int,
               first_stream: int = 0) -> np.ndarray:
    """Indicators that the first process finishes its climb before the second."""
    return _race_batch(plan1.shape, plan1.scale, plan2.shape, plan2.scale, _rng.as_u64(seed), first_stream, n)
