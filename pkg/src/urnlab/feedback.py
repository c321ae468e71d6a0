"""The free two-bin allocation chain with power-law feedback.

A ball goes to bin 1 with probability x**b1 / (x**b1 + y**b2).  That ratio is
evaluated as a logistic of ``b1*ln(x) - b2*ln(y)`` so it stays finite for any
count representable as a float.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numba as nb
import numpy as np

from urnlab import births
from urnlab import rng as _rng


@dataclass(frozen=True)
class FeedbackParams:
    beta1: float
    beta2: float

    def __post_init__(self):
        for name in ("beta1", "beta2"):
            v = getattr(self, name)
            if not math.isfinite(v) or v <= 0:
                raise ValueError(f"{name} must be a finite positive number, got {v!r}")


@dataclass(frozen=True)
class BinState:
    x: int
    y: int

    def __post_init__(self):
        if int(self.x) != self.x or int(self.y) != self.y:
            raise ValueError(f"bin counts must be integers, got ({self.x}, {self.y})")
        if self.x < 1 or self.y < 1:
            raise ValueError(f"bin counts must be >= 1, got ({self.x}, {self.y})")

    @property
    def total(self) -> int:
        return self.x + self.y


@dataclass(frozen=True)
class RaceSpec:
    cap1: int
    cap2: int

    def validate(self, start: BinState) -> None:
        if self.cap1 <= start.x or self.cap2 <= start.y:
            raise ValueError(
                f"caps ({self.cap1}, {self.cap2}) must exceed start ({start.x}, {start.y})"
            )

    @classmethod
    def from_multiplier(cls, start: BinState, mult: int) -> "RaceSpec":
        return cls(mult * start.x, mult * start.y)


class Winner(enum.IntEnum):
    BIN1 = 1
    BIN2 = 2


@dataclass(frozen=True)
class RaceOutcome:
    winner: Winner
    steps: int
    final: BinState


@nb.njit(cache=True)
def logistic(z):
    if z >= 0.0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


@nb.njit(cache=True)
def _p_right(beta1, beta2, x, y):
    return logistic(beta1 * math.log(x) - beta2 * math.log(y))


def jump_right_prob(params: FeedbackParams, s: BinState) -> float:
    return float(_p_right(params.beta1, params.beta2, float(s.x), float(s.y)))


def jump_up_prob(params: FeedbackParams, s: BinState) -> float:
    return 1.0 - jump_right_prob(params, s)


def step(params: FeedbackParams, s: BinState, rng) -> BinState:
    """One allocation; ``rng.random() < p_right`` sends the ball to bin 1."""
    if rng.random() < jump_right_prob(params, s):
        return BinState(s.x + 1, s.y)
    return BinState(s.x, s.y + 1)


def race_to_caps(params: FeedbackParams, start: BinState, spec: RaceSpec, rng) -> RaceOutcome:
    spec.validate(start)
    s = start
    steps = 0
    while s.x < spec.cap1 and s.y < spec.cap2:
        s = step(params, s, rng)
        steps += 1
    winner = Winner.BIN1 if s.x == spec.cap1 else Winner.BIN2
    return RaceOutcome(winner, steps, s)


@nb.njit(cache=True)
def _race_chain(beta1, beta2, x, y, cap1, cap2, seed, stream):
    # draw t of the stream decides step t, same as race_to_caps with a Stream
    t = 0
    while x < cap1 and y < cap2:
        if _rng.uniform(seed, stream, t) < _p_right(beta1, beta2, float(x), float(y)):
            x += 1
        else:
            y += 1
        t += 1
    return x, y, t


@nb.njit(cache=True, parallel=True)
def _race_chain_batch(beta1, beta2, x0, y0, cap1, cap2, seed, first, n):
    win1 = np.zeros(n, dtype=np.bool_)
    steps = np.zeros(n, dtype=np.int64)
    for i in nb.prange(n):
        x, y, t = _race_chain(beta1, beta2, x0, y0, cap1, cap2, seed, first + i)
        win1[i] = x == cap1
        steps[i] = t
    return win1, steps


# above this many worst-case steps the chain is replaced by the embedding
CHAIN_STEP_LIMIT = 200_000


@dataclass(frozen=True)
class MonopolyEstimate:
    estimate: float
    std_error: float
    replicas: int
    method: str
    winners: np.ndarray
    steps: np.ndarray | None

    def __iter__(self):
        return iter((self.estimate, self.std_error))


def race_winners(params: FeedbackParams, start: BinState, spec: RaceSpec, replicas: int,
                 seed: int, method: str = "auto", exact_terms: int = 10_000,
                 block_frac: float = 0.01, first_replica: int = 0):
    """Bin-1 win indicators (and step counts for the chain) per replica.

    ``method="chain"`` steps the allocation chain.  ``method="embedded"``
    races the two continuous-time birth processes whose jump chain is the
    allocation chain; the winner has the same law.
    """
    spec.validate(start)
    if method == "auto":
        worst = (spec.cap1 - start.x) + (spec.cap2 - start.y)
        method = "chain" if worst <= CHAIN_STEP_LIMIT else "embedded"
    if method == "chain":
        win1, steps = _race_chain_batch(params.beta1, params.beta2, start.x, start.y,
                                        spec.cap1, spec.cap2, _rng.as_u64(seed), first_replica, replicas)
        return win1, steps, method
    if method == "embedded":
        plan1 = births.holding_plan(params.beta1, start.x, spec.cap1, exact_terms, block_frac)
        plan2 = births.holding_plan(params.beta2, start.y, spec.cap2, exact_terms, block_frac)
        return births.race_plans(plan1, plan2, replicas, seed, first_replica), None, method
    raise ValueError(f"unknown method {method!r}")


def monopoly_prob_mc(params: FeedbackParams, start: BinState, spec: RaceSpec, replicas: int,
                     seed: int, method: str = "auto", **kw) -> MonopolyEstimate:
    """Monte Carlo estimate of P(bin 1 reaches its cap first) with its standard error."""
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    win1, steps, used = race_winners(params, start, spec, replicas, seed, method, **kw)
    p = float(np.mean(win1))
    se = math.sqrt(p * (1.0 - p) / replicas)
    return MonopolyEstimate(p, se, replicas, used, win1, steps)
