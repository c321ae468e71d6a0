"""Exact race probabilities by backward induction on a truncated grid.

h(x, y) = P(bin 1 reaches cap1 before bin 2 reaches cap2 | start (x, y))
solves h = p h(x+1, y) + (1-p) h(x, y+1) with h(cap1, .) = 1, h(., cap2) = 0.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numba as nb
import numpy as np

from urnlab.errors import GridTooLarge
from urnlab.feedback import BinState, FeedbackParams, logistic

STREAMING_BUDGET = 200_000_000
MATERIALIZED_BUDGET = 10_000_000


@nb.njit(cache=True)
def _sweep_rows(beta1, beta2, x0, y0, cap1, cap2):
    # h[x] holds row y+1 on entry to row y; sweeping x downwards overwrites it in place
    h = np.zeros(cap1 + 1)
    lx = np.empty(cap1 + 1)
    for x in range(1, cap1 + 1):
        lx[x] = beta1 * math.log(x)
    for y in range(cap2 - 1, y0 - 1, -1):
        ly = beta2 * math.log(y)
        h[cap1] = 1.0
        for x in range(cap1 - 1, x0 - 1, -1):
            p = logistic(lx[x] - ly)
            h[x] = p * h[x + 1] + (1.0 - p) * h[x]
    return h[x0]


@nb.njit(cache=True)
def _fill_table(beta1, beta2, cap1, cap2):
    h = np.zeros((cap1 + 1, cap2 + 1))
    for y in range(1, cap2):
        h[cap1, y] = 1.0
    for y in range(cap2 - 1, 0, -1):
        ly = beta2 * math.log(y)
        for x in range(cap1 - 1, 0, -1):
            p = logistic(beta1 * math.log(x) - ly)
            h[x, y] = p * h[x + 1, y] + (1.0 - p) * h[x, y + 1]
    return h


def _check(start: BinState, cap1: int, cap2: int, budget: int) -> None:
    if not (start.x < cap1 and start.y < cap2):
        raise ValueError(f"start ({start.x}, {start.y}) must lie below caps ({cap1}, {cap2})")
    cells = (cap1 - start.x + 1) * (cap2 - start.y + 1)
    if cells > budget:
        raise GridTooLarge(f"{cells} cells exceeds the budget of {budget}")


def race_prob_exact(params: FeedbackParams, start: BinState, cap1: int, cap2: int,
                    budget: int = STREAMING_BUDGET) -> float:
    """P(bin 1 hits cap1 first) from ``start``; O(cap1) memory."""
    _check(start, cap1, cap2, budget)
    return float(_sweep_rows(params.beta1, params.beta2, start.x, start.y, cap1, cap2))


@dataclass(frozen=True)
class CapSweepRow:
    multiplier: int
    cap1: int
    cap2: int
    probability: float
    # |p - previous p|; None for the first row
    delta: float | None


def race_prob_cap_sweep(params: FeedbackParams, start: BinState, multipliers,
                        budget: int = STREAMING_BUDGET) -> list[CapSweepRow]:
    rows: list[CapSweepRow] = []
    prev = None
    for m in multipliers:
        cap1, cap2 = m * start.x, m * start.y
        p = race_prob_exact(params, start, cap1, cap2, budget)
        rows.append(CapSweepRow(m, cap1, cap2, p, None if prev is None else abs(p - prev)))
        prev = p
    return rows


@dataclass
class RaceTable:
    params: FeedbackParams
    cap1: int
    cap2: int
    # values[x, y] for 1 <= x <= cap1, 1 <= y <= cap2; row/column 0 unused
    values: np.ndarray

    def __getitem__(self, xy) -> float:
        return float(self.values[xy])

    def max_residual(self) -> float:
        """Largest |h - p h_right - (1-p) h_up| over interior cells."""
        x = np.arange(1, self.cap1)[:, None].astype(float)
        y = np.arange(1, self.cap2)[None, :].astype(float)
        z = self.params.beta1 * np.log(x) - self.params.beta2 * np.log(y)
        p = np.where(z >= 0, 1 / (1 + np.exp(-np.abs(z))), np.exp(-np.abs(z)) / (1 + np.exp(-np.abs(z))))
        h = self.values
        lhs = h[1:self.cap1, 1:self.cap2]
        rhs = p * h[2:self.cap1 + 1, 1:self.cap2] + (1 - p) * h[1:self.cap1, 2:self.cap2 + 1]
        return float(np.max(np.abs(lhs - rhs)))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "y", "h"])
            for x in range(1, self.cap1 + 1):
                for y in range(1, self.cap2 + 1):
                    if x == self.cap1 and y == self.cap2:
                        continue
                    w.writerow([x, y, repr(float(self.values[x, y]))])


def race_table(params: FeedbackParams, cap1: int, cap2: int,
               budget: int = MATERIALIZED_BUDGET) -> RaceTable:
    _check(BinState(1, 1), cap1, cap2, budget)
    return RaceTable(params, cap1, cap2, _fill_table(params.beta1, params.beta2, cap1, cap2))
