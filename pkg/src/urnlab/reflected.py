"""Allocation chain reflected inside the wedge lower(x) <= y <= upper(x).

Inside the wedge the chain moves like the free chain.  On the lower edge
(lower(x) <= y < lower(x+1)) it is pushed up, on the upper edge
(upper(x) - 1 < y <= upper(x)) it is pushed right.  With power-law edges
x**alpha and x**gamma the chain ends up in a strip of integer width along one
edge; :func:`predict_regime` gives the widths and :func:`run_with_stats`
measures them on a finite trajectory.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numba as nb
import numpy as np

from urnlab import rng as _rng
from urnlab.errors import OutOfRegime, StartedOutsideDomain
from urnlab.feedback import BinState, FeedbackParams, _p_right

# position classes (kernel encoding)
INTERIOR, LOWER_REFLECT, UPPER_REFLECT, OUTSIDE = 0, 1, 2, 3
# move kinds (kernel encoding)
JUMP_RIGHT, JUMP_UP, REFLECT_UP, REFLECT_RIGHT = 0, 1, 2, 3

# upper-gap forms
_GAP_GENERIC, _GAP_SUPERLINEAR, _GAP_BISECTOR, _GAP_SUBLINEAR = 0, 1, 2, 3

S_HIST_BINS = 32
ATTACH_FRACTION = 0.99
DEFAULT_THRESHOLD = 10.0
# rungs listed in a RegimePrediction unless ladder_len is given
LADDER_DISPLAY_MAX = 64


class Position(enum.IntEnum):
    INTERIOR = INTERIOR
    LOWER_REFLECT = LOWER_REFLECT
    UPPER_REFLECT = UPPER_REFLECT
    OUTSIDE_DOMAIN = OUTSIDE


class MoveKind(enum.IntEnum):
    JUMP_RIGHT = JUMP_RIGHT
    JUMP_UP = JUMP_UP
    REFLECT_UP = REFLECT_UP
    REFLECT_RIGHT = REFLECT_RIGHT


@dataclass(frozen=True)
class CurveSpec:
    """c * x**e + d * x**f."""

    lead_coeff: float = 1.0
    lead_exp: float = 1.0
    corr_coeff: float = 0.0
    corr_exp: float = 0.0

    def __post_init__(self):
        if self.lead_coeff <= 0 or self.lead_exp <= 0:
            raise ValueError("lead coefficient and exponent must be positive")

    @classmethod
    def power(cls, exponent: float) -> "CurveSpec":
        return cls(1.0, exponent)

    @property
    def is_power_law(self) -> bool:
        return self.lead_coeff == 1.0 and self.corr_coeff == 0.0

    def __call__(self, x: float) -> float:
        return _curve(self.lead_coeff, self.lead_exp, self.corr_coeff, self.corr_exp, float(x))

    def as_tuple(self):
        return (float(self.lead_coeff), float(self.lead_exp), float(self.corr_coeff), float(self.corr_exp))


@dataclass(frozen=True)
class BoundarySpec:
    lower: CurveSpec
    upper: CurveSpec

    @classmethod
    def power_law(cls, alpha: float, gamma: float) -> "BoundarySpec":
        if not 0 < alpha < gamma:
            raise ValueError(f"need 0 < alpha < gamma, got alpha={alpha}, gamma={gamma}")
        return cls(CurveSpec.power(alpha), CurveSpec.power(gamma))

    @property
    def is_power_law(self) -> bool:
        return self.lower.is_power_law and self.upper.is_power_law

    @property
    def alpha(self) -> float:
        return self.lower.lead_exp

    @property
    def gamma(self) -> float:
        return self.upper.lead_exp

    def lower_start(self, x: int) -> BinState:
        """Lowest admissible state in column x."""
        return BinState(x, max(1, math.ceil(self.lower(x))))

    def upper_start(self, x: int) -> BinState:
        """Highest admissible state in column x."""
        return BinState(x, math.floor(self.upper(x)))


@nb.njit(cache=True)
def _curve(c, e, d, f, x):
    v = c * x**e
    if d != 0.0:
        v += d * x**f
    return v


@nb.njit(cache=True)
def _classify(lo, up, x, y):
    fx = float(x)
    yf = float(y)
    phi = _curve(lo[0], lo[1], lo[2], lo[3], fx)
    phi1 = _curve(lo[0], lo[1], lo[2], lo[3], fx + 1.0)
    psi = _curve(up[0], up[1], up[2], up[3], fx)
    if phi <= yf and yf < phi1:
        return LOWER_REFLECT
    if psi - 1.0 < yf and yf <= psi:
        return UPPER_REFLECT
    if phi1 <= yf and yf <= psi - 1.0:
        return INTERIOR
    return OUTSIDE


@nb.njit(cache=True)
def _move(beta1, beta2, lo, up, x, y, u):
    pos = _classify(lo, up, x, y)
    if pos == LOWER_REFLECT:
        return x, y + 1, REFLECT_UP, pos
    if pos == UPPER_REFLECT:
        return x + 1, y, REFLECT_RIGHT, pos
    if pos == INTERIOR:
        if u < _p_right(beta1, beta2, float(x), float(y)):
            return x + 1, y, JUMP_RIGHT, pos
        return x, y + 1, JUMP_UP, pos
    return x, y, -1, pos


@nb.njit(cache=True)
def _upper_gap(up, mode, x, y):
    fx = float(x)
    fy = float(y)
    if mode == _GAP_SUPERLINEAR:
        return fx - fy ** (1.0 / up[1])
    if mode == _GAP_BISECTOR:
        return fx - fy
    if mode == _GAP_SUBLINEAR:
        return fx ** up[1] - fy
    return _curve(up[0], up[1], up[2], up[3], fx) - fy


@nb.njit(cache=True)
def _run(beta1, beta2, lo, up, x, y, n_steps, seed, stream, window_start, gap_mode,
         r, s_alpha, lower_thr, upper_thr, rec_every, max_refl):
    inf = np.inf
    lg_min, lg_max, ug_min, ug_max = inf, -inf, inf, -inf
    n_window = 0
    lower_below = 0
    upper_below = 0
    refl_up = 0
    refl_right = 0
    jumps_up = 0
    refl_times = np.empty(max_refl, dtype=np.int64)
    n_refl_stored = 0
    hist = np.zeros(S_HIST_BINS, dtype=np.int64)
    n_rec = n_steps // rec_every + 1 if rec_every > 0 else 0
    rec = np.empty((n_rec, 4), dtype=np.int64)
    bad_step = -1

    # r-intervals: thresholds (n r)**(1/alpha) for n > n_x
    use_s = s_alpha > 0.0
    next_n = 0
    thr = inf
    open_start = -1
    open_count = 0
    if use_s:
        next_n = int(math.floor(float(x) ** s_alpha / r)) + 1
        thr = (next_n * r) ** (1.0 / s_alpha)
        while float(x) >= thr:
            next_n += 1
            thr = (next_n * r) ** (1.0 / s_alpha)

    for t in range(n_steps + 1):
        if t > 0:
            u = _rng.uniform(seed, stream, t - 1)
            nx, ny, kind, pos = _move(beta1, beta2, lo, up, x, y, u)
            if kind < 0:
                bad_step = t - 1
                break
            if kind == REFLECT_UP or kind == REFLECT_RIGHT:
                if kind == REFLECT_UP:
                    refl_up += 1
                else:
                    refl_right += 1
                if n_refl_stored < max_refl:
                    refl_times[n_refl_stored] = t - 1
                    n_refl_stored += 1
            elif kind == JUMP_UP:
                jumps_up += 1
                if open_start >= 0:
                    open_count += 1
            x, y = nx, ny
            if rec_every > 0 and t % rec_every == 0:
                j = t // rec_every
                rec[j, 0] = t
                rec[j, 1] = x
                rec[j, 2] = y
                rec[j, 3] = kind
        elif rec_every > 0:
            rec[0, 0] = 0
            rec[0, 1] = x
            rec[0, 2] = y
            rec[0, 3] = -1
        if use_s and float(x) >= thr:
            if open_start >= 0 and open_start >= window_start:
                hist[min(open_count, S_HIST_BINS - 1)] += 1
            open_start = t
            open_count = 0
            while float(x) >= thr:
                next_n += 1
                thr = (next_n * r) ** (1.0 / s_alpha)
        if t >= window_start:
            lg = float(y) - _curve(lo[0], lo[1], lo[2], lo[3], float(x))
            ug = _upper_gap(up, gap_mode, x, y)
            lg_min = min(lg_min, lg)
            lg_max = max(lg_max, lg)
            ug_min = min(ug_min, ug)
            ug_max = max(ug_max, ug)
            n_window += 1
            if lg < lower_thr:
                lower_below += 1
            if ug < upper_thr:
                upper_below += 1
    stats = np.array([lg_min, lg_max, ug_min, ug_max])
    counts = np.array([x, y, n_window, lower_below, upper_below, refl_up, refl_right,
                       jumps_up, n_refl_stored, bad_step], dtype=np.int64)
    return stats, counts, refl_times[:n_refl_stored], hist, rec


@nb.njit(cache=True, parallel=True)
def _run_batch(beta1, beta2, lo, up, x, y, n_steps, seed, first, n_runs, window_start,
               gap_mode, r, s_alpha, lower_thr, upper_thr):
    stats = np.empty((n_runs, 4))
    counts = np.empty((n_runs, 10), dtype=np.int64)
    hists = np.empty((n_runs, S_HIST_BINS), dtype=np.int64)
    for i in nb.prange(n_runs):
        s, c, _, h, _ = _run(beta1, beta2, lo, up, x, y, n_steps, seed, first + i, window_start,
                             gap_mode, r, s_alpha, lower_thr, upper_thr, 0, 0)
        stats[i] = s
        counts[i] = c
        hists[i] = h
    return stats, counts, hists


def classify_position(boundary: BoundarySpec, s: BinState) -> Position:
    return Position(_classify(np.array(boundary.lower.as_tuple()), np.array(boundary.upper.as_tuple()),
                              s.x, s.y))


def step_reflected(params: FeedbackParams, boundary: BoundarySpec, s: BinState, rng):
    """One move of the reflected chain; forced moves still consume a draw."""
    u = rng.random()
    x, y, kind, _ = _move(params.beta1, params.beta2, np.array(boundary.lower.as_tuple()),
                          np.array(boundary.upper.as_tuple()), s.x, s.y, u)
    if kind < 0:
        raise StartedOutsideDomain(f"state ({s.x}, {s.y}) is outside the wedge")
    return BinState(x, y), MoveKind(kind)


# ---------------------------------------------------------------------------
# width predictions


class UpperKind(enum.Enum):
    STRIP_WIDTH = "strip"
    BISECTOR_ZIGZAG = "bisector"
    SUBLINEAR_HUG = "sublinear"


@dataclass(frozen=True)
class RegimePrediction:
    lower_width_k1: int
    upper_kind: UpperKind
    upper_width_k2: int
    alpha_cr: float
    alpha_ladder: tuple[float, ...]
    gamma_ladder: tuple[float, ...]

    def as_dict(self) -> dict:
        return {
            "k1": self.lower_width_k1,
            "upper_kind": self.upper_kind.value,
            "k2": self.upper_width_k2,
            "alpha_cr": self.alpha_cr,
            "alpha_ladder": list(self.alpha_ladder),
            "gamma_ladder": list(self.gamma_ladder),
        }


def _width(bound) -> int:
    # the unique integer in (bound, bound + 1]
    return math.floor(bound) + 1


# Width bounds and ladder rungs are compared in exact rational arithmetic on
# the binary64 inputs, so ties on a rung resolve the same way on both routes.


def _lower_bound(params: FeedbackParams, alpha: float) -> Fraction:
    b1, b2, a = Fraction(params.beta1), Fraction(params.beta2), Fraction(alpha)
    return a / ((b2 - 1) * ((b1 - 1) / (b2 - 1) - a))


def _upper_bound(params: FeedbackParams, gamma: float) -> Fraction:
    b1, b2, g = Fraction(params.beta1), Fraction(params.beta2), Fraction(gamma)
    return 1 / ((b2 - 1) * (g - (b1 - 1) / (b2 - 1)))


def _alpha_rung(params: FeedbackParams, k: int) -> Fraction:
    if k == 0:
        return Fraction(0)
    return (Fraction(params.beta1) - 1) / (Fraction(params.beta2) - 1 + Fraction(1, k))


def _gamma_rung(params: FeedbackParams, k: int) -> Fraction:
    return (Fraction(params.beta1) - 1 + Fraction(1, k)) / (Fraction(params.beta2) - 1)


def alpha_ladder_value(params: FeedbackParams, k: int) -> float:
    if k == 0:
        return 0.0
    return (params.beta1 - 1) / (params.beta2 - 1 + 1.0 / k)


def gamma_ladder_value(params: FeedbackParams, k: int) -> float:
    if k == 0:
        return math.inf
    return (params.beta1 - 1 + 1.0 / k) / (params.beta2 - 1)


def _first_rung(holds, k_max: int) -> int:
    """Smallest k >= 1 with holds(k), for a predicate monotone in k (gallop, then bisect)."""
    hi = 1
    while not holds(hi):
        if hi >= k_max:
            raise OutOfRegime(f"no ladder rung below k={k_max}")
        hi = min(2 * hi, k_max)
    lo = hi // 2
    # holds(lo) is false (or lo == 0), holds(hi) is true
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if holds(mid):
            hi = mid
        else:
            lo = mid
    return hi


def k1_from_ladder(params: FeedbackParams, alpha: float, k_max: int = 10**12) -> int:
    """k with alpha_{k-1} <= alpha < alpha_k; the rungs increase with k."""
    a = Fraction(alpha)
    if a < 0:
        raise OutOfRegime(f"alpha={alpha} below alpha_0 = 0")
    k = _first_rung(lambda j: a < _alpha_rung(params, j), k_max)
    assert _alpha_rung(params, k - 1) <= a < _alpha_rung(params, k)
    return k


def k2_from_ladder(params: FeedbackParams, gamma: float, k_max: int = 10**12) -> int:
    """k with max(1, gamma_k) < gamma <= gamma_{k-1} (gamma > 1); the rungs decrease with k."""
    g = Fraction(gamma)
    if g <= 1:
        raise OutOfRegime(f"gamma={gamma} must exceed 1")
    k = _first_rung(lambda j: max(Fraction(1), _gamma_rung(params, j)) < g, k_max)
    assert k == 1 or g <= _gamma_rung(params, k - 1)
    return k


def predict_regime(params: FeedbackParams, alpha: float, gamma: float,
                   ladder_len: int | None = None) -> RegimePrediction:
    b1, b2 = params.beta1, params.beta2
    if not 1 < b1 <= b2:
        raise OutOfRegime(f"need 1 < beta1 <= beta2, got ({b1}, {b2})")
    alpha_cr = (b1 - 1) / (b2 - 1)
    if b1 == b2:
        if not 0 < alpha < 1 < gamma:
            raise OutOfRegime(f"symmetric case needs 0 < alpha < 1 < gamma, got {alpha}, {gamma}")
    elif not 0 < alpha < alpha_cr < gamma:
        raise OutOfRegime(
            f"asymmetric case needs 0 < alpha < alpha_cr={alpha_cr:.6g} < gamma, got {alpha}, {gamma}"
        )
    k1 = _width(_lower_bound(params, alpha))
    if gamma < 1:
        kind, k2 = UpperKind.SUBLINEAR_HUG, 1
    else:
        k2 = _width(_upper_bound(params, gamma))
        kind = UpperKind.BISECTOR_ZIGZAG if gamma == 1 else UpperKind.STRIP_WIDTH
    n = ladder_len if ladder_len is not None else min(max(k1, k2) + 2, LADDER_DISPLAY_MAX)
    return RegimePrediction(
        k1, kind, k2, alpha_cr,
        tuple(alpha_ladder_value(params, k) for k in range(n + 1)),
        tuple(gamma_ladder_value(params, k) for k in range(1, n + 1)),
    )


# ---------------------------------------------------------------------------
# trajectories


class Attachment(enum.Enum):
    LOWER = "lower"
    UPPER = "upper"
    UNDECIDED = "undecided"


@dataclass
class TrajectoryStats:
    steps: int
    tail_window: tuple[int, int]
    final: BinState
    lower_gap_min: float
    lower_gap_max: float
    upper_gap_min: float
    upper_gap_max: float
    upper_gap_form: str
    reflect_up_count: int
    reflect_right_count: int
    jump_up_count: int
    reflection_times: np.ndarray
    # histogram of jumps up per r-interval started inside the tail window;
    # the last bin collects S >= S_HIST_BINS - 1
    jump_up_counts_per_interval: np.ndarray
    lower_fraction: float
    upper_fraction: float
    attachment: Attachment
    trajectory: np.ndarray | None = field(default=None, repr=False)

    def summary(self) -> dict:
        return {
            "steps": self.steps,
            "tail_window": list(self.tail_window),
            "final": [self.final.x, self.final.y],
            "lower_gap_min": self.lower_gap_min,
            "lower_gap_max": self.lower_gap_max,
            "upper_gap_min": self.upper_gap_min,
            "upper_gap_max": self.upper_gap_max,
            "upper_gap_form": self.upper_gap_form,
            "reflect_up": self.reflect_up_count,
            "reflect_right": self.reflect_right_count,
            "jumps_up": self.jump_up_count,
            "s_histogram": self.jump_up_counts_per_interval.tolist(),
            "attachment": self.attachment.value,
        }

    def write_trajectory_csv(self, path) -> None:
        if self.trajectory is None:
            raise ValueError("trajectory was not recorded; pass record_every > 0")
        names = {-1: "start"} | {k.value: k.name.lower() for k in MoveKind}
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["step", "x", "y", "move_kind"])
            for t, x, y, k in self.trajectory:
                w.writerow([int(t), int(x), int(y), names[int(k)]])


def _gap_mode(boundary: BoundarySpec) -> tuple[int, str]:
    if not boundary.upper.is_power_law:
        return _GAP_GENERIC, "upper(x)-y"
    g = boundary.gamma
    if g > 1:
        return _GAP_SUPERLINEAR, "x-y^(1/gamma)"
    if g == 1:
        return _GAP_BISECTOR, "x-y"
    return _GAP_SUBLINEAR, "x^gamma-y"


def _thresholds(params: FeedbackParams, boundary: BoundarySpec, lower_threshold, upper_threshold):
    pred = None
    if boundary.is_power_law:
        try:
            pred = predict_regime(params, boundary.alpha, boundary.gamma)
        except OutOfRegime:
            pred = None
    if lower_threshold is None:
        lower_threshold = pred.lower_width_k1 + 1 if pred else DEFAULT_THRESHOLD
    if upper_threshold is None:
        upper_threshold = pred.upper_width_k2 + 1 if pred else DEFAULT_THRESHOLD
    return float(lower_threshold), float(upper_threshold)


def _attachment(lower_frac: float, upper_frac: float) -> Attachment:
    if lower_frac > ATTACH_FRACTION:
        return Attachment.LOWER
    if upper_frac > ATTACH_FRACTION:
        return Attachment.UPPER
    return Attachment.UNDECIDED


def _kernel_args(params, boundary, start, total_steps, r, lower_threshold, upper_threshold):
    if classify_position(boundary, start) == Position.OUTSIDE_DOMAIN:
        raise StartedOutsideDomain(f"start ({start.x}, {start.y}) is outside the wedge")
    if total_steps < 1:
        raise ValueError("total_steps must be positive")
    if r <= 0:
        raise ValueError("r must be positive")
    lo = np.array(boundary.lower.as_tuple())
    up = np.array(boundary.upper.as_tuple())
    mode, form = _gap_mode(boundary)
    lt, ut = _thresholds(params, boundary, lower_threshold, upper_threshold)
    # r-intervals are defined along a pure power-law lower edge
    s_alpha = boundary.alpha if boundary.lower.is_power_law else 0.0
    return lo, up, mode, form, lt, ut, s_alpha


def _window_start(total_steps: int, window_fraction: float) -> int:
    if not 0 < window_fraction <= 1:
        raise ValueError("window_fraction must lie in (0, 1]")
    return total_steps - int(round(total_steps * window_fraction))


def _stats_from(total_steps, window_start, s, c, refl, hist, rec, form) -> TrajectoryStats:
    if c[9] >= 0:
        raise StartedOutsideDomain(f"trajectory left the wedge at step {int(c[9])}")
    n_window = int(c[2])
    lf = c[3] / n_window
    uf = c[4] / n_window
    return TrajectoryStats(
        steps=total_steps,
        tail_window=(window_start, total_steps),
        final=BinState(int(c[0]), int(c[1])),
        lower_gap_min=float(s[0]), lower_gap_max=float(s[1]),
        upper_gap_min=float(s[2]), upper_gap_max=float(s[3]),
        upper_gap_form=form,
        reflect_up_count=int(c[5]), reflect_right_count=int(c[6]), jump_up_count=int(c[7]),
        reflection_times=refl,
        jump_up_counts_per_interval=hist,
        lower_fraction=float(lf), upper_fraction=float(uf),
        attachment=_attachment(lf, uf),
        trajectory=rec if rec is not None and len(rec) else None,
    )


def run_with_stats(params: FeedbackParams, boundary: BoundarySpec, start: BinState,
                   total_steps: int, r: float = 5.0, rng: _rng.Stream | None = None, *,
                   seed: int = 0, stream: int = 0, lower_threshold: float | None = None,
                   upper_threshold: float | None = None, record_every: int = 0,
                   max_reflection_times: int = 100_000,
                   window_fraction: float = 0.5) -> TrajectoryStats:
    """Simulate ``total_steps`` moves and summarise the tail of the path.

    Step t uses draw t of the stream (``rng`` if given, else ``(seed, stream)``).
    Gap extrema, attachment fractions and the jumps-up histogram refer to the
    tail window, the last ``window_fraction`` of the steps (by default
    ``[total_steps // 2, total_steps]``); reflection counts cover the whole run.
    The wedge is closed under the moves once upper(x) - lower(x + 2) >= 1;
    a path that leaves it raises :class:`StartedOutsideDomain`.
    """
    if rng is not None:
        seed, stream = rng.seed, rng.index
    lo, up, mode, form, lt, ut, s_alpha = _kernel_args(
        params, boundary, start, total_steps, r, lower_threshold, upper_threshold)
    window_start = _window_start(total_steps, window_fraction)
    key, idx = _rng.as_u64(seed), _rng.as_u64(stream, "stream")
    s, c, refl, hist, rec = _run(params.beta1, params.beta2, lo, up, start.x, start.y, total_steps,
                                 key, idx, window_start, mode, float(r), s_alpha, lt, ut,
                                 record_every, max_reflection_times)
    return _stats_from(total_steps, window_start, s, c, refl, hist, rec, form)


def run_many(params: FeedbackParams, boundary: BoundarySpec, start: BinState, total_steps: int,
             runs: int, seed: int, r: float = 5.0, first_run: int = 0,
             lower_threshold: float | None = None,
             upper_threshold: float | None = None,
             window_fraction: float = 0.5) -> list[TrajectoryStats]:
    """Independent trajectories; run i uses stream ``first_run + i``."""
    lo, up, mode, form, lt, ut, s_alpha = _kernel_args(
        params, boundary, start, total_steps, r, lower_threshold, upper_threshold)
    window_start = _window_start(total_steps, window_fraction)
    stats, counts, hists = _run_batch(params.beta1, params.beta2, lo, up, start.x, start.y,
                                      total_steps, _rng.as_u64(seed), first_run, runs, window_start, mode,
                                      float(r), s_alpha, lt, ut)
    empty = np.empty(0, dtype=np.int64)
    return [_stats_from(total_steps, window_start, stats[i], counts[i], empty, hists[i], None, form)
            for i in range(runs)]
