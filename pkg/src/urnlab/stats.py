from __future__ import annotations

import math

import numpy as np

from urnlab.errors import TooFewSamples


def normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def _normal_cdf_array(z: np.ndarray) -> np.ndarray:
    from scipy.special import erfc

    return 0.5 * erfc(-z / math.sqrt(2.0))


def ks_statistic(samples) -> float:
    """One-sample Kolmogorov-Smirnov distance to the standard normal CDF.

    At the i-th order statistic (1-based) the empirical CDF jumps from
    (i-1)/n to i/n; both gaps are checked.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n < 2:
        raise TooFewSamples(f"need at least 2 samples, got {n}")
    cdf = _normal_cdf_array(x)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - cdf)
    d_minus = np.max(cdf - (i - 1) / n)
    return float(max(d_plus, d_minus))
