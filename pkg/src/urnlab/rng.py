"""Counter-based random streams (Philox4x32-10).

Every draw is a pure function of ``(seed, stream, counter)``:

* key     = (seed & 0xFFFFFFFF, seed >> 32)
* counter = (counter & 0xFFFFFFFF, counter >> 32,
             stream & 0xFFFFFFFF, stream >> 32)

The first two output words ``w0, w1`` of one Philox block give a 53-bit
uniform ``((w0 >> 5) * 2**26 + (w1 >> 6)) / 2**53`` in [0, 1).  One block is
consumed per uniform.  Replica ``r`` of a campaign seeded with ``seed`` uses
stream ``r``, so the mapping (seed, r) -> stream is injective and any port
that implements Philox4x32-10 with this layout reproduces the draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba as nb
import numpy as np

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint64(0x9E3779B9)
_W1 = np.uint64(0xBB67AE85)
_LO = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_S5 = np.uint64(5)
_S6 = np.uint64(6)

SEED_MAX = 2**64 - 1


@nb.njit(cache=True)
def philox4x32(c0, c1, c2, c3, k0, k1):
    """Ten Philox rounds on a 4x32 counter with a 2x32 key (uint64 carriers)."""
    for _ in range(10):
        p0 = _M0 * c0
        p1 = _M1 * c2
        n0 = ((p1 >> _S32) ^ c1 ^ k0) & _LO
        n1 = p1 & _LO
        n2 = ((p0 >> _S32) ^ c3 ^ k1) & _LO
        n3 = p0 & _LO
        c0, c1, c2, c3 = n0, n1, n2, n3
        k0 = (k0 + _W0) & _LO
        k1 = (k1 + _W1) & _LO
    return c0, c1, c2, c3


@nb.njit(cache=True)
def uniform(seed, stream, counter):
    """Uniform double in [0, 1) for draw ``counter`` of ``stream``."""
    s = np.uint64(seed)
    r = np.uint64(stream)
    c = np.uint64(counter)
    w0, w1, _, _ = philox4x32(c & _LO, c >> _S32, r & _LO, r >> _S32, s & _LO, s >> _S32)
    return ((w0 >> _S5) * 67108864.0 + (w1 >> _S6)) * (1.0 / 9007199254740992.0)


@nb.njit(cache=True)
def exponential(seed, stream, counter, rate):
    """Exp(rate) draw; uses one uniform."""
    return -math.log1p(-uniform(seed, stream, counter)) / rate


@nb.njit(cache=True)
def gamma_unit_scale(seed, stream, counter, shape):
    """Gamma(shape, 1) for shape >= 1 (Marsaglia-Tsang).

    Normals come from Box-Muller.  Returns ``(value, next_counter)`` since the
    number of uniforms consumed depends on rejections.
    """
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    while True:
        u1 = uniform(seed, stream, counter)
        u2 = uniform(seed, stream, counter + 1)
        counter += 2
        z = math.sqrt(-2.0 * math.log1p(-u1)) * math.cos(2.0 * math.pi * u2)
        v = 1.0 + c * z
        if v <= 0.0:
            continue
        v = v * v * v
        u = uniform(seed, stream, counter)
        counter += 1
        if math.log1p(-u) < 0.5 * z * z + d - d * v + d * math.log(v):
            return d * v, counter


def as_u64(value: int, what: str = "seed") -> np.uint64:
    """Checked conversion so numba sees an unsigned 64-bit key, not int64."""
    if not 0 <= int(value) <= SEED_MAX:
        raise ValueError(f"{what} must fit in 64 bits, got {value}")
    return np.uint64(value)


@dataclass
class Stream:
    """A sequential view over one counter-based stream.

    ``random()`` mirrors :meth:`numpy.random.Generator.random` so a Stream can be
    handed to any function expecting a generator-like object.
    """

    seed: int
    index: int
    counter: int = 0

    def __post_init__(self):
        as_u64(self.seed)
        as_u64(self.index, "stream index")

    def random(self) -> float:
        u = uniform(as_u64(self.seed), as_u64(self.index), self.counter)
        self.counter += 1
        return float(u)

    def draws(self, n: int) -> np.ndarray:
        out = _fill(as_u64(self.seed), as_u64(self.index), self.counter, n)
        self.counter += n
        return out


@nb.njit(cache=True)
def _fill(seed, stream, start, n):
    out = np.empty(n)
    for j in range(n):
        out[j] = uniform(seed, stream, start + j)
    return out


def derive_replica_stream(seed: int, replica_index: int) -> Stream:
    """Stream for replica ``replica_index`` of a campaign seeded with ``seed``."""
    return Stream(seed, replica_index)


def normal_samples(seed: int, n: int, stream: int = 0) -> np.ndarray:
    """Standard normal samples via Box-Muller on one stream (two uniforms each)."""
    u = _fill(as_u64(seed), as_u64(stream, "stream"), 0, 2 * n)
    return np.sqrt(-2.0 * np.log1p(-u[0::2])) * np.cos(2.0 * np.pi * u[1::2])
