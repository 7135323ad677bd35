"""Splittable deterministic random source.

Built on the SplitMix64 mixing function in counter mode: every draw is a
pure function of (seed, stream id, draw index), so streams can be derived
per work item and replayed bit-for-bit on any platform and numpy version.
Integer draws are exactly reproducible everywhere; Gaussian draws go through
IEEE-754 double math (log/cos) and match to the last bit on any platform
with a correctly rounded libm, which in practice is every supported one.
"""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB
_INV_2_53 = 2.0 ** -53


def _mix64(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX_A) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX_B) & _MASK64
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_MIX_A)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_MIX_B)
    return z ^ (z >> np.uint64(31))


def derive_stream(seed: int, labels: Iterable[int] = ()) -> "RandomSource":
    """Derive an independent stream from a seed and a path of integer labels.

    A pure function of its inputs: the same (seed, labels) always yields the
    same stream, and distinct label paths yield statistically independent
    ones.  An empty path is the root stream.
    """
    stream_id = 0
    for lab in labels:
        stream_id = _mix64(stream_id ^ _mix64((int(lab) + _GOLDEN) & _MASK64))
    return RandomSource(seed, stream_id)


class RandomSource:
    """One deterministic draw stream, identified by (seed, stream id).

    Stateful only in its draw counter; confine each instance to a single
    worker.  ``digest()`` summarizes the draws consumed so far, which fully
    determines them.
    """

    __slots__ = ("seed", "stream_id", "_base", "_counter")

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = int(seed) & _MASK64
        self.stream_id = int(stream_id) & _MASK64
        self._base = _mix64(self.seed ^ _mix64((self.stream_id + _GOLDEN) & _MASK64))
        self._counter = 0

    @property
    def draws(self) -> int:
        return self._counter

    def digest(self) -> str:
        return f"{self.seed:016x}:{self.stream_id:016x}:{self._counter}"

    def next_u64(self) -> int:
        self._counter += 1
        return _mix64((self._base + self._counter * _GOLDEN) & _MASK64)

    def u64_array(self, n: int) -> np.ndarray:
        """Bulk draw; consumes exactly n counter steps, same values as n
        scalar next_u64 calls."""
        idx = np.arange(self._counter + 1, self._counter + n + 1, dtype=np.uint64)
        self._counter += n
        with np.errstate(over="ignore"):
            return _mix64_array(np.uint64(self._base) + idx * np.uint64(_GOLDEN))

    def random(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * _INV_2_53

    def uniform(self, low: float, high: float) -> float:
        return low + self.random() * (high - low)

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n). n must be positive."""
        if n <= 0:
            raise ValueError("randint bound must be positive")
        return (self.next_u64() * n) >> 64

    def randint_signed(self, magnitude: int) -> int:
        """Uniform integer in [-magnitude, +magnitude]."""
        return self.randint(2 * magnitude + 1) - magnitude

    def normal_array(self, shape, mean: float = 0.0, std: float = 1.0) -> np.ndarray:
        """Box-Muller normals; consumes 2*ceil(n/2) counter steps."""
        n = int(np.prod(shape, dtype=np.int64)) if shape else 1
        if n == 0:
            return np.empty(shape, dtype=np.float64)
        pairs = (n + 1) // 2
        raw = self.u64_array(2 * pairs)
        u1 = ((raw[0::2] >> np.uint64(11)).astype(np.float64) + 1.0) * _INV_2_53  # (0, 1]
        u2 = (raw[1::2] >> np.uint64(11)).astype(np.float64) * _INV_2_53  # [0, 1)
        radius = np.sqrt(-2.0 * np.log(u1))
        theta = (2.0 * math.pi) * u2
        out = np.concatenate([radius * np.cos(theta), radius * np.sin(theta)])[:n]
        return (mean + std * out).reshape(shape)
