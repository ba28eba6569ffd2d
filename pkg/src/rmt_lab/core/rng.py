"""
Reproducible Random Streams

Counter-based substreams: every (seed, stream_id) pair keys its own Philox
generator, so trial i of a batch draws the same numbers whatever the thread
count or scheduling order.
"""

from typing import Optional, Sequence, Union

import numpy as np

from .exceptions import InvalidArgumentError

_UINT64_MAX = 2**64 - 1

Size = Optional[Union[int, Sequence[int]]]


class RngStream:
    """
    One reproducible random substream.

    The stream owns a numpy Generator backed by Philox with key
    (seed, stream_id). Samplers only call the methods below, which lets tests
    substitute a stub that returns forced draws.
    """

    def __init__(self, seed: int, stream_id: int = 0):
        """
        Initialize the substream.

        Args:
            seed: 64-bit run seed
            stream_id: 64-bit substream index (for example the trial number)
        """
        for name, value in (("seed", seed), ("stream_id", stream_id)):
            if not 0 <= int(value) <= _UINT64_MAX:
                raise InvalidArgumentError(f"{name} must fit in 64 unsigned bits, got {value}")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        self._generator = np.random.Generator(np.random.Philox(key=key))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"

    @property
    def generator(self) -> np.random.Generator:
        return self._generator

    def normal(self, loc: float = 0.0, scale: float = 1.0, size: Size = None) -> np.ndarray:
        return self._generator.normal(loc, scale, size)

    def standard_normal(self, size: Size = None) -> np.ndarray:
        return self._generator.standard_normal(size)

    def gamma(self, shape, scale: float = 1.0, size: Size = None) -> np.ndarray:
        return self._generator.gamma(shape, scale, size)

    def uniform(self, low: float = 0.0, high: float = 1.0, size: Size = None) -> np.ndarray:
        return self._generator.uniform(low, high, size)

    def permutation(self, x) -> np.ndarray:
        return self._generator.permutation(x)
