"""Reproducible random streams. A stream is fixed by (seed, stream_id) and independent substreams are derived with
numpy's SeedSequence spawn keys, so parallel workers never share state."""
from typing import Tuple

import numpy

__all__ = ["RngStream"]


class RngStream:
    """Owns one :class:`numpy.random.Generator`. Identical (seed, stream_id) give identical sample sequences."""

    def __init__(self, seed: int, stream_id: int=0, *, spawn_key: Tuple[int, ...]=()) -> None:
        if not 0 <= int(seed) < 2 ** 64:
            raise ValueError('Seed must be an unsigned 64 bit integer', seed)
        if int(stream_id) < 0:
            raise ValueError('stream_id must not be negative', stream_id)
        self._seed = int(seed)
        self._stream_id = int(stream_id)
        self._spawn_key = (self._stream_id,) + tuple(spawn_key)
        self._generator = numpy.random.default_rng(numpy.random.SeedSequence(self._seed, spawn_key=self._spawn_key))

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def stream_id(self) -> int:
        return self._stream_id

    @property
    def generator(self) -> numpy.random.Generator:
        return self._generator

    def substream(self, index: int) -> 'RngStream':
        """Independent child stream. Deterministic in (seed, stream_id, index) and unaffected by draws on self."""
        if int(index) < 0:
            raise ValueError('Substream index must not be negative', index)
        return RngStream(self._seed, self._stream_id, spawn_key=self._spawn_key[1:] + (int(index),))

    def multinomial(self, n: int, probabilities: numpy.ndarray) -> numpy.ndarray:
        return self._generator.multinomial(n, probabilities)

    def uniform(self, low: float=0., high: float=1., size=None):
        return self._generator.uniform(low, high, size)

    def integers(self, low: int, high: int, size=None):
        return self._generator.integers(low, high, size)

    def __repr__(self) -> str:
        return 'RngStream(seed={}, stream_id={}, spawn_key={})'.format(self._seed, self._stream_id,
                                                                      self._spawn_key[1:])
