"""Reproducible uniform random number streams.

Every source of randomness in the package flows through a UniformStream,
keyed by a 64-bit seed and a stream id, so that any experiment can be
replayed bit for bit.  Distinct stream ids under one seed give streams
that behave independently (PCG64 seeded through SeedSequence spawn keys).
"""

from __future__ import annotations

import numpy as np

__all__ = ["UniformStream", "rng_stream"]


class UniformStream:
    """A deterministic stream of U(0,1) variates.

    Parameters
    ----------
    seed : int
        Root seed shared by all streams of one experiment.
    stream_id : int or tuple of ints
        Identifies this stream under the root seed.  Tuples let callers
        key sub-streams hierarchically, e.g. ``(n_index, rep)``.
    """

    def __init__(self, seed: int, stream_id: int | tuple[int, ...] = 0):
        key = stream_id if isinstance(stream_id, tuple) else (stream_id,)
        if any(k < 0 for k in key) or seed < 0:
            raise ValueError("seed and stream_id components must be non-negative")
        self.seed = int(seed)
        self.stream_id = key if len(key) > 1 else key[0]
        self._gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(entropy=self.seed, spawn_key=key))
        )

    def uniforms(self, *shape: int) -> np.ndarray:
        """Next block of U[0,1) variates with the given shape."""
        return self._gen.random(shape if shape else None)

    def integers(self, low: int, high: int, size=None):
        return self._gen.integers(low, high, size=size)

    def substream(self, *key: int) -> "UniformStream":
        """Derive an independent child stream keyed below this one."""
        base = self.stream_id if isinstance(self.stream_id, tuple) else (self.stream_id,)
        return UniformStream(self.seed, base + key)

    def __repr__(self) -> str:  # pragma: no cover
        return f"UniformStream(seed={self.seed}, stream_id={self.stream_id})"


def rng_stream(seed: int, stream_id: int = 0) -> UniformStream:
    """Create the uniform stream for (seed, stream_id)."""
    return UniformStream(seed, stream_id)
