"""Deterministic random generator construction shared across modules."""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Return a PCG64 generator keyed by ``seed`` plus optional substream ids.

    Seeds are folded into the unsigned 64-bit range so negative values are
    accepted. The same (seed, stream) pair always yields the same stream.
    """
    return np.random.default_rng([int(seed) & _MASK64, *[int(s) for s in stream]])
