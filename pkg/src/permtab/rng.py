"""Random number streams.

Every random draw in the package comes from numpy's ``PCG64`` bit generator
seeded through ``SeedSequence``.  Parallel work derives child streams with
``SeedSequence.spawn``, so results depend only on the seed and the chunk
index, never on how many workers ran.
"""

from __future__ import annotations

import numpy as np

DEFAULT_SEED = 20090316
RNG_ALGORITHM = "numpy.PCG64/SeedSequence"


def make_rng(seed: int | np.random.SeedSequence | None = None) -> np.random.Generator:
    if seed is None:
        seed = DEFAULT_SEED
    return np.random.Generator(np.random.PCG64(seed))


def substreams(seed: int | None, count: int) -> list[np.random.Generator]:
    """``count`` independent generators derived from ``seed``."""
    ss = np.random.SeedSequence(DEFAULT_SEED if seed is None else seed)
    return [np.random.Generator(np.random.PCG64(child)) for child in ss.spawn(count)]
