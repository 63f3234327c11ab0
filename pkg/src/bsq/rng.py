"""Deterministic counter-based random streams.

Every randomized routine in the package draws from a Philox generator
keyed by (seed, stream index).  Distinct stream indices give statistically
independent streams, and a stream's output depends only on its key, so
sweeps can be chunked or parallelized in any order without changing the
result.
"""

import numpy as np
from numpy.random import Generator, Philox

_MASK64 = (1 << 64) - 1


def stream(seed: int, index: int = 0) -> Generator:
    """Return the generator for stream `index` under the global `seed`."""
    key = np.array([seed & _MASK64, index & _MASK64], dtype=np.uint64)
    return Generator(Philox(key=key))
