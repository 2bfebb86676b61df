"""Seeded, splittable random streams for chunked Monte Carlo.

Chunk ``c`` of a run seeded with ``seed`` always draws from the PCG64 stream
``SeedSequence(seed, spawn_key=(c,))``. Output therefore depends only on
``(seed, chunk_size)``, never on how many threads process the chunks.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from numbers import Integral

import numpy as np

DEFAULT_CHUNK_SIZE = 1 << 16


def check_seed(seed):
    if isinstance(seed, bool) or not isinstance(seed, Integral) or not 0 <= seed < 2**64:
        raise ValueError(f"seed must be an integer in [0, 2**64), got {seed!r}")
    return int(seed)


def chunk_generator(seed, index):
    ss = np.random.SeedSequence(check_seed(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(ss))


def chunk_sizes(n, chunk_size=DEFAULT_CHUNK_SIZE):
    if chunk_size < 1:
        raise ValueError("chunk_size must be positive")
    full, rest = divmod(n, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def map_chunks(fn, n, seed, chunk_size=DEFAULT_CHUNK_SIZE, workers=1):
    """Run ``fn(rng, count)`` on every chunk and return the results in chunk order."""
    sizes = chunk_sizes(n, chunk_size)
    tasks = [(chunk_generator(seed, c), size) for c, size in enumerate(sizes)]
    if workers is None or workers <= 1 or len(tasks) == 1:
        return [fn(rng, size) for rng, size in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda t: fn(*t), tasks))
