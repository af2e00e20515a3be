"""Splittable, replayable random streams on top of the Philox counter-based generator.

Streams are identified by (master_seed, stream_index); distinct pairs are
statistically independent and any stream can be re-materialized bit-exactly,
so worker scheduling never affects results.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

_U64 = 2**64


@dataclass(frozen=True)
class RngStream:
    """Handle for one independent random stream.

    ``generator()`` returns a fresh ``numpy.random.Generator`` positioned at
    ``counter``; calling it twice replays the same samples.
    """

    master_seed: int
    stream_index: int = 0
    counter: int = 0

    def __post_init__(self):
        if self.counter < 0:
            raise ConfigError("counter must be nonnegative")

    def generator(self) -> np.random.Generator:
        key = np.array([self.master_seed % _U64, self.stream_index % _U64], dtype=np.uint64)
        bitgen = np.random.Philox(key=key)
        if self.counter:
            bitgen.advance(self.counter)
        return np.random.Generator(bitgen)

    def child(self, offset: int) -> "RngStream":
        """Derived stream with a shifted index (for sub-tasks of a worker)."""
        return RngStream(self.master_seed, self.stream_index + offset, 0)


def make_streams(master_seed: int, n: int) -> list[RngStream]:
    """n pairwise-independent replayable streams under one master seed."""
    if n < 1:
        raise ConfigError("need at least one stream")
    return [RngStream(master_seed, i) for i in range(n)]


def as_generator(stream) -> np.random.Generator:
    """Accept either an RngStream or a live Generator."""
    if isinstance(stream, np.random.Generator):
        return stream
    if isinstance(stream, RngStream):
        return stream.generator()
    raise ConfigError(f"expected RngStream or numpy Generator, got {type(stream)!r}")


def run_blocks(n_total: int, block_size: int, worker_fn, master_seed: int,
               workers: int = 1, stream_offset: int = 0) -> list:
    """Split ``n_total`` items into fixed-size blocks and map ``worker_fn`` over them.

    Block b processes ``sizes[b]`` items with stream (master_seed, stream_offset + b).
    The block layout depends only on (n_total, block_size), never on ``workers``,
    and results are returned in block order, so output is identical for any
    worker count.
    """
    if n_total < 1:
        raise ConfigError("n_total must be positive")
    sizes = []
    left = n_total
    while left > 0:
        take = min(block_size, left)
        sizes.append(take)
        left -= take
    tasks = [(b, RngStream(master_seed, stream_offset + b), sizes[b]) for b in range(len(sizes))]
    if workers <= 1 or len(tasks) == 1:
        return [worker_fn(stream, n) for _, stream, n in tasks]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(worker_fn, stream, n) for _, stream, n in tasks]
        return [f.result() for f in futures]
