"""Counter-based random streams and the batched Monte Carlo driver.

Each batch ``b`` of a run seeded with ``seed`` draws from its own Philox
stream keyed by ``(seed, b)``. Within a batch, draws are consumed in sample
order, so sample ``j`` of batch ``b`` always sees the same numbers no matter
how batches are scheduled across threads.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

__all__ = ["MCConfig", "substream", "sample_exponentials", "sample_uniform", "worker_count", "run_batches"]

SEED_MASK = (1 << 64) - 1
# keys reserved for auxiliary draws (t points of a scan, random instances)
AUX_KEY = SEED_MASK


@dataclass(frozen=True)
class MCConfig:
    """Sample budget and seed of a Monte Carlo run.

    ``workers`` only caps parallelism and never changes results.
    """

    samples: int = 100_000
    batches: int = 100
    seed: int = 42
    workers: int | None = None

    def __post_init__(self):
        if not (isinstance(self.samples, (int, np.integer)) and isinstance(self.batches, (int, np.integer))):
            raise TypeError("samples and batches must be integers")
        if self.batches < 2:
            raise ValueError("need at least 2 batches for a batch-means standard error")
        if self.samples < self.batches:
            raise ValueError("samples must be at least batches")
        if self.samples % self.batches:
            raise ValueError(f"batches ({self.batches}) must divide samples ({self.samples})")
        if not 0 <= int(self.seed) <= SEED_MASK:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def batch_size(self):
        return self.samples // self.batches


def substream(seed, index):
    """Independent generator for stream ``index`` of master ``seed``."""
    key = np.array([int(seed) & SEED_MASK, int(index) & SEED_MASK], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_uniform(stream, size):
    """Uniforms on the open interval (0, 1); exact zeros are redrawn."""
    u = stream.random(size)
    zero = u == 0.0
    while zero.any():
        u[zero] = stream.random(int(zero.sum()))
        zero = u == 0.0
    return u


def sample_exponentials(stream, n):
    """Standard one-sided exponentials ``-log U``. ``n`` may be a shape tuple."""
    return -np.log(sample_uniform(stream, n))


def worker_count(requested=None):
    if requested is None:
        env = os.environ.get("XSEC_THREADS", "").strip()
        requested = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(requested))


def run_batches(cfg, fn):
    """Evaluate ``fn(stream, batch_index)`` for every batch.

    Results are returned in batch-index order, so any fold over them is
    independent of the number of worker threads.
    """
    workers = min(worker_count(cfg.workers), cfg.batches)

    def one(b):
        return fn(substream(cfg.seed, b), b)

    if workers == 1:
        return [one(b) for b in range(cfg.batches)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(cfg.batches)))
