"""Seeded point samplers for the three domains.

Samples are produced in fixed-size blocks; block ``b`` of a run seeded with
``seed`` always draws from ``SeedSequence(seed, spawn_key=(stream, b))``, so a
sample's value depends only on ``(seed, stream, index)`` and never on how the
blocks are distributed over workers.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .geometry import Domain, DomainKind

BLOCK = 8192

# Half-space: horizontal coordinates uniform on [-10, 10], height log-uniform.
HALF_WIDTH = 10.0
HALF_LOG_HEIGHT = (-4.0, 2.0)
# Ball: this fraction of the points is pushed to radius >= BALL_SHELL.
BALL_SHELL_FRACTION = 0.1
BALL_SHELL = 0.99
# Punctured space: radius log-uniform.
PUNCTURED_LOG_RADIUS = (-4.0, 4.0)

THREADS_ENV = "MEANMETRICS_THREADS"


def default_threads() -> int:
    value = os.environ.get(THREADS_ENV)
    if value:
        return max(1, int(value))
    return min(4, os.cpu_count() or 1)


def block_rng(seed: int, block: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream, block))))


def _directions(rng, m, n):
    v = rng.standard_normal((m, n))
    norm = np.linalg.norm(v, axis=1, keepdims=True)
    while np.any(norm == 0):  # pragma: no cover - measure zero
        bad = norm[:, 0] == 0
        v[bad] = rng.standard_normal((int(bad.sum()), n))
        norm = np.linalg.norm(v, axis=1, keepdims=True)
    return v / norm


def sample_points(domain: Domain, rng: np.random.Generator, m: int) -> np.ndarray:
    """Draw ``m`` points of ``domain`` as an ``(m, n)`` array."""
    n = domain.dim
    if domain.kind is DomainKind.HALF_SPACE:
        pts = np.empty((m, n))
        pts[:, :-1] = rng.uniform(-HALF_WIDTH, HALF_WIDTH, (m, n - 1))
        pts[:, -1] = 10.0 ** rng.uniform(*HALF_LOG_HEIGHT, m)
        return pts
    u = _directions(rng, m, n)
    if domain.kind is DomainKind.UNIT_BALL:
        r = rng.random(m) ** (1.0 / n)
        shell = rng.random(m) < BALL_SHELL_FRACTION
        r[shell] = BALL_SHELL + (1.0 - BALL_SHELL) * rng.random(int(shell.sum()))
        r = np.where(r >= 1.0, np.nextafter(1.0, 0.0), r)
        r = np.maximum(r, 1e-300)
        return u * r[:, None]
    r = 10.0 ** rng.uniform(*PUNCTURED_LOG_RADIUS, m)
    return u * r[:, None]


def sample_tuple_block(domain: Domain, seed: int, block: int, size: int, arity: int,
                       stream: int = 0) -> list[np.ndarray]:
    rng = block_rng(seed, block, stream)
    return [sample_points(domain, rng, size) for _ in range(arity)]


def blocks(n: int, block: int = BLOCK):
    """(block index, size) pairs covering ``n`` samples."""
    return [(b, min(block, n - b * block)) for b in range((n + block - 1) // block)]


def map_blocks(fn, n: int, threads: int | None = None):
    """Apply ``fn(block_index, size)`` over all blocks; results in block order."""
    parts = blocks(n)
    threads = default_threads() if threads is None else threads
    if threads <= 1 or len(parts) <= 1:
        return [fn(b, size) for b, size in parts]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda p: fn(*p), parts))


def sample_pairs(domain: Domain, n: int, seed: int, stream: int = 1):
    """``n`` independent pairs as two ``(n, dim)`` arrays, assembled block-wise."""
    parts = [sample_tuple_block(domain, seed, b, size, 2, stream) for b, size in blocks(n)]
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])
