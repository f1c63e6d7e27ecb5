"""Deterministic pseudo-random bench objects; reproducible without fixtures."""
from __future__ import annotations

import random


def make_object(size_bytes: int, seed: int = 0) -> bytes:
    """Pseudo-random bytes fully determined by (size, seed)."""
    if size_bytes < 0:
        raise ValueError("size_bytes must be >= 0")
    rng = random.Random(size_bytes * 1_000_003 + seed)
    return rng.randbytes(size_bytes)
