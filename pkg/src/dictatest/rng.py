"""Deterministic random-stream derivation.

Every randomized operation takes an integer seed and derives independent
sub-streams by counter, so any trial (or chunk of trials) is reproducible in
isolation and results never depend on worker count or scheduling.
"""

from __future__ import annotations

import numpy as np


def derive_rng(*key: int) -> np.random.Generator:
    """Generator for the sub-stream addressed by an integer key path."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(key)))


def seed_key(seed) -> tuple[int, ...]:
    """Normalize a seed (int, or tuple of ints for sub-streams) to a key."""
    if isinstance(seed, (tuple, list)):
        return tuple(int(s) for s in seed)
    return (int(seed),)
