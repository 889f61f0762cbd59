"""Keyed random streams.

Every stochastic operation draws from a generator derived from a base seed plus
a tuple of keys (collection label, replicate index, document index, ...), so a
replicate's stream never depends on how many other replicates ran before it or
on which thread ran it.
"""

import hashlib
from typing import Union

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF

Key = Union[int, str, bytes]


def _key_to_int(part: Key) -> int:
    # Python's hash() is salted per process; blake2b is stable everywhere.
    if isinstance(part, int):
        return part & _MASK64
    data = part if isinstance(part, bytes) else str(part).encode("utf-8")
    return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "little")


def seed_sequence(base_seed: int, *parts: Key) -> np.random.SeedSequence:
    """SeedSequence whose entropy is the base seed followed by the hashed keys."""
    if base_seed < 0 or base_seed > _MASK64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return np.random.SeedSequence([base_seed, *(_key_to_int(p) for p in parts)])


def child_rng(base_seed: int, *parts: Key) -> np.random.Generator:
    """A Generator deterministically derived from base_seed and parts."""
    return np.random.Generator(np.random.PCG64(seed_sequence(base_seed, *parts)))
