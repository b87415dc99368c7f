"""Deterministic 64-bit seed derivation for ensemble trials.

Trial k of an experiment gets the seed

    splitmix64(splitmix64(splitmix64(master) ^ tag64) ^ k)

where ``tag64`` is the first 8 bytes of blake2b(tag). The chain is pure
integer arithmetic, so derived seeds are identical on every platform and
ensembles can be extended by index without touching earlier trials.
"""

from __future__ import annotations

import hashlib

__all__ = ["derive_seed"]

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_seed(master_seed: int, tag: str, index: int) -> int:
    """Mix (master_seed, experiment tag, trial index) into one 64-bit seed."""
    if index < 0:
        raise ValueError(f"trial index must be >= 0, got {index}")
    tag64 = int.from_bytes(hashlib.blake2b(tag.encode(), digest_size=8).digest(), "little")
    state = _splitmix64(master_seed & _MASK64)
    state = _splitmix64(state ^ tag64)
    return _splitmix64(state ^ index)
