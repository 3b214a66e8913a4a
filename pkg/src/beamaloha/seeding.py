"""Deterministic seed derivation for independent random sub-streams.

Every random draw in the simulator comes from a ``numpy`` generator whose
seed is derived by hashing a master seed together with purpose tags (short
strings) and integer indices. The hash is SHA-256 over a canonical byte
encoding, so the same inputs give the same stream on any machine, any
Python version, and regardless of the order in which trials execute.
"""
from __future__ import annotations

import hashlib

import numpy as np

_SEED_BYTES = 8


def derive_seed(*parts: int | str) -> int:
    """Hash (master seed, purpose tags, indices) into a 64-bit stream seed.

    Integer parts are encoded as signed 16-byte little-endian values,
    string parts as UTF-8 preceded by a type marker, so e.g. (1, "a")
    and ("1a",) cannot collide.
    """
    h = hashlib.sha256()
    for part in parts:
        if isinstance(part, bool):
            raise TypeError("bool seed parts are ambiguous; use int or str")
        if isinstance(part, int):
            h.update(b"i")
            h.update(part.to_bytes(16, "little", signed=True))
        elif isinstance(part, str):
            data = part.encode("utf-8")
            h.update(b"s")
            h.update(len(data).to_bytes(4, "little"))
            h.update(data)
        else:
            raise TypeError(f"unsupported seed part type: {type(part)!r}")
    return int.from_bytes(h.digest()[:_SEED_BYTES], "little")


def stream(*parts: int | str) -> np.random.Generator:
    """Return an independent PCG64 generator for the given seed parts."""
    return np.random.default_rng(derive_seed(*parts))
