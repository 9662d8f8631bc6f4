"""Randomness sources and scalar sampling.

All scheme operations take an injectable randomness source so every random
value in the package is pinnable in tests.  :class:`SystemRng` draws from
the OS CSPRNG and is the default; :class:`SeededRng` is a deterministic
SHA-256 counter generator whose output is stable across platforms and
Python versions.
"""

from __future__ import annotations

import hashlib
import secrets

_SAMPLE_BYTES = 48  # 384 bits of entropy per scalar; mod-p bias < 2^-128


class SystemRng:
    """Operating-system randomness; the production default."""

    def read(self, n: int) -> bytes:
        return secrets.token_bytes(n)


class SeededRng:
    """Deterministic stream: SHA-256("omsig-rng" || seed || counter) blocks.

    For tests and reproducible fixtures only.
    """

    def __init__(self, seed: int | bytes) -> None:
        if isinstance(seed, int):
            if seed < 0:
                raise ValueError("seed must be non-negative")
            seed = seed.to_bytes(max(1, (seed.bit_length() + 7) // 8), "big")
        self._key = b"omsig-rng" + bytes(seed)
        self._counter = 0
        self._buffer = b""

    def read(self, n: int) -> bytes:
        while len(self._buffer) < n:
            block = hashlib.sha256(
                self._key + self._counter.to_bytes(8, "big")
            ).digest()
            self._counter += 1
            self._buffer += block
        out, self._buffer = self._buffer[:n], self._buffer[n:]
        return out


Rng = SystemRng | SeededRng


def sample_scalar(rng: Rng, order: int) -> int:
    """Uniform element of Z_p (bias negligible in the draw width)."""
    return int.from_bytes(rng.read(_SAMPLE_BYTES), "big") % order


def sample_nonzero_scalar(rng: Rng, order: int) -> int:
    """Uniform element of Z_p \\ {0}; resamples on the zero outcome."""
    while True:
        value = sample_scalar(rng, order)
        if value != 0:
            return value
