"""Deterministic hash-to-field for application messages.

The schemes sign scalars in Z_p*; applications carry bytes.  The map is
SHA-512 over a length-prefixed domain tag, a retry counter, and the data,
reduced mod p.  A zero outcome (probability ~2^-254) bumps the counter and
rehashes, so the result is always usable as a message scalar.
"""

from __future__ import annotations

import hashlib

DS_TAG = b"omsig/ds/v1"
SAS_TAG = b"omsig/sas/v1"
OMS_TAG = b"omsig/oms/v1"


def encode_message(data: bytes, domain_tag: bytes, order: int) -> int:
    """Hash arbitrary bytes into Z_p*; deterministic per (data, tag)."""
    if len(domain_tag) > 255:
        raise ValueError("domain tag too long")
    prefix = bytes([len(domain_tag)]) + domain_tag
    counter = 0
    while True:
        digest = hashlib.sha512(
            prefix + counter.to_bytes(4, "big") + data
        ).digest()
        value = int.from_bytes(digest, "big") % order
        if value != 0:
            return value
        counter += 1


def sas_coordinate_tag(index: int) -> bytes:
    """Per-coordinate tag for hashing bytes into a vector message slot."""
    return SAS_TAG + b"/coord/" + str(index).encode()
