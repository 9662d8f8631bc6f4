"""Randomizable base signature scheme on vector messages.

A signature is a triple (A, B, C) of G1 elements:

    A = G^r,  B = A^(x1 + sum_j m_j*y_{j,1}),  C = A^(x2 + sum_j m_j*y_{j,2})

verified against a G2-side key (H, D, U, (V_j)) through one 3-pair product
check.  Signatures can be refreshed by raising all three components to a
fresh nonzero exponent, which preserves the verification verdict and the
signature distribution.

The message space is all of (Z_p)^l: zero coordinates are legal here, unlike
in the aggregate schemes built on top.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import BadHeader, BadLength
from .groups import (
    CURVE_IDS,
    SystemRng,
    TYPE_PK,
    TYPE_PP,
    TYPE_SIG,
    get_group,
    group_from_id,
    pairing_product_is_one,
    sample_nonzero_scalar,
    unwrap,
    wrap,
)
from .groups.rng import Rng

_PP_KIND_DS = 0x00


@dataclass(frozen=True)
class DsParams:
    """Public parameters: the group plus generators of both source groups."""

    group: object
    g1: object
    g2: object

    def to_bytes(self) -> bytes:
        payload = (
            bytes([CURVE_IDS[self.group.name], _PP_KIND_DS])
            + self.g1.to_bytes()
            + self.g2.to_bytes()
        )
        return wrap(TYPE_PP, payload)

    @classmethod
    def from_bytes(cls, blob: bytes) -> "DsParams":
        payload = unwrap(blob, TYPE_PP)
        if len(payload) < 2:
            raise BadLength("parameter payload truncated")
        group = group_from_id(payload[0])
        if payload[1] != _PP_KIND_DS:
            raise BadHeader("not a base-signature parameter envelope")
        body = payload[2:]
        if len(body) != group.g1_bytes + group.g2_bytes:
            raise BadLength("parameter payload has the wrong size")
        g1 = group.decode_g1(body[: group.g1_bytes])
        g2 = group.decode_g2(body[group.g1_bytes :])
        return cls(group=group, g1=g1, g2=g2)


@dataclass(frozen=True)
class DsPublicKey:
    """Verification key (H, D, U) plus one V_j per message coordinate."""

    h: object
    d: object
    u: object
    v: tuple

    @property
    def msg_len(self) -> int:
        return len(self.v)

    def to_bytes(self) -> bytes:
        group = self.h.group
        payload = bytes([CURVE_IDS[group.name], 0x01]) + len(self.v).to_bytes(
            2, "big"
        )
        for elem in (self.h, self.d, self.u, *self.v):
            payload += elem.to_bytes()
        return wrap(TYPE_PK, payload)

    @classmethod
    def from_bytes(cls, blob: bytes) -> "DsPublicKey":
        payload = unwrap(blob, TYPE_PK)
        if len(payload) < 4:
            raise BadLength("public-key payload truncated")
        group = group_from_id(payload[0])
        if payload[1] != 0x01:
            raise BadHeader("not a base-signature public key envelope")
        count = int.from_bytes(payload[2:4], "big")
        body = payload[4:]
        step = group.g2_bytes
        if len(body) != (3 + count) * step:
            raise BadLength("public-key payload has the wrong size")
        elems = [
            group.decode_g2(body[i * step : (i + 1) * step]) for i in range(3 + count)
        ]
        return cls(h=elems[0], d=elems[1], u=elems[2], v=tuple(elems[3:]))


@dataclass(frozen=True)
class DsSecretKey:
    """Signing exponents x1, x2 and the per-coordinate pairs (y_{j,1}, y_{j,2})."""

    x1: int
    x2: int
    pairs: tuple

    @property
    def msg_len(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class Signature:
    """Source-group triple (A, B, C); the same shape for all three schemes."""

    a: object
    b: object
    c: object

    def to_bytes(self) -> bytes:
        group = self.a.group
        payload = (
            bytes([CURVE_IDS[group.name]])
            + self.a.to_bytes()
            + self.b.to_bytes()
            + self.c.to_bytes()
        )
        return wrap(TYPE_SIG, payload)

    @classmethod
    def from_bytes(cls, blob: bytes) -> "Signature":
        payload = unwrap(blob, TYPE_SIG)
        if len(payload) < 1:
            raise BadLength("signature payload truncated")
        group = group_from_id(payload[0])
        body = payload[1:]
        step = group.g1_bytes
        if len(body) != 3 * step:
            raise BadLength("signature payload has the wrong size")
        return cls(
            a=group.decode_g1(body[:step]),
            b=group.decode_g1(body[step : 2 * step]),
            c=group.decode_g1(body[2 * step :]),
        )


def setup(group=None, rng: Rng | None = None) -> DsParams:
    """Sample fresh generators of both source groups."""
    group = group or get_group()
    rng = rng or SystemRng()
    g1 = group.g1_base ** sample_nonzero_scalar(rng, group.order)
    g2 = group.g2_base ** sample_nonzero_scalar(rng, group.order)
    return DsParams(group=group, g1=g1, g2=g2)


def keygen(params: DsParams, msg_len: int, rng: Rng | None = None):
    """Generate a keypair for vector messages of the given arity.

    The key-mixing exponent d links D = H^d and U = H^(x2 - d*x1) and is
    discarded before returning; only the public combinations survive.
    """
    if msg_len < 1:
        raise ValueError("message arity must be at least 1")
    group = params.group
    rng = rng or SystemRng()
    p = group.order
    d = sample_nonzero_scalar(rng, p)
    x1 = sample_nonzero_scalar(rng, p)
    x2 = sample_nonzero_scalar(rng, p)
    pairs = tuple(
        (sample_nonzero_scalar(rng, p), sample_nonzero_scalar(rng, p))
        for _ in range(msg_len)
    )
    # H is sampled from the nonzero elements: a degenerate H would make the
    # verification equation vacuous.
    h = group.g2_base ** sample_nonzero_scalar(rng, p)
    dd = h**d
    u = h ** ((x2 - d * x1) % p)
    v = tuple(h ** ((y2 - d * y1) % p) for (y1, y2) in pairs)
    pk = DsPublicKey(h=h, d=dd, u=u, v=v)
    sk = DsSecretKey(x1=x1, x2=x2, pairs=pairs)
    del d
    return pk, sk


def sign(
    params: DsParams, sk: DsSecretKey, msg: Sequence[int], rng: Rng | None = None
) -> Signature:
    """Sign a vector message; zero coordinates are allowed here."""
    if len(msg) != sk.msg_len:
        raise ValueError(
            f"message has {len(msg)} coordinates, key expects {sk.msg_len}"
        )
    group = params.group
    rng = rng or SystemRng()
    p = group.order
    r = sample_nonzero_scalar(rng, p)
    e1 = (sk.x1 + sum(m * y1 for m, (y1, _) in zip(msg, sk.pairs))) % p
    e2 = (sk.x2 + sum(m * y2 for m, (_, y2) in zip(msg, sk.pairs))) % p
    a = params.g1**r
    return Signature(a=a, b=a**e1, c=a**e2)


def verify(pk: DsPublicKey, msg: Sequence[int], sig: Signature) -> bool:
    """One 3-pair product check; returns False on any malformed input."""
    if len(msg) != pk.msg_len:
        return False
    if sig.a.is_identity():
        return False
    group = pk.h.group
    p = group.order
    t = pk.u * group.g2_multiexp(pk.v, [m % p for m in msg])
    return pairing_product_is_one(
        [(sig.a, t), (sig.b, pk.d), (sig.c.inverse(), pk.h)]
    )


def rerandomize(sig: Signature, rng: Rng | None = None, t: int | None = None) -> Signature:
    """Refresh a signature to (A^t, B^t, C^t) for nonzero t.

    The result verifies exactly when the input does, and for honest inputs is
    distributed like a fresh signature on the same message.
    """
    group = sig.a.group
    if t is None:
        rng = rng or SystemRng()
        t = sample_nonzero_scalar(rng, group.order)
    elif t % group.order == 0:
        raise ValueError("refresh exponent must be nonzero")
    return Signature(a=sig.a**t, b=sig.b**t, c=sig.c**t)
