"""Ordered multi-signatures on a common message with key aggregation.

This is the two-coordinate aggregate scheme driven with the vector message
(m, i) at position i: the common message fills the first slot and the
signer's position the second, which is what binds the signing order.  The
pleasant consequence is that an ordered key list compresses to a constant
size aggregated key

    K1 = prod_i V_{i,1},        K2 = prod_i V_{i,2}^i,

and verification is the usual 3-pair product check against
U * K1^m * K2 no matter how many signers took part.

Parameters, keys and chain arithmetic are shared with the aggregate scheme;
anything signed here verifies there under the expanded (m, i) messages and
vice versa.
"""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass
from typing import Sequence

from . import sas
from .ds import Signature
from .errors import (
    BadHeader,
    BadLength,
    DuplicateKey,
    InvalidChain,
    PositionOverflow,
    TooManySigners,
    ZeroMessage,
)
from .groups import (
    CURVE_IDS,
    SystemRng,
    TYPE_APK,
    group_from_id,
    pairing_product_is_one,
    sample_nonzero_scalar,
    unwrap,
    wrap,
)
from .groups.rng import Rng

DEFAULT_N_MAX = 1024

# positions are scalars; the signer bound must stay far below the group
# order, and below 2^(security-1) - 1 for the 128-bit tier
_N_MAX_CEILING = 2**127 - 1

PublicKey = sas.PublicKey
SecretKey = sas.SecretKey


@dataclass(frozen=True)
class OmsParams(sas.SharedParams):
    """Shared parameters specialized to two-coordinate messages, plus the
    signer bound enforced by aggregation and signing."""

    n_max: int = DEFAULT_N_MAX

    def __post_init__(self) -> None:
        if self.msg_len != 2:
            raise ValueError("ordered multi-signatures need message arity 2")
        if not 0 < self.n_max < _N_MAX_CEILING:
            raise ValueError("signer bound out of range")

    def to_bytes(self) -> bytes:
        return self._encode(n_max=self.n_max)

    @classmethod
    def from_bytes(cls, blob: bytes) -> "OmsParams":
        shared, n_max = sas._decode_shared(blob)
        if shared.msg_len != 2:
            raise BadHeader("parameter envelope does not carry arity-2 messages")
        return cls(
            group=shared.group,
            g1=shared.g1,
            g2=shared.g2,
            x1=shared.x1,
            x2=shared.x2,
            h=shared.h,
            d=shared.d,
            u=shared.u,
            msg_len=2,
            n_max=n_max or DEFAULT_N_MAX,
        )


@dataclass(frozen=True)
class AggregatedPublicKey:
    """Constant-size digest (K1, K2) of an ordered public-key list."""

    k1: object
    k2: object

    def to_bytes(self) -> bytes:
        group = self.k1.group
        payload = (
            bytes([CURVE_IDS[group.name]]) + self.k1.to_bytes() + self.k2.to_bytes()
        )
        return wrap(TYPE_APK, payload)

    @classmethod
    def from_bytes(cls, blob: bytes) -> "AggregatedPublicKey":
        payload = unwrap(blob, TYPE_APK)
        if len(payload) < 1:
            raise BadLength("aggregated-key payload truncated")
        group = group_from_id(payload[0])
        body = payload[1:]
        step = group.g2_bytes
        if len(body) != 2 * step:
            raise BadLength("aggregated-key payload has the wrong size")
        return cls(k1=group.decode_g2(body[:step]), k2=group.decode_g2(body[step:]))


def setup(
    group=None, rng: Rng | None = None, n_max: int = DEFAULT_N_MAX
) -> OmsParams:
    """Trusted setup; identical to the aggregate-scheme setup at arity 2."""
    shared, _ = sas._setup_with_secrets(2, group, rng)
    return OmsParams(
        group=shared.group,
        g1=shared.g1,
        g2=shared.g2,
        x1=shared.x1,
        x2=shared.x2,
        h=shared.h,
        d=shared.d,
        u=shared.u,
        msg_len=2,
        n_max=n_max,
    )


def keygen(params: OmsParams, rng: Rng | None = None):
    """Two exponent pairs, two published elements; shares the aggregate
    scheme's key generation (and its randomness schedule) exactly."""
    return sas.keygen(params, rng)


def kverify(params: OmsParams, pk: PublicKey, sk: SecretKey) -> bool:
    return sas.kverify(params, pk, sk)


def kagg(params: OmsParams, keys: Sequence[PublicKey]) -> AggregatedPublicKey:
    """Compress an ordered key list into (K1, K2).

    Order matters: position i lands in the exponent of V_{i,2}.  Rejects
    lists above the signer bound and lists with duplicate keys.
    """
    keys = list(keys)
    if len(keys) > params.n_max:
        raise TooManySigners(
            f"{len(keys)} signers exceed the bound of {params.n_max}"
        )
    seen = set()
    for pk in keys:
        blob = pk.to_bytes()
        if blob in seen:
            raise DuplicateKey("ordered key list contains a duplicate")
        seen.add(blob)
    group = params.group
    k1 = group.g2_product(pk.v[0] for pk in keys)
    k2 = group.g2_multiexp(
        [pk.v[1] for pk in keys], range(1, len(keys) + 1)
    )
    return AggregatedPublicKey(k1=k1, k2=k2)


def indexed_messages(m: int, n: int) -> list[tuple[int, int]]:
    """Expand a common message into the vector messages (m, 1) .. (m, n).

    This is the bridge to the aggregate scheme: an ordered chain on m
    verifies there against exactly these vectors and the same key list.
    """
    if n < 1:
        raise ValueError("need at least one signer position")
    if m == 0:
        raise ZeroMessage("common message must be nonzero")
    return [(m, i) for i in range(1, n + 1)]


def sign_append(
    params: OmsParams,
    sk: SecretKey,
    prior_keys: Sequence[PublicKey],
    m: int,
    prior_sig: Signature | None = None,
    rng: Rng | None = None,
    *,
    _skip_prior_check: bool = False,
) -> Signature:
    """Sign the common message at position len(prior_keys) + 1.

    The position is derived, never caller-supplied: the exponent
    m*y_{1,j} + n*y_{2,j} is what makes the order verifiable, so letting a
    caller pick n would invite misuse.  ``_skip_prior_check`` is for
    benchmark-style loops that have just verified the same aggregate
    themselves; duplicates and the signer bound are enforced regardless.
    """
    group = params.group
    p = group.order
    m %= p
    if m == 0:
        raise ZeroMessage("common message must be nonzero")
    position = len(prior_keys) + 1
    if position > params.n_max:
        raise PositionOverflow(
            f"position {position} exceeds the signer bound of {params.n_max}"
        )
    rng = rng or SystemRng()

    if not prior_keys:
        if prior_sig is not None:
            raise ValueError("an empty chain cannot carry a prior signature")
        prior_sig = params.base_signature()
    else:
        if prior_sig is None:
            raise ValueError("a non-empty chain needs its aggregate signature")
        if _skip_prior_check:
            seen = set()
            for pk in prior_keys:
                blob = pk.to_bytes()
                if blob in seen:
                    raise DuplicateKey("ordered key list contains a duplicate")
                seen.add(blob)
        else:
            apk = kagg(params, prior_keys)  # raises on duplicates / overflow
            if not verify(params, apk, m, prior_sig):
                raise InvalidChain("prior aggregate does not verify")

    r = sample_nonzero_scalar(rng, p)
    (y11, y12), (y21, y22) = sk.pairs
    e1 = (m * y11 + position * y21) % p
    e2 = (m * y12 + position * y22) % p
    a_prev = prior_sig.a
    return Signature(
        a=a_prev**r,
        b=(prior_sig.b * a_prev**e1) ** r,
        c=(prior_sig.c * a_prev**e2) ** r,
    )


def verify(
    params: OmsParams, apk: AggregatedPublicKey, m: int, sig: Signature
) -> bool:
    """One 3-pair product check against the aggregated key."""
    m %= params.group.order
    if m == 0:
        return False
    if sig.a.is_identity():
        return False
    t = params.u * apk.k1**m * apk.k2
    return pairing_product_is_one(
        [(sig.a, t), (sig.b, params.d), (sig.c.inverse(), params.h)]
    )


def verify_list(
    params: OmsParams, keys: Sequence[PublicKey], m: int, sig: Signature
) -> bool:
    """Recompute the aggregated key from the claimed list, then verify.

    The scheme itself verifies against an aggregated key; binding that key
    to an intended list is the application's job, and this helper is the
    explicit way to do it.
    """
    try:
        apk = kagg(params, keys)
    except (TooManySigners, DuplicateKey):
        return False
    return verify(params, apk, m, sig)


class ApkCache:
    """Optional cache of aggregated keys, keyed by the ordered list digest.

    The digest is SHA-256 over the concatenated canonical key bytes, so two
    lists collide only if they are the same list in the same order.
    """

    def __init__(self) -> None:
        self._entries: dict[bytes, AggregatedPublicKey] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    @staticmethod
    def list_digest(keys: Sequence[PublicKey]) -> bytes:
        h = hashlib.sha256()
        for pk in keys:
            h.update(pk.to_bytes())
        return h.digest()

    def aggregate(
        self, params: OmsParams, keys: Sequence[PublicKey]
    ) -> AggregatedPublicKey:
        digest = self.list_digest(keys)
        with self._lock:
            cached = self._entries.get(digest)
        if cached is not None:
            self.hits += 1
            return cached
        apk = kagg(params, keys)
        with self._lock:
            self._entries.setdefault(digest, apk)
        self.misses += 1
        return apk
