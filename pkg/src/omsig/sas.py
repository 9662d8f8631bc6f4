"""Sequential aggregate signatures on vector messages with shared parameters.

The per-signer key shrinks to the (V_j) elements alone because the mixing
elements (H, D, U) and the chain base (G, X1, X2) move into shared public
parameters; every signer must use the same ones.  An aggregate is the usual
(A, B, C) triple:  signer n verifies the aggregate so far, then folds in

    A_n = A_{n-1}^r,
    B_n = (B_{n-1} * A_{n-1}^(sum_j m_{n,j}*y_{n,j,1}))^r,
    C_n = (C_{n-1} * A_{n-1}^(sum_j m_{n,j}*y_{n,j,2}))^r,

starting from the base (G, X1, X2).  Verification of a whole chain is a
single 3-pair product check regardless of its length.

Message coordinates must be nonzero here (a zero coordinate would erase a
signer's contribution), which is also enforced by the verifier.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .ds import Signature
from .errors import (
    BadHeader,
    BadLength,
    DuplicateKey,
    InvalidChain,
    InvalidParams,
    TooManySigners,
    ZeroMessage,
)
from .groups import (
    CURVE_IDS,
    SystemRng,
    TYPE_PK,
    TYPE_PP,
    get_group,
    group_from_id,
    pairing_product_is_one,
    sample_nonzero_scalar,
    unwrap,
    wrap,
)
from .groups.rng import Rng

_PP_KIND_SHARED = 0x01

#: chains longer than this will not serialize; envelope sanity bound
MAX_CHAIN_LEN = 2**16


@dataclass(frozen=True)
class SharedParams:
    """Trusted-setup output shared by every signer.

    The setup exponents (d, x1, x2) are discarded after generation; what
    remains satisfies the publicly checkable relation
    e(G, U) * e(X1, D) == e(X2, H), which is asserted whenever parameters
    are loaded from bytes.
    """

    group: object
    g1: object  # G, the chain base
    g2: object  # second-group generator (carried for completeness)
    x1: object  # G^x1
    x2: object  # G^x2
    h: object  # H
    d: object  # D = H^d
    u: object  # U = H^(x2 - d*x1)
    msg_len: int

    def consistency_ok(self) -> bool:
        """Publicly checkable relation binding (G, X1, X2) to (H, D, U)."""
        return pairing_product_is_one(
            [(self.g1, self.u), (self.x1, self.d), (self.x2.inverse(), self.h)]
        )

    def base_signature(self) -> Signature:
        """The empty-chain aggregate (G, X1, X2)."""
        return Signature(a=self.g1, b=self.x1, c=self.x2)

    def to_bytes(self) -> bytes:
        return self._encode(n_max=0)

    def _encode(self, n_max: int) -> bytes:
        payload = (
            bytes([CURVE_IDS[self.group.name], _PP_KIND_SHARED])
            + self.g2.to_bytes()
            + self.msg_len.to_bytes(2, "big")
            + n_max.to_bytes(4, "big")
            + self.g1.to_bytes()
            + self.x1.to_bytes()
            + self.x2.to_bytes()
            + self.h.to_bytes()
            + self.d.to_bytes()
            + self.u.to_bytes()
        )
        return wrap(TYPE_PP, payload)

    @classmethod
    def from_bytes(cls, blob: bytes) -> "SharedParams":
        params, _ = _decode_shared(blob)
        return params


def _decode_shared(blob: bytes):
    """Decode shared parameters; returns (params, n_max_field)."""
    payload = unwrap(blob, TYPE_PP)
    if len(payload) < 2:
        raise BadLength("parameter payload truncated")
    group = group_from_id(payload[0])
    if payload[1] != _PP_KIND_SHARED:
        raise BadHeader("not a shared-parameter envelope")
    body = payload[2:]
    want = group.g2_bytes + 6 + 3 * group.g1_bytes + 3 * group.g2_bytes
    if len(body) != want:
        raise BadLength("parameter payload has the wrong size")
    off = 0
    g2 = group.decode_g2(body[off : off + group.g2_bytes])
    off += group.g2_bytes
    msg_len = int.from_bytes(body[off : off + 2], "big")
    n_max = int.from_bytes(body[off + 2 : off + 6], "big")
    off += 6
    g1 = group.decode_g1(body[off : off + group.g1_bytes])
    off += group.g1_bytes
    x1 = group.decode_g1(body[off : off + group.g1_bytes])
    off += group.g1_bytes
    x2 = group.decode_g1(body[off : off + group.g1_bytes])
    off += group.g1_bytes
    h = group.decode_g2(body[off : off + group.g2_bytes])
    off += group.g2_bytes
    d = group.decode_g2(body[off : off + group.g2_bytes])
    off += group.g2_bytes
    u = group.decode_g2(body[off : off + group.g2_bytes])
    if msg_len < 1:
        raise BadHeader("parameter envelope carries a zero message arity")
    params = SharedParams(
        group=group, g1=g1, g2=g2, x1=x1, x2=x2, h=h, d=d, u=u, msg_len=msg_len
    )
    if g1.is_identity() or h.is_identity():
        raise InvalidParams("degenerate generator in parameters")
    if not params.consistency_ok():
        raise InvalidParams("parameters fail their consistency relation")
    return params, n_max


@dataclass(frozen=True)
class PublicKey:
    """Per-signer key: one V_j element per message coordinate."""

    v: tuple

    @property
    def msg_len(self) -> int:
        return len(self.v)

    def to_bytes(self) -> bytes:
        # canonical bytes double as the key's identity in duplicate scans
        # and registries, so cache them
        cached = self.__dict__.get("_bytes")
        if cached is not None:
            return cached
        group = self.v[0].group
        payload = bytes([CURVE_IDS[group.name], 0x00]) + len(self.v).to_bytes(
            2, "big"
        )
        for elem in self.v:
            payload += elem.to_bytes()
        blob = wrap(TYPE_PK, payload)
        object.__setattr__(self, "_bytes", blob)
        return blob

    @classmethod
    def from_bytes(cls, blob: bytes) -> "PublicKey":
        payload = unwrap(blob, TYPE_PK)
        if len(payload) < 4:
            raise BadLength("public-key payload truncated")
        group = group_from_id(payload[0])
        if payload[1] != 0x00:
            raise BadHeader("not an aggregate-scheme public key envelope")
        count = int.from_bytes(payload[2:4], "big")
        if count < 1:
            raise BadHeader("public key carries no elements")
        body = payload[4:]
        step = group.g2_bytes
        if len(body) != count * step:
            raise BadLength("public-key payload has the wrong size")
        v = tuple(
            group.decode_g2(body[i * step : (i + 1) * step]) for i in range(count)
        )
        return cls(v=v)


@dataclass(frozen=True)
class SecretKey:
    """Per-coordinate exponent pairs (y_{j,1}, y_{j,2}), all nonzero."""

    pairs: tuple

    @property
    def msg_len(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class SetupSecrets:
    """Setup-time exponents; kept only by the reduction harness."""

    d: int
    x1: int
    x2: int


def _setup_with_secrets(
    msg_len: int, group=None, rng: Rng | None = None
) -> tuple[SharedParams, SetupSecrets]:
    if msg_len < 1:
        raise ValueError("message arity must be at least 1")
    group = group or get_group()
    rng = rng or SystemRng()
    p = group.order
    g1 = group.g1_base ** sample_nonzero_scalar(rng, p)
    g2 = group.g2_base ** sample_nonzero_scalar(rng, p)
    d = sample_nonzero_scalar(rng, p)
    x1 = sample_nonzero_scalar(rng, p)
    x2 = sample_nonzero_scalar(rng, p)
    # H from the nonzero elements; a degenerate H would void verification
    h = group.g2_base ** sample_nonzero_scalar(rng, p)
    params = SharedParams(
        group=group,
        g1=g1,
        g2=g2,
        x1=g1**x1,
        x2=g1**x2,
        h=h,
        d=h**d,
        u=h ** ((x2 - d * x1) % p),
        msg_len=msg_len,
    )
    return params, SetupSecrets(d=d, x1=x1, x2=x2)


def setup(msg_len: int = 1, group=None, rng: Rng | None = None) -> SharedParams:
    """Run trusted setup; the mixing exponents never leave this call."""
    params, _ = _setup_with_secrets(msg_len, group, rng)
    return params


def keygen(params: SharedParams, rng: Rng | None = None):
    """Sample nonzero exponent pairs and publish V_j = H^y_{j,2} * (D^y_{j,1})^-1."""
    group = params.group
    rng = rng or SystemRng()
    p = group.order
    pairs = tuple(
        (sample_nonzero_scalar(rng, p), sample_nonzero_scalar(rng, p))
        for _ in range(params.msg_len)
    )
    hd = (params.h, params.d)
    v = tuple(group.g2_multiexp(hd, (y2, p - y1)) for (y1, y2) in pairs)
    return PublicKey(v=v), SecretKey(pairs=pairs)


def kverify(params: SharedParams, pk: PublicKey, sk: SecretKey) -> bool:
    """Check every V_j against the claimed exponent pair."""
    if pk.msg_len != sk.msg_len:
        raise ValueError("public and secret key arity differ")
    if pk.msg_len != params.msg_len:
        return False
    return all(
        vj == params.h**y2 * (params.d**y1).inverse()
        for vj, (y1, y2) in zip(pk.v, sk.pairs)
    )


def _normalize_msg(params: SharedParams, msg: Sequence[int]) -> tuple:
    if len(msg) != params.msg_len:
        raise ValueError(
            f"message has {len(msg)} coordinates, parameters expect {params.msg_len}"
        )
    reduced = tuple(m % params.group.order for m in msg)
    if any(m == 0 for m in reduced):
        raise ZeroMessage("message coordinates must be nonzero")
    return reduced


def sign_append(
    params: SharedParams,
    sk: SecretKey,
    prior_keys: Sequence[PublicKey],
    prior_msgs: Sequence[Sequence[int]],
    msg: Sequence[int],
    prior_sig: Signature | None = None,
    rng: Rng | None = None,
    *,
    _skip_prior_check: bool = False,
) -> Signature:
    """Fold one more signature into the chain.

    The aggregate so far is verified against (prior_keys, prior_msgs) before
    anything is added; ``_skip_prior_check`` exists for benchmark loops that
    have just verified the same aggregate and is not part of the public
    contract.
    """
    msg = _normalize_msg(params, msg)
    if len(prior_keys) != len(prior_msgs):
        raise ValueError("prior key list and message list differ in length")
    if len(prior_keys) + 1 > MAX_CHAIN_LEN:
        raise TooManySigners(f"chains are capped at {MAX_CHAIN_LEN} signers")
    group = params.group
    rng = rng or SystemRng()
    p = group.order

    if not prior_keys:
        if prior_sig is not None:
            raise ValueError("an empty chain cannot carry a prior signature")
        prior_sig = params.base_signature()
    else:
        if prior_sig is None:
            raise ValueError("a non-empty chain needs its aggregate signature")
        if not _skip_prior_check and not verify(
            params, prior_keys, prior_msgs, prior_sig
        ):
            raise InvalidChain("prior aggregate does not verify")
        seen = set()
        for pk in prior_keys:
            blob = pk.to_bytes()
            if blob in seen:
                raise DuplicateKey("prior key list contains a duplicate")
            seen.add(blob)

    r = sample_nonzero_scalar(rng, p)
    e1 = sum(m * y1 for m, (y1, _) in zip(msg, sk.pairs)) % p
    e2 = sum(m * y2 for m, (_, y2) in zip(msg, sk.pairs)) % p
    a_prev = prior_sig.a
    return Signature(
        a=a_prev**r,
        b=(prior_sig.b * a_prev**e1) ** r,
        c=(prior_sig.c * a_prev**e2) ** r,
    )


def verify(
    params: SharedParams,
    keys: Sequence[PublicKey],
    msgs: Sequence[Sequence[int]],
    sig: Signature,
) -> bool:
    """One 3-pair product check; returns False on any malformed input.

    An empty chain against the base aggregate (G, X1, X2) reduces to the
    parameter consistency relation and accepts.
    """
    if len(keys) != len(msgs):
        return False
    if len(keys) > MAX_CHAIN_LEN:
        return False
    group = params.group
    p = group.order
    flat_v = []
    flat_m = []
    for pk, msg in zip(keys, msgs):
        if pk.msg_len != params.msg_len or len(msg) != params.msg_len:
            return False
        for vj, m in zip(pk.v, msg):
            m %= p
            if m == 0:
                return False
            flat_v.append(vj)
            flat_m.append(m)
    if sig.a.is_identity():
        return False
    t = params.u * group.g2_multiexp(flat_v, flat_m)
    return pairing_product_is_one(
        [(sig.a, t), (sig.b, params.d), (sig.c.inverse(), params.h)]
    )
