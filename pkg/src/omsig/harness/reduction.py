"""Reduction mechanics made executable.

Everything here needs secrets an attacker never sees: the setup exponents
(d, x1, x2) and the registered signing keys.  The trapdoor view packages
those for tests; it exists only in memory and has no serialization.

Provided machinery:

- an exponent-side verifier that agrees with the pairing verifier on every
  input (the ground truth used to cross-check verification),
- the strip operation turning an aggregate forgery into a base-scheme
  forgery under the target signer's composite key,
- the extractor that maps a valid-but-dishonest aggregate to a nontrivial
  solution of the double-pairing relation e(E, H) * e(F, D) = 1,
- the d-twist constructor, the only known way to manufacture such
  dishonest aggregates, which requires d and therefore lives here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .. import ds, sas
from ..errors import HarnessFault
from ..groups import SystemRng, pairing_product_is_one, sample_nonzero_scalar
from ..groups.rng import Rng


@dataclass(frozen=True)
class TrapdoorView:
    """Setup exponents plus every registered secret key, indexed by the
    canonical bytes of the matching public key."""

    d: int
    x1: int
    x2: int
    secrets: dict = field(default_factory=dict)

    def add_key(self, pk: sas.PublicKey, sk: sas.SecretKey) -> None:
        self.secrets[pk.to_bytes()] = sk

    def secret_for(self, pk: sas.PublicKey) -> sas.SecretKey:
        try:
            return self.secrets[pk.to_bytes()]
        except KeyError:
            raise HarnessFault("trapdoor view does not know this key") from None


def setup_with_trapdoor(
    msg_len: int = 1, group=None, rng: Rng | None = None
) -> tuple[sas.SharedParams, TrapdoorView]:
    """Shared-parameter setup that hands back the toxic waste."""
    params, secrets = sas._setup_with_secrets(msg_len, group, rng)
    return params, TrapdoorView(d=secrets.d, x1=secrets.x1, x2=secrets.x2)


def _message_exponents(
    view: TrapdoorView,
    params: sas.SharedParams,
    keys: Sequence[sas.PublicKey],
    msgs: Sequence[Sequence[int]],
    skip: int | None = None,
) -> tuple[int, int]:
    """(sum m*y1, sum m*y2) over all signers except ``skip``."""
    p = params.group.order
    s1 = 0
    s2 = 0
    for i, (pk, msg) in enumerate(zip(keys, msgs, strict=True)):
        if i == skip:
            continue
        sk = view.secret_for(pk)
        for m, (y1, y2) in zip(msg, sk.pairs, strict=True):
            s1 += m * y1
            s2 += m * y2
    return s1 % p, s2 % p


def exponent_verify(
    view: TrapdoorView,
    params: sas.SharedParams,
    keys: Sequence[sas.PublicKey],
    msgs: Sequence[Sequence[int]],
    sig: ds.Signature,
) -> bool:
    """Pairing-free verification using the setup exponents.

    Decides C * B^-d == A^(x2 - d*x1 + sum m*(y2 - d*y1)) behind the same
    input gates as the pairing verifier, so the two agree on every input,
    honest or tampered.  Raises if some key is unknown to the view.
    """
    if len(keys) != len(msgs):
        return False
    if len(keys) > sas.MAX_CHAIN_LEN:
        return False
    p = params.group.order
    exponent = (view.x2 - view.d * view.x1) % p
    for pk, msg in zip(keys, msgs):
        if pk.msg_len != params.msg_len or len(msg) != params.msg_len:
            return False
        sk = view.secret_for(pk)
        for m, (y1, y2) in zip(msg, sk.pairs):
            m %= p
            if m == 0:
                return False
            exponent += m * (y2 - view.d * y1)
    if sig.a.is_identity():
        return False
    lhs = sig.c * sig.b ** (-view.d % p)
    return lhs == sig.a ** (exponent % p)


def honest_form(
    view: TrapdoorView,
    params: sas.SharedParams,
    keys: Sequence[sas.PublicKey],
    msgs: Sequence[Sequence[int]],
    sig: ds.Signature,
) -> bool:
    """True iff B carries exactly the honest exponent x1 + sum m*y1."""
    s1, _ = _message_exponents(view, params, keys, msgs)
    return sig.b == sig.a ** ((view.x1 + s1) % params.group.order)


def d_twist(
    view: TrapdoorView,
    params: sas.SharedParams,
    sig: ds.Signature,
    t: int | None = None,
    rng: Rng | None = None,
) -> ds.Signature:
    """Produce the valid-but-dishonest variant (A, B*G^t, C*G^(t*d)).

    The twist preserves the verification verdict for any t but breaks the
    honest form of B; constructing it requires the setup exponent d.
    """
    p = params.group.order
    if t is None:
        rng = rng or SystemRng()
        t = sample_nonzero_scalar(rng, p)
    elif t % p == 0:
        raise ValueError("twist exponent must be nonzero")
    return ds.Signature(
        a=sig.a,
        b=sig.b * params.g1**t,
        c=sig.c * params.g1 ** (t * view.d % p),
    )


def composite_ds_pk(params: sas.SharedParams, target_pk: sas.PublicKey) -> ds.DsPublicKey:
    """Base-scheme key formed from the shared elements plus one signer's V_j."""
    return ds.DsPublicKey(h=params.h, d=params.d, u=params.u, v=target_pk.v)


def strip_to_ds(
    params: sas.SharedParams,
    keys: Sequence[sas.PublicKey],
    msgs: Sequence[Sequence[int]],
    sig: ds.Signature,
    target_index: int,
    cosigner_secrets: Mapping[bytes, sas.SecretKey],
) -> tuple[tuple, ds.Signature]:
    """Peel every cosigner's contribution off a verifying aggregate.

    ``target_index`` is 0-based.  Only the cosigners' secrets are needed;
    the stripped triple verifies as a base-scheme signature on the target's
    message under :func:`composite_ds_pk` whenever the aggregate is in
    honest form.  Faults if the aggregate does not verify to begin with.
    """
    if not sas.verify(params, keys, msgs, sig):
        raise HarnessFault("aggregate to strip does not verify")
    if not 0 <= target_index < len(keys):
        raise HarnessFault("target index outside the key list")
    p = params.group.order
    s1 = 0
    s2 = 0
    for i, (pk, msg) in enumerate(zip(keys, msgs)):
        if i == target_index:
            continue
        blob = pk.to_bytes()
        if blob not in cosigner_secrets:
            raise HarnessFault("missing a cosigner secret for the strip")
        sk = cosigner_secrets[blob]
        for m, (y1, y2) in zip(msg, sk.pairs):
            s1 += m * y1
            s2 += m * y2
    stripped = ds.Signature(
        a=sig.a,
        b=sig.b * sig.a ** (-s1 % p),
        c=sig.c * sig.a ** (-s2 % p),
    )
    target_msg = tuple(m % p for m in msgs[target_index])
    return target_msg, stripped


@dataclass(frozen=True)
class DbpSolution:
    """Candidate (E, F) for the double-pairing relation."""

    e: object
    f: object

    def is_trivial(self) -> bool:
        return self.e.is_identity() and self.f.is_identity()


def dbp_extract(
    view: TrapdoorView,
    params: sas.SharedParams,
    keys: Sequence[sas.PublicKey],
    msgs: Sequence[Sequence[int]],
    sig: ds.Signature,
):
    """Extract (E, F) from a verifying aggregate; None when it is honest.

        E = A^(x2 + sum m*y2) * C^-1,    F = B * A^(-x1 - sum m*y1)

    For a verifying input, e(E, H) * e(F, D) = 1 always holds, and
    (E, F) = (1, 1) exactly when B has the honest exponent, so a non-None
    result is a genuine double-pairing solution.  Faults when the aggregate
    does not verify.
    """
    if not sas.verify(params, keys, msgs, sig):
        raise HarnessFault("aggregate to extract from does not verify")
    p = params.group.order
    s1, s2 = _message_exponents(view, params, keys, msgs)
    e = sig.a ** ((view.x2 + s2) % p) * sig.c.inverse()
    f = sig.b * sig.a ** ((-view.x1 - s1) % p)
    solution = DbpSolution(e=e, f=f)
    if solution.is_trivial():
        return None
    return solution


def dbp_check(solution: DbpSolution, h, d) -> bool:
    """True iff (E, F) is nontrivial and e(E, h) * e(F, d) is the identity."""
    if solution.is_trivial():
        return False
    return pairing_product_is_one([(solution.e, h), (solution.f, d)])


def oms_reduction_check(params, keys, m: int, sig) -> bool:
    """Ordered-scheme forgeries map to aggregate-scheme forgeries intact.

    Expands the common message into the position-bound vectors (m, 1)..(m, n)
    and verifies the very same triple under the aggregate scheme.  Faults if
    the input does not verify as an ordered multi-signature in the first
    place (the mapping is only claimed for valid forgeries).
    """
    from .. import oms

    if not oms.verify_list(params, keys, m, sig):
        raise HarnessFault("input does not verify as an ordered multi-signature")
    msgs = oms.indexed_messages(m, len(keys))
    return sas.verify(params, keys, msgs, sig)
