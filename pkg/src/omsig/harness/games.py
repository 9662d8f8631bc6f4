"""Unforgeability game runners in the certified-key model.

A game pits a scripted adversary against a challenger holding one target
key.  Strategies are data, not code: an ordered list of steps over a small
vocabulary, so a run is fully determined by (scheme, strategy, seed) and a
transcript can be audited or replayed.

Step vocabulary (fields beyond ``op`` as noted):

- ``keygen``        id          adversary generates its own keypair
- ``register``      id          key-registration query for an own key
- ``message``       id          draw a fresh nonzero message scalar
                                 (vector-valued for the aggregate scheme)
- ``extend_local``  chain, key, message
                                 adversary appends its own signature
- ``sign_query``    chain, message [, store]
                                 the challenger's signing oracle appends the
                                 target's signature
- ``forge``         chain [, permute] | message, sig
                                 emit the final forgery

The verdict is never cached: the transcript re-derives the winning
conditions from its own records, including re-running verification.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from .. import ds, oms, sas
from ..errors import SchemeError, StrategyFault
from ..groups import SystemRng, sample_nonzero_scalar
from ..groups.rng import Rng

TARGET = "target"


@dataclass(frozen=True)
class GameRecord:
    query: str
    args: dict
    response: object

    def args_hash(self) -> str:
        return hashlib.sha256(_canonical(self.args)).hexdigest()

    def response_hash(self) -> str:
        return hashlib.sha256(_canonical(self.response)).hexdigest()


def _canonical(value) -> bytes:
    """Stable bytes for hashing heterogeneous record content."""
    if isinstance(value, bytes):
        return b"b:" + value
    if isinstance(value, str):
        return b"s:" + value.encode()
    if isinstance(value, bool):
        return b"o:" + str(value).encode()
    if isinstance(value, int):
        return b"i:" + str(value).encode()
    if value is None:
        return b"n:"
    if isinstance(value, (list, tuple)):
        return b"l:" + b",".join(_canonical(v) for v in value)
    if isinstance(value, dict):
        items = sorted(value.items())
        return b"d:" + b",".join(
            _canonical(k) + b"=" + _canonical(v) for k, v in items
        )
    if hasattr(value, "to_bytes") and not isinstance(value, type):
        return b"b:" + value.to_bytes()
    raise TypeError(f"cannot canonicalize {type(value)!r}")


@dataclass
class GameTranscript:
    """Ordered query log plus the final forgery and the game context."""

    scheme: str
    strategy: str
    seed: int | None
    records: list = field(default_factory=list)
    forgery: dict | None = None
    _context: dict = field(default_factory=dict, repr=False)

    def conditions(self) -> dict[str, bool]:
        """Re-derive every winning condition from the log alone."""
        if self.forgery is None:
            raise StrategyFault("strategy finished without forging")
        sign_set = set()
        cert_set = set()
        for rec in self.records:
            if rec.query == "register" and rec.response == "accept":
                cert_set.add(rec.args["pk"])
            elif rec.query == "sign" and rec.response is not None:
                sign_set.add(self._sign_set_entry(rec))
        return self._conditions(sign_set, cert_set)

    def verdict(self) -> bool:
        return all(self.conditions().values())

    def _sign_set_entry(self, rec: GameRecord):
        if self.scheme == "oms":
            return (rec.args["message"], len(rec.args["keys"]) + 1)
        if self.scheme == "sas":
            return tuple(rec.args["message"])
        return rec.args["message"]

    def _conditions(self, sign_set, cert_set) -> dict[str, bool]:
        params = self._context["params"]
        target_pk = self._context["target_pk"]
        keys = self.forgery.get("keys")
        sig = self.forgery["sig"]

        if self.scheme == "ds":
            msg = tuple(self.forgery["message"])
            return {
                "forgery_verifies": ds.verify(target_pk, msg, sig),
                "fresh_target_slot": msg not in sign_set,
            }

        if self.scheme == "oms":
            m = self.forgery["message"]
            verifies = len(keys) <= params.n_max and oms.verify_list(
                params, keys, m, sig
            )
            target_blob = target_pk.to_bytes()
            fresh = any(
                pk.to_bytes() == target_blob and (m, i + 1) not in sign_set
                for i, pk in enumerate(keys)
            )
            registered = all(
                pk.to_bytes() == target_blob or pk.to_bytes() in cert_set
                for pk in keys
            )
            return {
                "forgery_verifies": verifies,
                "fresh_target_slot": fresh,
                "cosigners_registered": registered,
            }

        msgs = [tuple(m) for m in self.forgery["message"]]
        verifies = sas.verify(params, keys, msgs, sig)
        target_blob = target_pk.to_bytes()
        fresh = any(
            pk.to_bytes() == target_blob and msgs[i] not in sign_set
            for i, pk in enumerate(keys)
        )
        registered = all(
            pk.to_bytes() == target_blob or pk.to_bytes() in cert_set
            for pk in keys
        )
        return {
            "forgery_verifies": verifies,
            "fresh_target_slot": fresh,
            "cosigners_registered": registered,
        }

    def to_json(self) -> str:
        conditions = self.conditions()
        return json.dumps(
            {
                "scheme": self.scheme,
                "strategy": self.strategy,
                "seed": self.seed,
                "records": [
                    {
                        "query": rec.query,
                        "args_hash": rec.args_hash(),
                        "response_hash": rec.response_hash(),
                    }
                    for rec in self.records
                ],
                "conditions": conditions,
                "verdict": int(all(conditions.values())),
            },
            indent=2,
        )


class _OmsChallenger:
    def __init__(self, group, rng: Rng):
        self.params = oms.setup(group=group, rng=rng)
        self.target_pk, self._target_sk = oms.keygen(self.params, rng)
        self.cert: set[bytes] = set()
        self.rng = rng

    def register(self, pk, sk) -> str:
        if oms.kverify(self.params, pk, sk):
            self.cert.add(pk.to_bytes())
            return "accept"
        return "reject"

    def sign(self, keys, m, sig):
        if keys:
            if any(pk.to_bytes() == self.target_pk.to_bytes() for pk in keys):
                return None
            if any(pk.to_bytes() not in self.cert for pk in keys):
                return None
            try:
                apk = oms.kagg(self.params, keys)
            except SchemeError:
                return None
            if not oms.verify(self.params, apk, m, sig):
                return None
        try:
            return oms.sign_append(self.params, self._target_sk, keys, m, sig, self.rng)
        except SchemeError:
            return None


class _SasChallenger:
    def __init__(self, group, rng: Rng, msg_len: int):
        self.params = sas.setup(msg_len, group=group, rng=rng)
        self.target_pk, self._target_sk = sas.keygen(self.params, rng)
        self.cert: set[bytes] = set()
        self.rng = rng

    def register(self, pk, sk) -> str:
        if sas.kverify(self.params, pk, sk):
            self.cert.add(pk.to_bytes())
            return "accept"
        return "reject"

    def sign(self, keys, prior_msgs, msg, sig):
        if keys:
            if any(pk.to_bytes() not in self.cert for pk in keys):
                return None
            if not sas.verify(self.params, keys, prior_msgs, sig):
                return None
        try:
            return sas.sign_append(
                self.params, self._target_sk, keys, prior_msgs, msg, sig, self.rng
            )
        except SchemeError:
            return None


class _DsChallenger:
    def __init__(self, group, rng: Rng, msg_len: int):
        self.params = ds.setup(group=group, rng=rng)
        self.target_pk, self._target_sk = ds.keygen(self.params, msg_len, rng)
        self.rng = rng

    def sign(self, msg):
        return ds.sign(self.params, self._target_sk, msg, self.rng)


def run_euf_cma_game(
    scheme: str,
    strategy: dict,
    rng: Rng | None = None,
    group=None,
    msg_len: int = 2,
) -> GameTranscript:
    """Execute a scripted strategy against a fresh challenger.

    ``strategy`` is a data dict with a ``steps`` list (see the module
    docstring); ``msg_len`` applies to the vector-message schemes.
    Protocol violations in the script raise :class:`StrategyFault`.
    """
    if scheme not in ("ds", "sas", "oms"):
        raise ValueError(f"unknown scheme {scheme!r}")
    rng = rng or SystemRng()
    seed = strategy.get("seed")
    transcript = GameTranscript(
        scheme=scheme, strategy=strategy.get("name", "<anonymous>"), seed=seed
    )

    if scheme == "oms":
        challenger = _OmsChallenger(group, rng)
    elif scheme == "sas":
        challenger = _SasChallenger(group, rng, msg_len)
    else:
        challenger = _DsChallenger(group, rng, msg_len)
    params = challenger.params
    transcript._context = {"params": params, "target_pk": challenger.target_pk}
    transcript.records.append(
        GameRecord(
            query="setup",
            args={"scheme": scheme},
            response={"pp": params.to_bytes(), "pk": challenger.target_pk.to_bytes()},
        )
    )

    own_keys: dict[str, tuple] = {}
    messages: dict[str, object] = {}
    chains: dict[str, dict] = {}
    stored_sigs: dict[str, ds.Signature] = {}
    p = params.group.order

    def resolve_pk(name: str):
        if name == TARGET:
            return challenger.target_pk
        try:
            return own_keys[name][0]
        except KeyError:
            raise StrategyFault(f"unknown key id {name!r}") from None

    def chain_state(name: str) -> dict:
        if name not in chains:
            chains[name] = {"signers": [], "msgs": [], "sig": None}
        return chains[name]

    for step in strategy["steps"]:
        op = step["op"]

        if op == "keygen":
            if scheme == "ds":
                raise StrategyFault("the base scheme has no cosigner keys")
            own_keys[step["id"]] = (
                sas.keygen(params, rng)
                if scheme == "sas"
                else oms.keygen(params, rng)
            )

        elif op == "register":
            pk, sk = own_keys[step["id"]]
            outcome = challenger.register(pk, sk)
            transcript.records.append(
                GameRecord(
                    query="register", args={"pk": pk.to_bytes()}, response=outcome
                )
            )

        elif op == "message":
            if scheme == "oms":
                messages[step["id"]] = sample_nonzero_scalar(rng, p)
            else:
                arity = params.msg_len if scheme == "sas" else msg_len
                messages[step["id"]] = tuple(
                    sample_nonzero_scalar(rng, p) for _ in range(arity)
                )

        elif op == "extend_local":
            state = chain_state(step["chain"])
            pk, sk = own_keys[step["key"]]
            msg = messages[step["message"]]
            prior_pks = [resolve_pk(s) for s in state["signers"]]
            if scheme == "oms":
                sig = oms.sign_append(params, sk, prior_pks, msg, state["sig"], rng)
            else:
                sig = sas.sign_append(
                    params, sk, prior_pks, state["msgs"], msg, state["sig"], rng
                )
                state["msgs"] = state["msgs"] + [msg]
            state["signers"].append(step["key"])
            state["sig"] = sig

        elif op == "sign_query":
            msg = messages[step["message"]]
            if scheme == "ds":
                sig = challenger.sign(msg)
                transcript.records.append(
                    GameRecord(query="sign", args={"message": msg}, response=sig)
                )
                if "store" in step:
                    stored_sigs[step["store"]] = sig
                continue
            state = chain_state(step["chain"])
            prior_pks = [resolve_pk(s) for s in state["signers"]]
            if scheme == "oms":
                sig = challenger.sign(prior_pks, msg, state["sig"])
                args = {
                    "keys": [pk.to_bytes() for pk in prior_pks],
                    "message": msg,
                }
            else:
                sig = challenger.sign(prior_pks, state["msgs"], msg, state["sig"])
                args = {
                    "keys": [pk.to_bytes() for pk in prior_pks],
                    "prior": [list(m) for m in state["msgs"]],
                    "message": list(msg),
                }
                if sig is not None:
                    state["msgs"] = state["msgs"] + [msg]
            transcript.records.append(
                GameRecord(query="sign", args=args, response=sig)
            )
            if sig is None:
                continue
            state["signers"].append(TARGET)
            state["sig"] = sig

        elif op == "forge":
            if scheme == "ds":
                forgery = {
                    "message": messages[step["message"]],
                    "sig": stored_sigs[step["sig"]],
                }
            else:
                state = chain_state(step["chain"])
                if state["sig"] is None:
                    raise StrategyFault("forging from an empty chain")
                order = list(range(len(state["signers"])))
                if "permute" in step:
                    order = list(step["permute"])
                    if sorted(order) != list(range(len(state["signers"]))):
                        raise StrategyFault("permutation does not match the chain")
                keys = [resolve_pk(state["signers"][i]) for i in order]
                if scheme == "oms":
                    forgery = {
                        "keys": keys,
                        "message": messages[step["message"]]
                        if "message" in step
                        else _only_message(state, messages),
                        "sig": state["sig"],
                    }
                else:
                    forgery = {
                        "keys": keys,
                        "message": [list(state["msgs"][i]) for i in order],
                        "sig": state["sig"],
                    }
            transcript.forgery = forgery
            transcript.records.append(
                GameRecord(
                    query="forge",
                    args={
                        k: v
                        for k, v in forgery.items()
                        if k in ("message", "keys")
                    },
                    response=forgery["sig"],
                )
            )

        else:
            raise StrategyFault(f"unknown strategy op {op!r}")

    if transcript.forgery is None:
        raise StrategyFault("strategy finished without forging")
    return transcript


def _only_message(state: dict, messages: dict):
    """The common message a single-message chain was built on."""
    if len(messages) == 1:
        return next(iter(messages.values()))
    raise StrategyFault("ambiguous common message; name it in the forge step")


BUILTIN_STRATEGIES: dict[str, dict] = {
    # replays a queried (message, position) pair: loses on freshness
    "honest_replay": {
        "name": "honest_replay",
        "scheme": "oms",
        "steps": [
            {"op": "message", "id": "m"},
            {"op": "sign_query", "chain": "c", "message": "m"},
            {"op": "forge", "chain": "c", "message": "m"},
        ],
    },
    # valid chain presented under a transposed list: verification fails
    "order_transposition": {
        "name": "order_transposition",
        "scheme": "oms",
        "steps": [
            {"op": "keygen", "id": "k1"},
            {"op": "register", "id": "k1"},
            {"op": "message", "id": "m"},
            {"op": "extend_local", "chain": "c", "key": "k1", "message": "m"},
            {"op": "sign_query", "chain": "c", "message": "m"},
            {"op": "forge", "chain": "c", "permute": [1, 0], "message": "m"},
        ],
    },
    # valid chain containing a never-registered cosigner: loses on the
    # registration condition (and on freshness, since the target slot was
    # obtained from the oracle)
    "unregistered_cosigner": {
        "name": "unregistered_cosigner",
        "scheme": "oms",
        "steps": [
            {"op": "keygen", "id": "k1"},
            {"op": "message", "id": "m"},
            {"op": "sign_query", "chain": "c", "message": "m"},
            {"op": "extend_local", "chain": "c", "key": "k1", "message": "m"},
            {"op": "forge", "chain": "c", "message": "m"},
        ],
    },
    # base-scheme replay
    "ds_replay": {
        "name": "ds_replay",
        "scheme": "ds",
        "steps": [
            {"op": "message", "id": "m"},
            {"op": "sign_query", "message": "m", "store": "s"},
            {"op": "forge", "message": "m", "sig": "s"},
        ],
    },
    # aggregate-scheme replay
    "sas_replay": {
        "name": "sas_replay",
        "scheme": "sas",
        "steps": [
            {"op": "message", "id": "m"},
            {"op": "sign_query", "chain": "c", "message": "m"},
            {"op": "forge", "chain": "c"},
        ],
    },
}


def run_named_strategy(
    name: str, rng: Rng | None = None, group=None
) -> GameTranscript:
    """Run one of the builtin strategies by name."""
    try:
        strategy = BUILTIN_STRATEGIES[name]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_STRATEGIES))
        raise ValueError(f"unknown strategy {name!r} (known: {known})") from None
    return run_euf_cma_game(strategy["scheme"], strategy, rng=rng, group=group)
