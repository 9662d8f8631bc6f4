"""Certified-key registry.

Adversarially chosen keys only count once their secret key has been checked
against the public key, so the registry's register operation runs the
scheme's key verification and stores accepted keys by canonical bytes.
Reads are lock-free; writes are serialized.
"""

from __future__ import annotations

import threading

from . import sas


class KeyRegistry:
    """Set of registered public keys, optionally remembering secrets.

    ``keep_secrets=True`` is for test harnesses that later need the
    registered exponents (the reductions retrieve cosigner secrets from
    here); production registries keep only the public halves.
    """

    def __init__(self, params: sas.SharedParams, keep_secrets: bool = False) -> None:
        self._params = params
        self._keep_secrets = keep_secrets
        self._keys: dict[bytes, sas.PublicKey] = {}
        self._secrets: dict[bytes, sas.SecretKey] = {}
        self._lock = threading.Lock()

    def register(self, pk: sas.PublicKey, sk: sas.SecretKey) -> bool:
        """Accept (and remember) the key iff the pair checks out."""
        if not sas.kverify(self._params, pk, sk):
            return False
        blob = pk.to_bytes()
        with self._lock:
            self._keys[blob] = pk
            if self._keep_secrets:
                self._secrets[blob] = sk
        return True

    def __contains__(self, pk: sas.PublicKey) -> bool:
        return pk.to_bytes() in self._keys

    def __len__(self) -> int:
        return len(self._keys)

    def secret_for(self, pk: sas.PublicKey) -> sas.SecretKey | None:
        return self._secrets.get(pk.to_bytes())

    def registered_keys(self) -> list[sas.PublicKey]:
        return list(self._keys.values())
