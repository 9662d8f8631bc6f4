import pytest

from omsig import oms, sas
from omsig.groups import SeededRng, get_group


@pytest.fixture(scope="session")
def group():
    return get_group()


@pytest.fixture(scope="session")
def bls_group():
    return get_group("bls12381")


@pytest.fixture(scope="session")
def oms_params():
    return oms.setup(rng=SeededRng(b"fixture-oms"))


@pytest.fixture(scope="session")
def oms_keyring(oms_params):
    """Six independent keypairs under the shared ordered-scheme parameters."""
    rng = SeededRng(b"fixture-oms-keys")
    return [oms.keygen(oms_params, rng) for _ in range(6)]


@pytest.fixture(scope="session")
def sas_params2():
    return sas.setup(2, rng=SeededRng(b"fixture-sas2"))


def build_oms_chain(params, keypairs, m, rng, upto=None):
    """Sign with each keypair in turn; returns (keys, prefix signatures)."""
    sig = None
    keys = []
    prefixes = []
    for pk, sk in keypairs[: upto if upto is not None else len(keypairs)]:
        sig = oms.sign_append(params, sk, keys, m, sig, rng)
        keys.append(pk)
        prefixes.append(sig)
    return keys, prefixes


def build_sas_chain(params, keypairs, msgs, rng):
    sig = None
    keys = []
    prefixes = []
    for (pk, sk), mv in zip(keypairs, msgs):
        sig = sas.sign_append(params, sk, keys, msgs[: len(keys)], mv, sig, rng)
        keys.append(pk)
        prefixes.append(sig)
    return keys, prefixes
