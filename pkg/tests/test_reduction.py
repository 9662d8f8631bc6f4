"""Reduction mechanics: oracle agreement, strip, extraction, games."""

import json

import pytest

from omsig import ds, sas
from omsig.errors import HarnessFault, StrategyFault
from omsig.groups import SeededRng, sample_nonzero_scalar
from omsig.harness import (
    DbpSolution,
    composite_ds_pk,
    d_twist,
    dbp_check,
    dbp_extract,
    exponent_verify,
    honest_form,
    run_euf_cma_game,
    run_named_strategy,
    setup_with_trapdoor,
    strip_to_ds,
)
from omsig.harness.reduction import oms_reduction_check

from conftest import build_sas_chain


@pytest.fixture(scope="module")
def world():
    """Shared parameters with trapdoor, four registered keypairs, a chain."""
    params, view = setup_with_trapdoor(2, rng=SeededRng(b"reduction"))
    rng = SeededRng(b"reduction-keys")
    keypairs = [sas.keygen(params, rng) for _ in range(4)]
    for pk, sk in keypairs:
        view.add_key(pk, sk)
    p = params.group.order
    msgs = [
        [sample_nonzero_scalar(rng, p), sample_nonzero_scalar(rng, p)]
        for _ in range(4)
    ]
    keys, prefixes = build_sas_chain(params, keypairs, msgs, rng)
    return params, view, keypairs, keys, msgs, prefixes


def _mutants(params, sig):
    """Single-component mutations of a signature."""
    bump = params.g1
    return [
        ds.Signature(a=sig.a * bump, b=sig.b, c=sig.c),
        ds.Signature(a=sig.a, b=sig.b * bump, c=sig.c),
        ds.Signature(a=sig.a, b=sig.b, c=sig.c * bump),
        ds.Signature(a=sig.b, b=sig.a, c=sig.c),
        ds.Signature(a=params.group.g1_identity(), b=sig.b, c=sig.c),
    ]


def test_oracles_agree_on_valid_chains(world):
    params, view, keypairs, keys, msgs, prefixes = world
    for i in range(1, 5):
        assert sas.verify(params, keys[:i], msgs[:i], prefixes[i - 1])
        assert exponent_verify(view, params, keys[:i], msgs[:i], prefixes[i - 1])


def test_oracles_agree_on_mutants(world):
    params, view, keypairs, keys, msgs, prefixes = world
    sig = prefixes[-1]
    for mutant in _mutants(params, sig):
        assert sas.verify(params, keys, msgs, mutant) == exponent_verify(
            view, params, keys, msgs, mutant
        )


def test_oracles_agree_on_message_tampering(world):
    params, view, keypairs, keys, msgs, prefixes = world
    sig = prefixes[-1]
    swapped = [msgs[1], msgs[0], msgs[2], msgs[3]]
    zeroed = [msgs[0], [0, msgs[1][1]], msgs[2], msgs[3]]
    short = msgs[:3]
    for candidate_msgs, candidate_keys in (
        (swapped, keys),
        (zeroed, keys),
        (short, keys),
        (msgs, list(reversed(keys))),
    ):
        assert sas.verify(
            params, candidate_keys, candidate_msgs, sig
        ) == exponent_verify(view, params, candidate_keys, candidate_msgs, sig)


def test_oracle_faults_on_unknown_key(world):
    params, view, keypairs, keys, msgs, prefixes = world
    stranger_pk, _ = sas.keygen(params, SeededRng(b"stranger"))
    with pytest.raises(HarnessFault):
        exponent_verify(view, params, [stranger_pk], [msgs[0]], prefixes[0])


def test_d_twist_verifies_but_is_dishonest(world):
    params, view, keypairs, keys, msgs, prefixes = world
    sig = prefixes[-1]
    twisted = d_twist(view, params, sig, t=123456789)
    assert sas.verify(params, keys, msgs, twisted)
    assert exponent_verify(view, params, keys, msgs, twisted)
    assert honest_form(view, params, keys, msgs, sig)
    assert not honest_form(view, params, keys, msgs, twisted)
    with pytest.raises(ValueError):
        d_twist(view, params, sig, t=0)


def test_strip_recovers_base_signature(world):
    params, view, keypairs, keys, msgs, prefixes = world
    secrets = {pk.to_bytes(): sk for pk, sk in keypairs}
    sig = prefixes[-1]
    for target in range(4):
        target_msg, stripped = strip_to_ds(params, keys, msgs, sig, target, secrets)
        pk_hat = composite_ds_pk(params, keys[target])
        assert target_msg == tuple(msgs[target])
        assert ds.verify(pk_hat, target_msg, stripped)
        assert not ds.verify(pk_hat, (1, 2), stripped)


def test_strip_single_signer_is_identity(world):
    params, view, keypairs, keys, msgs, prefixes = world
    target_msg, stripped = strip_to_ds(
        params, keys[:1], msgs[:1], prefixes[0], 0, {}
    )
    assert stripped == prefixes[0]


def test_strip_with_wrong_cosigner_secret(world):
    params, view, keypairs, keys, msgs, prefixes = world
    rng = SeededRng(b"wrong-secret")
    wrong = {pk.to_bytes(): sas.keygen(params, rng)[1] for pk, _ in keypairs}
    target_msg, stripped = strip_to_ds(params, keys, msgs, prefixes[-1], 1, wrong)
    assert not ds.verify(composite_ds_pk(params, keys[1]), target_msg, stripped)


def test_strip_preconditions(world):
    params, view, keypairs, keys, msgs, prefixes = world
    secrets = {pk.to_bytes(): sk for pk, sk in keypairs}
    broken = ds.Signature(
        a=prefixes[-1].a, b=prefixes[-1].b * params.g1, c=prefixes[-1].c
    )
    with pytest.raises(HarnessFault):
        strip_to_ds(params, keys, msgs, broken, 0, secrets)
    with pytest.raises(HarnessFault):
        strip_to_ds(params, keys, msgs, prefixes[-1], 9, secrets)
    missing = dict(secrets)
    missing.pop(keys[0].to_bytes())
    with pytest.raises(HarnessFault):
        strip_to_ds(params, keys, msgs, prefixes[-1], 1, missing)


def test_extraction_none_on_honest(world):
    params, view, keypairs, keys, msgs, prefixes = world
    for i in range(1, 5):
        assert dbp_extract(view, params, keys[:i], msgs[:i], prefixes[i - 1]) is None


def test_extraction_on_twist(world):
    params, view, keypairs, keys, msgs, prefixes = world
    p = params.group.order
    t = 987654321
    twisted = d_twist(view, params, prefixes[-1], t=t)
    solution = dbp_extract(view, params, keys, msgs, twisted)
    assert solution is not None
    assert solution.f == params.g1**t
    assert solution.e == params.g1 ** (-t * view.d % p)
    assert dbp_check(solution, params.h, params.d)


def test_extraction_independent_of_twist_point(world):
    # the extracted pair depends only on the twist offset, not on which
    # prefix (its keys, messages, or length) the twist was planted in
    params, view, keypairs, keys, msgs, prefixes = world
    t = 13371337
    early = d_twist(view, params, prefixes[0], t=t)
    late = d_twist(view, params, prefixes[-1], t=t)
    sol_early = dbp_extract(view, params, keys[:1], msgs[:1], early)
    sol_late = dbp_extract(view, params, keys, msgs, late)
    assert sol_early is not None and sol_late is not None
    assert sol_early.f == params.g1**t == sol_late.f
    assert sol_early.e == sol_late.e


def test_extraction_precondition(world):
    params, view, keypairs, keys, msgs, prefixes = world
    broken = ds.Signature(
        a=prefixes[-1].a, b=prefixes[-1].b, c=prefixes[-1].c * params.g1
    )
    with pytest.raises(HarnessFault):
        dbp_extract(view, params, keys, msgs, broken)


def test_dbp_check_cases(world):
    params, view, keypairs, keys, msgs, prefixes = world
    group = params.group
    p = group.order
    trivial = DbpSolution(e=group.g1_identity(), f=group.g1_identity())
    assert not dbp_check(trivial, params.h, params.d)
    t = 24682468
    constructed = DbpSolution(
        e=params.g1 ** (-t * view.d % p), f=params.g1**t
    )
    assert dbp_check(constructed, params.h, params.d)
    rng = SeededRng(b"dbp-random")
    for _ in range(1000):
        random_pair = DbpSolution(
            e=params.g1 ** sample_nonzero_scalar(rng, p),
            f=params.g1 ** sample_nonzero_scalar(rng, p),
        )
        assert not dbp_check(random_pair, params.h, params.d)


def test_oms_reduction_check_on_honest_chains(oms_params, oms_keyring):
    rng = SeededRng(b"oms-reduction")
    from conftest import build_oms_chain

    for trial in range(100):
        n = 1 + trial % 4
        m = sample_nonzero_scalar(rng, oms_params.group.order)
        keys, prefixes = build_oms_chain(oms_params, oms_keyring[:n], m, rng)
        assert oms_reduction_check(oms_params, keys, m, prefixes[-1])


def test_oms_reduction_check_precondition(oms_params, oms_keyring):
    from conftest import build_oms_chain

    m = 1234
    keys, prefixes = build_oms_chain(
        oms_params, oms_keyring[:2], m, SeededRng(b"oms-bad")
    )
    tampered = ds.Signature(
        a=prefixes[-1].a, b=prefixes[-1].b * oms_params.g1, c=prefixes[-1].c
    )
    with pytest.raises(HarnessFault):
        oms_reduction_check(oms_params, keys, m, tampered)


# -- game runners -------------------------------------------------------------


def test_honest_replay_loses_on_freshness():
    transcript = run_named_strategy("honest_replay", rng=SeededRng(21))
    conds = transcript.conditions()
    assert not transcript.verdict()
    assert conds["forgery_verifies"]
    assert not conds["fresh_target_slot"]
    assert conds["cosigners_registered"]


def test_order_transposition_loses_on_verification():
    transcript = run_named_strategy("order_transposition", rng=SeededRng(22))
    conds = transcript.conditions()
    assert not transcript.verdict()
    assert not conds["forgery_verifies"]
    assert conds["cosigners_registered"]


def test_unregistered_cosigner_loses_on_registration():
    transcript = run_named_strategy("unregistered_cosigner", rng=SeededRng(23))
    conds = transcript.conditions()
    assert not transcript.verdict()
    assert not conds["cosigners_registered"]


def test_ds_and_sas_replays_lose():
    for name in ("ds_replay", "sas_replay"):
        transcript = run_named_strategy(name, rng=SeededRng(24))
        assert not transcript.verdict()
        assert transcript.conditions()["forgery_verifies"]
        assert not transcript.conditions()["fresh_target_slot"]


def test_transcript_replay_is_deterministic():
    a = run_named_strategy("order_transposition", rng=SeededRng(25))
    b = run_named_strategy("order_transposition", rng=SeededRng(25))
    assert a.to_json() == b.to_json()
    assert a.verdict() == a.verdict()  # recomputation is stable


def test_transcript_json_shape():
    transcript = run_named_strategy("honest_replay", rng=SeededRng(26))
    doc = json.loads(transcript.to_json())
    assert doc["scheme"] == "oms"
    assert doc["verdict"] == 0
    assert {r["query"] for r in doc["records"]} <= {"setup", "register", "sign", "forge"}
    for rec in doc["records"]:
        assert len(rec["args_hash"]) == 64
        assert len(rec["response_hash"]) == 64


def test_strategy_faults():
    with pytest.raises(StrategyFault):
        run_euf_cma_game(
            "oms",
            {"name": "no-forge", "steps": [{"op": "message", "id": "m"}]},
            rng=SeededRng(27),
        )
    with pytest.raises(StrategyFault):
        run_euf_cma_game(
            "oms",
            {"name": "bad-op", "steps": [{"op": "mystery"}]},
            rng=SeededRng(28),
        )
    with pytest.raises(ValueError):
        run_euf_cma_game("nope", {"name": "x", "steps": []}, rng=SeededRng(29))
    with pytest.raises(ValueError):
        run_named_strategy("unknown-strategy")
