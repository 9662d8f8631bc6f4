"""Operator command line.

Exit codes: 0 success, 1 verification failure, 2 usage or contract error,
3 decode error.  Failure diagnostics go to stderr as one machine-parsable
line: ``error:<Kind>: <message>``.

File formats:

- parameters, signatures and aggregated keys are binary envelopes
- key files are JSON carrying the public envelope plus hex secret exponents
- key lists are plain JSON arrays of base64 public-key envelopes
- chain files are versioned JSON with the list, messages and signature
- the registry file is versioned JSON holding registered key envelopes
"""

from __future__ import annotations

import base64
import json
import sys
from pathlib import Path

import click

from . import bench as bench_mod
from . import ds, oms, sas
from .errors import DecodeError, OmsigError, SchemeError
from .groups import (
    OMS_TAG,
    SeededRng,
    SystemRng,
    encode_message,
    get_group,
    sas_coordinate_tag,
)
from .harness import BUILTIN_STRATEGIES, run_named_strategy
from .oms import ApkCache

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_DECODE = 3


def _fail(code: int, exc: Exception) -> None:
    click.echo(f"error:{type(exc).__name__}: {exc}", err=True)
    sys.exit(code)


def _guard(fn):
    """Map toolkit exceptions onto the exit-code contract."""

    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except DecodeError as exc:
            _fail(EXIT_DECODE, exc)
        except (SchemeError, OmsigError, ValueError, OSError, KeyError) as exc:
            _fail(EXIT_USAGE, exc)

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _rng(seed: int | None):
    return SeededRng(seed) if seed is not None else SystemRng()


def _b64(blob: bytes) -> str:
    return base64.b64encode(blob).decode()


def _unb64(text: str) -> bytes:
    return base64.b64decode(text.encode())


# -- file helpers ------------------------------------------------------------


def _load_params(path: str):
    blob = Path(path).read_bytes()
    return sas.SharedParams.from_bytes(blob)


def _load_oms_params(path: str) -> oms.OmsParams:
    return oms.OmsParams.from_bytes(Path(path).read_bytes())


def _write_keypair(path: str, scheme: str, pk, sk) -> None:
    doc = {
        "format": "omsig-keypair",
        "version": 1,
        "scheme": scheme,
        "pk": _b64(pk.to_bytes()),
        "sk": [[hex(y1), hex(y2)] for (y1, y2) in sk.pairs],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def _load_keypair(path: str):
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != "omsig-keypair":
        raise ValueError(f"{path} is not a keypair file")
    pk = sas.PublicKey.from_bytes(_unb64(doc["pk"]))
    sk = sas.SecretKey(
        pairs=tuple((int(y1, 16), int(y2, 16)) for y1, y2 in doc["sk"])
    )
    return pk, sk


def _load_registry(path: str) -> set[bytes]:
    p = Path(path)
    if not p.exists():
        return set()
    doc = json.loads(p.read_text())
    if doc.get("format") != "omsig-registry":
        raise ValueError(f"{path} is not a registry file")
    return {_unb64(entry) for entry in doc["keys"]}

def _write_registry(path: str, entries: set[bytes]) -> None:
    doc = {
        "format": "omsig-registry",
        "version": 1,
        "keys": sorted(_b64(blob) for blob in entries),
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def _load_key_list(path: str) -> list[sas.PublicKey]:
    entries = json.loads(Path(path).read_text())
    if not isinstance(entries, list):
        raise ValueError(f"{path} must be a JSON array of key envelopes")
    return [sas.PublicKey.from_bytes(_unb64(e)) for e in entries]


def _oms_message(params, msg, msg_file, raw_scalar) -> int:
    given = [x for x in (msg, msg_file, raw_scalar) if x is not None]
    if len(given) != 1:
        raise click.UsageError("give exactly one of --msg, --msg-file, --raw-scalar")
    if raw_scalar is not None:
        value = int(raw_scalar, 16) % params.group.order
        if value == 0:
            raise ValueError("raw scalar reduces to zero")
        return value
    data = Path(msg_file).read_bytes() if msg_file else msg.encode()
    return encode_message(data, OMS_TAG, params.group.order)


def _sas_message(params, msg, msg_file, msg_scalars) -> list[int]:
    given = [x for x in (msg, msg_file, msg_scalars) if x is not None]
    if len(given) != 1:
        raise click.UsageError(
            "give exactly one of --msg, --msg-file, --msg-scalars"
        )
    if msg_scalars is not None:
        coords = [int(c.strip(), 16) for c in msg_scalars.split(",")]
        if len(coords) != params.msg_len:
            raise ValueError(
                f"expected {params.msg_len} coordinates, got {len(coords)}"
            )
        return coords
    data = Path(msg_file).read_bytes() if msg_file else msg.encode()
    return [
        encode_message(data, sas_coordinate_tag(j), params.group.order)
        for j in range(params.msg_len)
    ]


# -- command tree ------------------------------------------------------------


@click.group()
@click.version_option()
def main() -> None:
    """Ordered multi-signature toolkit over type-3 pairings."""


@main.command()
@click.option("--scheme", type=click.Choice(["oms", "sas", "ds"]), required=True)
@click.option("--msg-len", type=int, default=1, show_default=True,
              help="message arity (aggregate scheme only)")
@click.option("--n-max", type=int, default=oms.DEFAULT_N_MAX, show_default=True,
              help="signer bound (ordered scheme only)")
@click.option("--curve", type=click.Choice(["bn254", "bls12381"]), default="bn254",
              show_default=True)
@click.option("--out", type=click.Path(), required=True)
@click.option("--seed", type=int, default=None, help="test mode only")
@_guard
def setup(scheme, msg_len, n_max, curve, out, seed) -> None:
    """Run trusted setup and write the parameter envelope."""
    group = get_group(curve)
    rng = _rng(seed)
    if scheme == "oms":
        params = oms.setup(group=group, rng=rng, n_max=n_max)
    elif scheme == "sas":
        params = sas.setup(msg_len, group=group, rng=rng)
    else:
        params = ds.setup(group=group, rng=rng)
    Path(out).write_bytes(params.to_bytes())
    click.echo(f"wrote {scheme} parameters to {out}")


def _keygen_impl(scheme: str, pp: str, out: str, seed: int | None) -> None:
    rng = _rng(seed)
    if scheme == "oms":
        params = _load_oms_params(pp)
        pk, sk = oms.keygen(params, rng)
    else:
        params = _load_params(pp)
        pk, sk = sas.keygen(params, rng)
    _write_keypair(out, scheme, pk, sk)
    click.echo(f"wrote keypair to {out}")


def _register_impl(scheme: str, pp: str, key: str, registry: str) -> None:
    params = _load_oms_params(pp) if scheme == "oms" else _load_params(pp)
    pk, sk = _load_keypair(key)
    if not sas.kverify(params, pk, sk):
        click.echo("register: key verification failed", err=True)
        sys.exit(EXIT_VERIFY_FAILED)
    entries = _load_registry(registry)
    entries.add(pk.to_bytes())
    _write_registry(registry, entries)
    click.echo(f"registered key in {registry}")


# ---- aggregate scheme ----


@click.group()
def sas_group() -> None:
    """Sequential aggregate signatures on vector messages."""


main.add_command(sas_group, name="sas")


@sas_group.command("keygen")
@click.option("--pp", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), required=True)
@click.option("--seed", type=int, default=None, help="test mode only")
@_guard
def sas_keygen(pp, out, seed) -> None:
    """Generate a signer keypair."""
    _keygen_impl("sas", pp, out, seed)


@sas_group.command("register")
@click.option("--pp", type=click.Path(exists=True), required=True)
@click.option("--key", type=click.Path(exists=True), required=True)
@click.option("--registry", type=click.Path(), required=True)
@_guard
def sas_register(pp, key, registry) -> None:
    """Check a keypair and record its public half."""
    _register_impl("sas", pp, key, registry)


@sas_group.command("append")
@click.option("--pp", type=click.Path(exists=True), required=True)
@click.option("--key", type=click.Path(exists=True), required=True)
@click.option("--chain", "chain_path", type=click.Path(), required=True,
              help="chain file; created when absent")
@click.option("--msg", default=None)
@click.option("--msg-file", type=click.Path(exists=True), default=None)
@click.option("--msg-scalars", default=None,
              help="comma-separated hex coordinates (test vectors)")
@click.option("--seed", type=int, default=None, help="test mode only")
@_guard
def sas_append(pp, key, chain_path, msg, msg_file, msg_scalars, seed) -> None:
    """Fold this signer's signature into the chain file."""
    params = _load_params(pp)
    _, sk = _load_keypair(key)
    coords = _sas_message(params, msg, msg_file, msg_scalars)
    path = Path(chain_path)
    if path.exists():
        doc = json.loads(path.read_text())
        if doc.get("format") != "omsig-chain":
            raise ValueError(f"{chain_path} is not a chain file")
        keys = [sas.PublicKey.from_bytes(_unb64(e)) for e in doc["keys"]]
        msgs = [[int(c, 16) for c in mv] for mv in doc["messages"]]
        sig = ds.Signature.from_bytes(_unb64(doc["sig"]))
    else:
        keys, msgs, sig = [], [], None
    new_sig = sas.sign_append(params, sk, keys, msgs, coords, sig, _rng(seed))
    pk, _ = _load_keypair(key)
    doc = {
        "format": "omsig-chain",
        "version": 1,
        "keys": [_b64(k.to_bytes()) for k in keys + [pk]],
        "messages": [[hex(c) for c in mv] for mv in msgs + [list(coords)]],
        "sig": _b64(new_sig.to_bytes()),
    }
    path.write_text(json.dumps(doc, indent=2) + "\n")
    click.echo(f"chain now carries {len(keys) + 1} signatures")


@sas_group.command("verify")
@click.option("--pp", type=click.Path(exists=True), required=True)
@click.option("--chain", "chain_path", type=click.Path(exists=True), required=True)
@click.option("--json", "as_json", is_flag=True, default=False)
@_guard
def sas_verify_cmd(pp, chain_path, as_json) -> None:
    """Verify a chain file; exit 0 iff it verifies."""
    params = _load_params(pp)
    doc = json.loads(Path(chain_path).read_text())
    if doc.get("format") != "omsig-chain":
        raise ValueError(f"{chain_path} is not a chain file")
    keys = [sas.PublicKey.from_bytes(_unb64(e)) for e in doc["keys"]]
    msgs = [[int(c, 16) for c in mv] for mv in doc["messages"]]
    sig = ds.Signature.from_bytes(_unb64(doc["sig"]))
    ok = sas.verify(params, keys, msgs, sig)
    if as_json:
        click.echo(json.dumps({"verified": ok, "signers": len(keys)}))
    else:
        click.echo("verified" if ok else "verification failed")
    sys.exit(EXIT_OK if ok else EXIT_VERIFY_FAILED)


# ---- ordered scheme ----


@click.group()
def oms_group() -> None:
    """Ordered multi-signatures with key aggregation."""


main.add_command(oms_group, name="oms")


@oms_group.command("keygen")
@click.option("--pp", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), required=True)
@click.option("--seed", type=int, default=None, help="test mode only")
@_guard
def oms_keygen(pp, out, seed) -> None:
    """Generate a signer keypair."""
    _keygen_impl("oms", pp, out, seed)


@oms_group.command("register")
@click.option("--pp", type=click.Path(exists=True), required=True)
@click.option("--key", type=click.Path(exists=True), required=True)
@click.option("--registry", type=click.Path(), required=True)
@_guard
def oms_register(pp, key, registry) -> None:
    """Check a keypair and record its public half."""
    _register_impl("oms", pp, key, registry)


@oms_group.command("kagg")
@click.option("--pp", type=click.Path(exists=True), required=True)
@click.option("--list", "list_path", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), required=True)
@_guard
def oms_kagg(pp, list_path, out) -> None:
    """Aggregate an ordered key list into an aggregated-key envelope."""
    params = _load_oms_params(pp)
    keys = _load_key_list(list_path)
    apk = oms.kagg(params, keys)
    Path(out).write_bytes(apk.to_bytes())
    click.echo(f"aggregated {len(keys)} keys into {out}")


@oms_group.command("append")
@click.option("--pp", type=click.Path(exists=True), required=True)
@click.option("--key", type=click.Path(exists=True), required=True)
@click.option("--chain", "chain_path", type=click.Path(), required=True)
@click.option("--msg", default=None)
@click.option("--msg-file", type=click.Path(exists=True), default=None)
@click.option("--raw-scalar", default=None, help="hex scalar (test vectors)")
@click.option("--pos-auto/--no-pos-auto", default=True, show_default=True,
              help="positions are always derived from the chain")
@click.option("--pos", type=int, default=None,
              help="rejected; positions cannot be chosen")
@click.option("--seed", type=int, default=None, help="test mode only")
@_guard
def oms_append(pp, key, chain_path, msg, msg_file, raw_scalar, pos_auto, pos, seed):
    """Append this signer's signature at the next position."""
    if pos is not None or not pos_auto:
        raise click.UsageError(
            "signer positions are derived from the chain and cannot be set"
        )
    params = _load_oms_params(pp)
    pk, sk = _load_keypair(key)
    m = _oms_message(params, msg, msg_file, raw_scalar)
    path = Path(chain_path)
    if path.exists():
        doc = json.loads(path.read_text())
        if doc.get("format") != "omsig-oms-chain":
            raise ValueError(f"{chain_path} is not an ordered-chain file")
        if int(doc["message"], 16) != m:
            raise ValueError("chain was built over a different message")
        keys = [sas.PublicKey.from_bytes(_unb64(e)) for e in doc["keys"]]
        sig = ds.Signature.from_bytes(_unb64(doc["sig"]))
    else:
        keys, sig = [], None
    new_sig = oms.sign_append(params, sk, keys, m, sig, _rng(seed))
    doc = {
        "format": "omsig-oms-chain",
        "version": 1,
        "keys": [_b64(k.to_bytes()) for k in keys + [pk]],
        "message": hex(m),
        "sig": _b64(new_sig.to_bytes()),
    }
    path.write_text(json.dumps(doc, indent=2) + "\n")
    click.echo(f"signed at position {len(keys) + 1}")


@oms_group.command("verify")
@click.option("--pp", type=click.Path(exists=True), required=True)
@click.option("--apk", "apk_path", type=click.Path(exists=True), default=None)
@click.option("--sig", "sig_path", type=click.Path(exists=True), default=None)
@click.option("--chain", "chain_path", type=click.Path(exists=True), default=None)
@click.option("--msg", default=None)
@click.option("--msg-file", type=click.Path(exists=True), default=None)
@click.option("--raw-scalar", default=None)
@click.option("--json", "as_json", is_flag=True, default=False)
@_guard
def oms_verify_cmd(pp, apk_path, sig_path, chain_path, msg, msg_file, raw_scalar, as_json):
    """Verify against an aggregated key, or a chain file by its list."""
    params = _load_oms_params(pp)
    if chain_path is not None:
        doc = json.loads(Path(chain_path).read_text())
        if doc.get("format") != "omsig-oms-chain":
            raise ValueError(f"{chain_path} is not an ordered-chain file")
        keys = [sas.PublicKey.from_bytes(_unb64(e)) for e in doc["keys"]]
        m = int(doc["message"], 16)
        sig = ds.Signature.from_bytes(_unb64(doc["sig"]))
        ok = oms.verify_list(params, keys, m, sig)
        signers = len(keys)
    else:
        if apk_path is None or sig_path is None:
            raise click.UsageError("need --chain, or both --apk and --sig")
        apk = oms.AggregatedPublicKey.from_bytes(Path(apk_path).read_bytes())
        sig = ds.Signature.from_bytes(Path(sig_path).read_bytes())
        m = _oms_message(params, msg, msg_file, raw_scalar)
        ok = oms.verify(params, apk, m, sig)
        signers = None
    if as_json:
        click.echo(json.dumps({"verified": ok, "signers": signers}))
    else:
        click.echo("verified" if ok else "verification failed")
    sys.exit(EXIT_OK if ok else EXIT_VERIFY_FAILED)


@oms_group.command("attest-path")
@click.option("--pp", type=click.Path(exists=True), required=True)
@click.option("--topology", type=click.Path(exists=True), required=True,
              help="JSON: {routers: [{id, key}...]}")
@click.option("--message", "message_file", type=click.Path(exists=True),
              default=None, help="packet bytes to attest")
@click.option("--msg", default=None, help="literal message text")
@click.option("--registry", type=click.Path(exists=True), required=True)
@click.option("--out-dir", type=click.Path(), required=True)
@click.option("--seed", type=int, default=None, help="test mode only")
@_guard
def oms_attest_path(pp, topology, message_file, msg, registry, out_dir, seed):
    """Sequentially sign a packet along a router path; emit chain, key, report."""
    params = _load_oms_params(pp)
    doc = json.loads(Path(topology).read_text())
    routers = doc["routers"]
    if not routers:
        raise ValueError("topology lists no routers")
    ids = [r["id"] for r in routers]
    if len(set(ids)) != len(ids):
        raise ValueError("router identities must be unique")
    if len(routers) > params.n_max:
        raise ValueError(f"path length exceeds the signer bound {params.n_max}")
    registered = _load_registry(registry)
    if message_file is None and msg is None:
        raise click.UsageError("need --message or --msg")
    data = Path(message_file).read_bytes() if message_file else msg.encode()
    m = encode_message(data, OMS_TAG, params.group.order)
    rng = _rng(seed)

    keypairs = []
    for router in routers:
        pk, sk = _load_keypair(router["key"])
        if pk.to_bytes() not in registered:
            raise ValueError(f"router {router['id']} key is not registered")
        keypairs.append((router["id"], pk, sk))

    cache = ApkCache()
    sig = None
    keys: list[sas.PublicKey] = []
    prefix_report = []
    for rid, pk, sk in keypairs:
        sig = oms.sign_append(params, sk, keys, m, sig, rng)
        keys.append(pk)
        apk = cache.aggregate(params, keys)
        prefix_report.append(
            {
                "position": len(keys),
                "router": rid,
                "verified": oms.verify(params, apk, m, sig),
            }
        )

    apk = cache.aggregate(params, keys)  # cache hit: full path already aggregated
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "sig.bin").write_bytes(sig.to_bytes())
    (out / "apk.bin").write_bytes(apk.to_bytes())
    chain_doc = {
        "format": "omsig-oms-chain",
        "version": 1,
        "keys": [_b64(k.to_bytes()) for k in keys],
        "message": hex(m),
        "sig": _b64(sig.to_bytes()),
    }
    (out / "chain.json").write_text(json.dumps(chain_doc, indent=2) + "\n")
    report = {
        "routers": ids,
        "prefixes": prefix_report,
        "final_verified": oms.verify(params, apk, m, sig),
        "apk_cache": {"hits": cache.hits, "misses": cache.misses},
    }
    (out / "report.json").write_text(json.dumps(report, indent=2) + "\n")
    if not all(p["verified"] for p in prefix_report):
        click.echo("attestation failed for some prefix", err=True)
        sys.exit(EXIT_VERIFY_FAILED)
    click.echo(f"attested {len(keys)}-router path; artifacts in {out_dir}")


# ---- harness and bench ----


@click.group()
def harness_group() -> None:
    """Security-game runners."""


main.add_command(harness_group, name="harness")


@harness_group.command("run")
@click.option("--strategy", required=True,
              type=click.Choice(sorted(BUILTIN_STRATEGIES)))
@click.option("--seed", type=int, required=True)
@click.option("--json", "as_json", is_flag=True, default=False)
@_guard
def harness_run(strategy, seed, as_json) -> None:
    """Run a scripted adversary; print its transcript."""
    transcript = run_named_strategy(strategy, rng=SeededRng(seed))
    if as_json:
        click.echo(transcript.to_json())
    else:
        conds = transcript.conditions()
        click.echo(f"strategy : {strategy}")
        click.echo(f"records  : {len(transcript.records)}")
        for name, value in conds.items():
            click.echo(f"{name:22s}: {'pass' if value else 'fail'}")
        click.echo(f"verdict  : {int(all(conds.values()))}")


@main.command("bench")
@click.option("--n-list", default="1,4,16", show_default=True)
@click.option("--repeats", type=int, default=50, show_default=True)
@click.option("--curve", type=click.Choice(["bn254", "bls12381"]), default="bn254",
              show_default=True)
@click.option("--json", "as_json", is_flag=True, default=False)
@click.option("--seed", type=int, default=None, help="test mode only")
@_guard
def bench_cmd(n_list, repeats, curve, as_json, seed) -> None:
    """Measure sizes, pairing counts, and timings; assert structure first."""
    ns = [int(x) for x in n_list.split(",") if x.strip()]
    report = bench_mod.run(ns, repeats, group=get_group(curve), rng=_rng(seed))
    if as_json:
        click.echo(report.to_json())
        return
    click.echo(f"curve: {report.curve}   repeats: {report.repeats}")
    header = (
        f"{'scheme':8s} {'n':>3s} {'pk':>5s} {'sig':>5s} {'apk':>5s} {'#P':>3s}"
        f" {'sign_us':>9s} {'verify_us':>10s} {'kagg_us':>8s} {'fresh_us':>9s}"
    )
    click.echo(header)
    def opt(value, digits=1):
        return "-" if value is None else f"{value:.{digits}f}"

    for r in report.rows:
        click.echo(
            f"{r.scheme:8s} {r.n:3d} {r.pk_bytes:5d} {r.sig_bytes:5d}"
            f" {r.apk_bytes if r.apk_bytes is not None else '-':>5} {r.pairings_per_verify:3d}"
            f" {r.sign_us:9.1f} {r.verify_us:10.1f}"
            f" {opt(r.kagg_us):>8} {opt(r.fresh_kagg_verify_us):>9}"
        )


if __name__ == "__main__":
    main()
