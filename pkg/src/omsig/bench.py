"""Size, pairing-count, and timing instrumentation.

The structural claims (3-point signatures, 2-element keys and aggregated
keys, 3 pairings per verification) are asserted before any stopwatch runs;
a report whose structure is wrong raises instead of printing numbers.

Timing is wall-clock mean over a repeat loop.  The interesting comparison
is amortized verification: with the aggregated key computed once and
reused, verification cost does not grow with the number of signers, while
re-aggregating per verification does.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass
from typing import Sequence

from . import oms, sas
from .groups import HEADER_LEN, SystemRng, pairing_counter, sample_nonzero_scalar
from .groups.rng import Rng


@dataclass
class BenchRow:
    scheme: str
    n: int
    pk_bytes: int
    sig_bytes: int
    apk_bytes: int | None
    pairings_per_verify: int
    sign_us: float
    verify_us: float
    kagg_us: float | None
    amortized_verify_us: float | None
    fresh_kagg_verify_us: float | None


@dataclass
class BenchReport:
    curve: str
    repeats: int
    rows: list

    def to_json(self) -> str:
        return json.dumps(
            {"curve": self.curve, "repeats": self.repeats,
             "rows": [asdict(r) for r in self.rows]},
            indent=2,
        )


def _mean_us(fn, repeats: int) -> float:
    fn()  # warm up
    start = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - start) / repeats * 1e6


def _pairings_per(fn) -> int:
    pairing_counter.reset()
    if not fn():
        raise AssertionError("benchmark verification unexpectedly failed")
    return pairing_counter.read()


def _oms_chain(params, rng, n):
    keypairs = [oms.keygen(params, rng) for _ in range(n)]
    m = sample_nonzero_scalar(rng, params.group.order)
    sig = None
    keys = []
    for pk, sk in keypairs:
        sig = oms.sign_append(
            params, sk, keys, m, sig, rng, _skip_prior_check=bool(keys)
        )
        keys.append(pk)
    return keys, keypairs, m, sig


def _oms_row(params, rng, n: int, repeats: int) -> BenchRow:
    keys, keypairs, m, sig = _oms_chain(params, rng, n)
    apk = oms.kagg(params, keys)
    group = params.group

    pk_bytes = len(keys[0].to_bytes())
    sig_bytes = len(sig.to_bytes())
    apk_bytes = len(apk.to_bytes())
    # structure before stopwatches: exact point counts, then pairing count
    if sig_bytes != HEADER_LEN + 1 + 3 * group.g1_bytes:
        raise AssertionError("signature is not exactly three source-group points")
    if apk_bytes != HEADER_LEN + 1 + 2 * group.g2_bytes:
        raise AssertionError("aggregated key is not exactly two second-group points")
    if pk_bytes != HEADER_LEN + 4 + 2 * group.g2_bytes:
        raise AssertionError("public key is not exactly two second-group points")
    pairings = _pairings_per(lambda: oms.verify(params, apk, m, sig))
    if pairings != 3:
        raise AssertionError(f"verification used {pairings} pairings, wanted 3")

    # honest prefix of length n-1 for the signing stopwatch
    last_sk = keypairs[-1][1]
    prior_keys = keys[:-1]
    sig_prior = None
    built = []
    for pk, sk in keypairs[:-1]:
        sig_prior = oms.sign_append(params, sk, built, m, sig_prior, rng)
        built.append(pk)

    def do_sign():
        oms.sign_append(params, last_sk, prior_keys, m, sig_prior, rng)

    sign_us = _mean_us(do_sign, max(1, repeats // 4))
    verify_us = _mean_us(lambda: oms.verify(params, apk, m, sig), repeats)
    kagg_us = _mean_us(lambda: oms.kagg(params, keys), repeats)
    fresh_us = _mean_us(
        lambda: oms.verify(params, oms.kagg(params, keys), m, sig), repeats
    )
    return BenchRow(
        scheme="oms",
        n=n,
        pk_bytes=pk_bytes,
        sig_bytes=sig_bytes,
        apk_bytes=apk_bytes,
        pairings_per_verify=pairings,
        sign_us=sign_us,
        verify_us=verify_us,
        kagg_us=kagg_us,
        amortized_verify_us=verify_us,
        fresh_kagg_verify_us=fresh_us,
    )


def _sas_row(group, rng, msg_len: int, n: int, repeats: int) -> BenchRow:
    params = sas.setup(msg_len, group=group, rng=rng)
    keypairs = [sas.keygen(params, rng) for _ in range(n)]
    p = params.group.order
    msgs = [
        [sample_nonzero_scalar(rng, p) for _ in range(msg_len)] for _ in range(n)
    ]
    sig = None
    keys = []
    for (pk, sk), mv in zip(keypairs, msgs):
        sig = sas.sign_append(
            params, sk, keys, msgs[: len(keys)], mv, sig, rng,
            _skip_prior_check=bool(keys),
        )
        keys.append(pk)

    pk_bytes = len(keys[0].to_bytes())
    sig_bytes = len(sig.to_bytes())
    pairings = _pairings_per(lambda: sas.verify(params, keys, msgs, sig))
    if pairings != 3:
        raise AssertionError(f"verification used {pairings} pairings, wanted 3")

    prior_sig = None
    built = []
    for (pk, sk), mv in zip(keypairs[:-1], msgs[:-1]):
        prior_sig = sas.sign_append(
            params, sk, built, msgs[: len(built)], mv, prior_sig, rng,
            _skip_prior_check=bool(built),
        )
        built.append(pk)
    last_sk = keypairs[-1][1]

    def do_sign():
        sas.sign_append(
            params, last_sk, keys[:-1], msgs[:-1], msgs[-1], prior_sig, rng
        )

    sign_us = _mean_us(do_sign, max(1, repeats // 4))
    verify_us = _mean_us(lambda: sas.verify(params, keys, msgs, sig), repeats)
    return BenchRow(
        scheme=f"sas-l{msg_len}",
        n=n,
        pk_bytes=pk_bytes,
        sig_bytes=sig_bytes,
        apk_bytes=None,
        pairings_per_verify=pairings,
        sign_us=sign_us,
        verify_us=verify_us,
        kagg_us=None,
        amortized_verify_us=None,
        fresh_kagg_verify_us=None,
    )


def run(
    n_list: Sequence[int] = (1, 4, 16),
    repeats: int = 50,
    group=None,
    rng: Rng | None = None,
) -> BenchReport:
    """Produce rows for the ordered scheme and the aggregate scheme at
    arities 1 and 2, for every chain length in ``n_list``."""
    rng = rng or SystemRng()
    params = oms.setup(group=group, rng=rng)
    rows = []
    for n in n_list:
        if n < 1:
            raise ValueError("chain lengths must be positive")
        rows.append(_oms_row(params, rng, n, repeats))
    for msg_len in (1, 2):
        for n in n_list:
            rows.append(_sas_row(params.group, rng, msg_len, n, repeats))
    return BenchReport(curve=params.group.name, repeats=repeats, rows=rows)
