"""Fixed byte envelope for every serialized value.

Layout: 4-byte magic ``OMSK`` | 1-byte version | 1-byte type tag | payload.
Payloads that carry group elements start with a 1-byte curve id so files are
self-describing; exact point lengths depend on the backend curve and are
published in the README.
"""

from __future__ import annotations

from ..errors import BadHeader, BadLength
from .backend import CURVE_IDS, group_from_id

MAGIC = b"OMSK"
VERSION = 1
HEADER_LEN = 6

TYPE_SCALAR = 0x01
TYPE_G1 = 0x02
TYPE_G2 = 0x03
TYPE_SIG = 0x04
TYPE_PK = 0x05
TYPE_APK = 0x06
TYPE_PP = 0x07

_TYPE_NAMES = {
    TYPE_SCALAR: "scalar",
    TYPE_G1: "G1 element",
    TYPE_G2: "G2 element",
    TYPE_SIG: "signature",
    TYPE_PK: "public key",
    TYPE_APK: "aggregated public key",
    TYPE_PP: "public parameters",
}


def wrap(type_tag: int, payload: bytes) -> bytes:
    return MAGIC + bytes([VERSION, type_tag]) + payload


def unwrap(blob: bytes, expected_tag: int) -> bytes:
    if len(blob) < HEADER_LEN:
        raise BadLength("envelope shorter than its header")
    if blob[:4] != MAGIC:
        raise BadHeader("bad magic")
    if blob[4] != VERSION:
        raise BadHeader(f"unsupported envelope version {blob[4]}")
    if blob[5] != expected_tag:
        want = _TYPE_NAMES.get(expected_tag, hex(expected_tag))
        got = _TYPE_NAMES.get(blob[5], hex(blob[5]))
        raise BadHeader(f"expected a {want} envelope, found {got}")
    return blob[HEADER_LEN:]


# -- element and scalar codecs ----------------------------------------------


def encode_scalar(group, value: int) -> bytes:
    value %= group.order
    payload = bytes([CURVE_IDS[group.name]]) + value.to_bytes(
        group.scalar_bytes, "little"
    )
    return wrap(TYPE_SCALAR, payload)


def decode_scalar(blob: bytes):
    """Return (group, value); rejects non-canonical (>= order) encodings."""
    payload = unwrap(blob, TYPE_SCALAR)
    if len(payload) < 1:
        raise BadLength("scalar payload missing curve id")
    group = group_from_id(payload[0])
    body = payload[1:]
    if len(body) != group.scalar_bytes:
        raise BadLength(
            f"scalar must be {group.scalar_bytes} bytes, got {len(body)}"
        )
    value = int.from_bytes(body, "little")
    if value >= group.order:
        raise BadHeader("scalar encoding is not canonical (>= group order)")
    return group, value


def encode_g1(elem) -> bytes:
    payload = bytes([CURVE_IDS[elem.group.name]]) + elem.to_bytes()
    return wrap(TYPE_G1, payload)


def decode_g1(blob: bytes):
    payload = unwrap(blob, TYPE_G1)
    if len(payload) < 1:
        raise BadLength("G1 payload missing curve id")
    group = group_from_id(payload[0])
    return group.decode_g1(payload[1:])


def encode_g2(elem) -> bytes:
    payload = bytes([CURVE_IDS[elem.group.name]]) + elem.to_bytes()
    return wrap(TYPE_G2, payload)


def decode_g2(blob: bytes):
    payload = unwrap(blob, TYPE_G2)
    if len(payload) < 1:
        raise BadLength("G2 payload missing curve id")
    group = group_from_id(payload[0])
    return group.decode_g2(payload[1:])
