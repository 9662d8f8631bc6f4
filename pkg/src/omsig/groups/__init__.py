"""Type-3 pairing group layer: backends, randomness, encoding, envelopes.

Two interchangeable curve backends sit behind one interface: ``bn254``
(mcl, the default) and ``bls12381`` (arkworks).  ``get_group(name)``
returns the singleton group description; everything else in the package is
written against that interface.
"""

from .backend import (
    CURVE_IDS,
    DEFAULT_CURVE,
    get_group,
    group_from_id,
    pairing,
    pairing_counter,
    pairing_product_is_one,
)
from .encoding import DS_TAG, OMS_TAG, SAS_TAG, encode_message, sas_coordinate_tag
from .envelope import (
    HEADER_LEN,
    TYPE_APK,
    TYPE_G1,
    TYPE_G2,
    TYPE_PK,
    TYPE_PP,
    TYPE_SCALAR,
    TYPE_SIG,
    decode_g1,
    decode_g2,
    decode_scalar,
    encode_g1,
    encode_g2,
    encode_scalar,
    unwrap,
    wrap,
)
from .rng import Rng, SeededRng, SystemRng, sample_nonzero_scalar, sample_scalar

__all__ = [
    "CURVE_IDS",
    "DEFAULT_CURVE",
    "DS_TAG",
    "HEADER_LEN",
    "OMS_TAG",
    "Rng",
    "SAS_TAG",
    "SeededRng",
    "SystemRng",
    "TYPE_APK",
    "TYPE_G1",
    "TYPE_G2",
    "TYPE_PK",
    "TYPE_PP",
    "TYPE_SCALAR",
    "TYPE_SIG",
    "decode_g1",
    "decode_g2",
    "decode_scalar",
    "encode_g1",
    "encode_g2",
    "encode_message",
    "encode_scalar",
    "get_group",
    "group_from_id",
    "pairing",
    "pairing_counter",
    "pairing_product_is_one",
    "sample_nonzero_scalar",
    "sample_scalar",
    "sas_coordinate_tag",
    "unwrap",
    "wrap",
]
