"""BN254 group backend on top of the mcl library (via mclbn256).

This is the default backend.  G1 points serialize to 32 bytes and G2 points
to 64 bytes (mcl compressed form).  BN254's G1 has cofactor 1, so any
decoded on-curve point is a valid group element; G2 lives on a twist with a
nontrivial cofactor and every decode is followed by an explicit subgroup
check.

The 3-term products used by the verifiers run as one Miller-loop batch plus
a single final exponentiation, which is what makes verification cost
independent of everything but the pair count.

Hot paths call the mcl C API directly through the library handle and
allocate result structures with ``__new__`` (ctypes zero-fills them);
the mclbn256 operator wrappers would re-randomize fresh objects and add
per-op overhead that is measurable at this package's call volumes.
"""

from __future__ import annotations

import ctypes

from mclbn256 import Fr, G1, G2, GT
from mclbn256.mclbn256 import lib as _lib

from ..errors import BadHeader, BadLength, OffCurve, WrongSubgroup

_G1_BYTES = 32
_G2_BYTES = 64
_FR_BYTES = 32

_FR_SIZE = None  # ctypes sizes, filled at group construction
_G1_SIZE = None
_G2_SIZE = None


def _order() -> int:
    buf = ctypes.create_string_buffer(256)
    n = _lib.mclBn_getCurveOrder(buf, 256)
    if n == 0:
        raise RuntimeError("mcl refused to report the curve order")
    return int(buf.value.decode())


def _fr(value: int) -> Fr:
    # caller guarantees 0 <= value < order; setLittleEndian is exact there
    out = Fr.__new__(Fr)
    _lib.mclBnFr_setLittleEndian(out.s, value.to_bytes(_FR_BYTES, "little"), _FR_BYTES)
    return out


class G1Elem:
    """Element of the first source group (multiplicative notation)."""

    __slots__ = ("raw",)
    group = None  # set by make_group()

    def __init__(self, raw: G1) -> None:
        self.raw = raw

    def __mul__(self, other: "G1Elem") -> "G1Elem":
        out = G1.__new__(G1)
        _lib.mclBnG1_add(out.d, self.raw.d, other.raw.d)
        return G1Elem(out)

    def __pow__(self, k: int) -> "G1Elem":
        out = G1.__new__(G1)
        _lib.mclBnG1_mul(out.d, self.raw.d, _fr(k % self.group.order).s)
        return G1Elem(out)

    def inverse(self) -> "G1Elem":
        out = G1.__new__(G1)
        _lib.mclBnG1_neg(out.d, self.raw.d)
        return G1Elem(out)

    def is_identity(self) -> bool:
        return bool(_lib.mclBnG1_isZero(self.raw.d))

    def to_bytes(self) -> bytes:
        return self.raw.serialize()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, G1Elem) and bool(
            _lib.mclBnG1_isEqual(self.raw.d, other.raw.d)
        )

    def __hash__(self) -> int:
        return hash(self.to_bytes())

    def __repr__(self) -> str:
        return f"G1Elem({self.to_bytes().hex()[:16]}..)"


class G2Elem:
    """Element of the second source group (multiplicative notation)."""

    __slots__ = ("raw",)
    group = None

    def __init__(self, raw: G2) -> None:
        self.raw = raw

    def __mul__(self, other: "G2Elem") -> "G2Elem":
        out = G2.__new__(G2)
        _lib.mclBnG2_add(out.d2, self.raw.d2, other.raw.d2)
        return G2Elem(out)

    def __pow__(self, k: int) -> "G2Elem":
        out = G2.__new__(G2)
        _lib.mclBnG2_mul(out.d2, self.raw.d2, _fr(k % self.group.order).s)
        return G2Elem(out)

    def inverse(self) -> "G2Elem":
        out = G2.__new__(G2)
        _lib.mclBnG2_neg(out.d2, self.raw.d2)
        return G2Elem(out)

    def is_identity(self) -> bool:
        return bool(_lib.mclBnG2_isZero(self.raw.d2))

    def to_bytes(self) -> bytes:
        return self.raw.serialize()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, G2Elem) and bool(
            _lib.mclBnG2_isEqual(self.raw.d2, other.raw.d2)
        )

    def __hash__(self) -> int:
        return hash(self.to_bytes())

    def __repr__(self) -> str:
        return f"G2Elem({self.to_bytes().hex()[:16]}..)"


class GTElem:
    """Element of the target group."""

    __slots__ = ("raw",)
    group = None

    def __init__(self, raw: GT) -> None:
        self.raw = raw

    def __mul__(self, other: "GTElem") -> "GTElem":
        out = GT.__new__(GT)
        _lib.mclBnGT_mul(out.d12, self.raw.d12, other.raw.d12)
        return GTElem(out)

    def __pow__(self, k: int) -> "GTElem":
        out = GT.__new__(GT)
        _lib.mclBnGT_pow(out.d12, self.raw.d12, _fr(k % self.group.order).s)
        return GTElem(out)

    def is_one(self) -> bool:
        return bool(_lib.mclBnGT_isOne(self.raw.d12))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GTElem) and bool(
            _lib.mclBnGT_isEqual(self.raw.d12, other.raw.d12)
        )

    def __hash__(self) -> int:
        return hash(self.raw.serialize())


class Bn254Group:
    """Type-3 pairing group description for BN254."""

    name = "bn254"
    g1_bytes = _G1_BYTES
    g2_bytes = _G2_BYTES
    scalar_bytes = _FR_BYTES

    def __init__(self) -> None:
        self.order = _order()
        self.g1_base = G1Elem(G1.base_point())
        self.g2_base = G2Elem(G2.base_point())
        self._g1_raw_t = type(self.g1_base.raw.d)
        self._g2_raw_t = type(self.g2_base.raw.d2)
        self._fr_raw_t = type(_fr(0).s)
        self._g1_size = ctypes.sizeof(self._g1_raw_t)
        self._g2_size = ctypes.sizeof(self._g2_raw_t)

    # -- construction ------------------------------------------------------

    def g1_identity(self) -> G1Elem:
        return G1Elem(G1.__new__(G1))  # zero-filled structure is the identity

    def g2_identity(self) -> G2Elem:
        return G2Elem(G2.__new__(G2))

    def gt_one(self) -> GTElem:
        raw = GT.__new__(GT)
        _lib.mclBnGT_setInt(raw.d12, 1)
        return GTElem(raw)

    # -- decoding ----------------------------------------------------------

    def decode_g1(self, data: bytes) -> G1Elem:
        if len(data) != _G1_BYTES:
            raise BadLength(f"G1 point must be {_G1_BYTES} bytes, got {len(data)}")
        data = bytes(data)
        try:
            raw = G1.deserialize(data)
        except ValueError as exc:
            raise OffCurve("not a valid G1 encoding") from exc
        elem = G1Elem(raw)  # cofactor 1: on-curve implies the right subgroup
        if elem.to_bytes() != data:
            raise BadHeader("G1 encoding is not canonical")
        return elem

    def decode_g2(self, data: bytes) -> G2Elem:
        if len(data) != _G2_BYTES:
            raise BadLength(f"G2 point must be {_G2_BYTES} bytes, got {len(data)}")
        data = bytes(data)
        try:
            raw = G2.deserialize(data)
        except ValueError as exc:
            raise OffCurve("not a valid G2 encoding") from exc
        if not bool(_lib.mclBnG2_isZero(raw.d2)) and not raw.valid_order():
            raise WrongSubgroup("G2 point is on the twist but outside the subgroup")
        elem = G2Elem(raw)
        if elem.to_bytes() != data:
            raise BadHeader("G2 encoding is not canonical")
        return elem

    # -- batched ops -------------------------------------------------------

    def g1_multiexp(self, elems, scalars) -> G1Elem:
        elems = list(elems)
        scalars = list(scalars)
        if len(elems) != len(scalars):
            raise ValueError("multiexp arity mismatch")
        if not elems:
            return self.g1_identity()
        n = len(elems)
        pts = (self._g1_raw_t * n)()
        scs = (self._fr_raw_t * n)()
        order = self.order
        for i in range(n):
            ctypes.memmove(pts[i], elems[i].raw.d, self._g1_size)
            _lib.mclBnFr_setLittleEndian(
                scs[i], (scalars[i] % order).to_bytes(_FR_BYTES, "little"), _FR_BYTES
            )
        out = G1.__new__(G1)
        _lib.mclBnG1_mulVec(out.d, pts, scs, n)
        return G1Elem(out)

    def g2_multiexp(self, elems, scalars) -> G2Elem:
        elems = list(elems)
        scalars = list(scalars)
        if len(elems) != len(scalars):
            raise ValueError("multiexp arity mismatch")
        if not elems:
            return self.g2_identity()
        n = len(elems)
        pts = (self._g2_raw_t * n)()
        scs = (self._fr_raw_t * n)()
        order = self.order
        for i in range(n):
            ctypes.memmove(pts[i], elems[i].raw.d2, self._g2_size)
            _lib.mclBnFr_setLittleEndian(
                scs[i], (scalars[i] % order).to_bytes(_FR_BYTES, "little"), _FR_BYTES
            )
        out = G2.__new__(G2)
        _lib.mclBnG2_mulVec(out.d2, pts, scs, n)
        return G2Elem(out)

    def g2_product(self, elems) -> G2Elem:
        """Plain product, cheaper than a multiexp with unit exponents."""
        out = G2.__new__(G2)
        for elem in elems:
            _lib.mclBnG2_add(out.d2, out.d2, elem.raw.d2)
        return G2Elem(out)

    # -- pairings (call through groups.pairing* so they are counted) --------

    def _pairing(self, x: G1Elem, y: G2Elem) -> GTElem:
        out = GT.__new__(GT)
        _lib.mclBn_pairing(out.d12, x.raw.d, y.raw.d2)
        return GTElem(out)

    def _product_is_one(self, pairs) -> bool:
        n = len(pairs)
        a = (self._g1_raw_t * n)()
        b = (self._g2_raw_t * n)()
        for i, (x, y) in enumerate(pairs):
            ctypes.memmove(a[i], x.raw.d, self._g1_size)
            ctypes.memmove(b[i], y.raw.d2, self._g2_size)
        acc = GT.__new__(GT)
        _lib.mclBn_millerLoopVec(acc.d12, a, b, n)
        _lib.mclBn_finalExp(acc.d12, acc.d12)
        return bool(_lib.mclBnGT_isOne(acc.d12))


def make_group() -> Bn254Group:
    group = Bn254Group()
    G1Elem.group = group
    G2Elem.group = group
    GTElem.group = group
    return group
