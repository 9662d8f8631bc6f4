"""BLS12-381 group backend on top of arkworks (via py-arkworks-bls12381).

Alternative backend at the conservative end of the 128-bit tier.  G1 points
serialize to 48 bytes and G2 points to 96 bytes (ZCash-style compressed
form).  Decoding validates both curve membership and subgroup order.
"""

from __future__ import annotations

from py_arkworks_bls12381 import G1Point, G2Point, GT, Scalar

from ..errors import BadHeader, BadLength, OffCurve, WrongSubgroup

_G1_BYTES = 48
_G2_BYTES = 96
_ORDER = 0x73EDA753299D7D483339D80809A1D80553BDA402FFFE5BFEFFFFFFFF00000001


def _scalar(value: int) -> Scalar:
    return Scalar.from_le_bytes((value % _ORDER).to_bytes(32, "little"))


class G1Elem:
    """Element of the first source group (multiplicative notation)."""

    __slots__ = ("raw",)
    group = None

    def __init__(self, raw: G1Point) -> None:
        self.raw = raw

    def __mul__(self, other: "G1Elem") -> "G1Elem":
        return G1Elem(self.raw + other.raw)

    def __pow__(self, k: int) -> "G1Elem":
        return G1Elem(self.raw * _scalar(k))

    def inverse(self) -> "G1Elem":
        return G1Elem(-self.raw)

    def is_identity(self) -> bool:
        return self.raw == G1Point.identity()

    def to_bytes(self) -> bytes:
        return bytes(self.raw.to_compressed_bytes())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, G1Elem) and self.raw == other.raw

    def __hash__(self) -> int:
        return hash(self.to_bytes())

    def __repr__(self) -> str:
        return f"G1Elem({self.to_bytes().hex()[:16]}..)"


class G2Elem:
    """Element of the second source group (multiplicative notation)."""

    __slots__ = ("raw",)
    group = None

    def __init__(self, raw: G2Point) -> None:
        self.raw = raw

    def __mul__(self, other: "G2Elem") -> "G2Elem":
        return G2Elem(self.raw + other.raw)

    def __pow__(self, k: int) -> "G2Elem":
        return G2Elem(self.raw * _scalar(k))

    def inverse(self) -> "G2Elem":
        return G2Elem(-self.raw)

    def is_identity(self) -> bool:
        return self.raw == G2Point.identity()

    def to_bytes(self) -> bytes:
        return bytes(self.raw.to_compressed_bytes())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, G2Elem) and self.raw == other.raw

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
        return GTElem(self.raw * other.raw)

    def __pow__(self, k: int) -> "GTElem":
        # the binding has no native GT exponentiation; square-and-multiply
        k %= _ORDER
        acc = GT.one()
        base = self.raw
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return GTElem(acc)

    def is_one(self) -> bool:
        return self.raw == GT.one()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GTElem) and self.raw == other.raw

    def __hash__(self) -> int:
        return 0  # GT exposes no stable serialization; equality still works


class Bls12381Group:
    """Type-3 pairing group description for BLS12-381."""

    name = "bls12381"
    g1_bytes = _G1_BYTES
    g2_bytes = _G2_BYTES
    scalar_bytes = 32

    def __init__(self) -> None:
        self.order = _ORDER
        self.g1_base = G1Elem(G1Point())
        self.g2_base = G2Elem(G2Point())

    def g1_identity(self) -> G1Elem:
        return G1Elem(G1Point.identity())

    def g2_identity(self) -> G2Elem:
        return G2Elem(G2Point.identity())

    def gt_one(self) -> GTElem:
        return GTElem(GT.one())

    def decode_g1(self, data: bytes) -> G1Elem:
        if len(data) != _G1_BYTES:
            raise BadLength(f"G1 point must be {_G1_BYTES} bytes, got {len(data)}")
        data = bytes(data)
        try:
            elem = G1Elem(G1Point.from_compressed_bytes(data))
        except ValueError:
            try:
                G1Point.from_compressed_bytes_unchecked(data)
            except ValueError as exc:
                raise OffCurve("not a valid G1 encoding") from exc
            raise WrongSubgroup("G1 point is on the curve but outside the subgroup")
        # arkworks tolerates junk beneath an infinity flag; enforce canonicity
        if elem.to_bytes() != data:
            raise BadHeader("G1 encoding is not canonical")
        return elem

    def decode_g2(self, data: bytes) -> G2Elem:
        if len(data) != _G2_BYTES:
            raise BadLength(f"G2 point must be {_G2_BYTES} bytes, got {len(data)}")
        data = bytes(data)
        try:
            elem = G2Elem(G2Point.from_compressed_bytes(data))
        except ValueError:
            try:
                G2Point.from_compressed_bytes_unchecked(data)
            except ValueError as exc:
                raise OffCurve("not a valid G2 encoding") from exc
            raise WrongSubgroup("G2 point is on the curve but outside the subgroup")
        if elem.to_bytes() != data:
            raise BadHeader("G2 encoding is not canonical")
        return elem

    def g1_multiexp(self, elems, scalars) -> G1Elem:
        elems = list(elems)
        if not elems:
            return self.g1_identity()
        scals = [_scalar(s) for s in scalars]
        if len(scals) != len(elems):
            raise ValueError("multiexp arity mismatch")
        return G1Elem(G1Point.multiexp_unchecked([e.raw for e in elems], scals))

    def g2_multiexp(self, elems, scalars) -> G2Elem:
        elems = list(elems)
        if not elems:
            return self.g2_identity()
        scals = [_scalar(s) for s in scalars]
        if len(scals) != len(elems):
            raise ValueError("multiexp arity mismatch")
        return G2Elem(G2Point.multiexp_unchecked([e.raw for e in elems], scals))

    def g2_product(self, elems) -> G2Elem:
        acc = G2Point.identity()
        for elem in elems:
            acc = acc + elem.raw
        return G2Elem(acc)

    def _pairing(self, x: G1Elem, y: G2Elem) -> GTElem:
        return GTElem(GT.pairing(x.raw, y.raw))

    def _product_is_one(self, pairs) -> bool:
        lhs = [x.raw for x, _ in pairs]
        rhs = [y.raw for _, y in pairs]
        return GT.multi_pairing(lhs, rhs) == GT.one()


def make_group() -> Bls12381Group:
    group = Bls12381Group()
    G1Elem.group = group
    G2Elem.group = group
    GTElem.group = group
    return group
