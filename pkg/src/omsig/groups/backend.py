"""Backend registry, pairing counter, and the counted pairing entry points.

Group elements are written multiplicatively to match the scheme algebra:
``a * b`` is the group operation, ``a ** k`` is scalar exponentiation and
``a.inverse()`` the group inverse.  Scalars are plain Python ints reduced
mod the group order.

Every pairing evaluation in the package goes through :func:`pairing` or
:func:`pairing_product_is_one` so the global counter always reflects the
true number of pairing operations (the verifiers are expected to show
exactly 3 pairs per call).
"""

from __future__ import annotations

import threading

from ..errors import BadHeader

DEFAULT_CURVE = "bn254"

#: curve id bytes used inside serialized payloads
CURVE_IDS = {"bn254": 0x01, "bls12381": 0x02}
CURVE_NAMES = {v: k for k, v in CURVE_IDS.items()}


class PairingCounter:
    """Thread-safe count of pairing operations evaluated so far."""

    def __init__(self) -> None:
        self._count = 0
        self._lock = threading.Lock()

    def add(self, k: int) -> None:
        with self._lock:
            self._count += k

    def read(self) -> int:
        with self._lock:
            return self._count

    def reset(self) -> None:
        with self._lock:
            self._count = 0


pairing_counter = PairingCounter()

_GROUPS: dict[str, object] = {}
_GROUPS_LOCK = threading.Lock()


def get_group(name: str = DEFAULT_CURVE):
    """Return the (singleton) group description for a curve name."""
    try:
        return _GROUPS[name]
    except KeyError:
        pass
    with _GROUPS_LOCK:
        if name not in _GROUPS:
            if name == "bn254":
                from . import bn254

                _GROUPS[name] = bn254.make_group()
            elif name == "bls12381":
                from . import bls12381

                _GROUPS[name] = bls12381.make_group()
            else:
                raise ValueError(f"unknown curve: {name!r}")
        return _GROUPS[name]


def group_from_id(curve_id: int):
    try:
        return get_group(CURVE_NAMES[curve_id])
    except KeyError:
        raise BadHeader(f"unknown curve id {curve_id:#x}") from None


def pairing(x, y):
    """Bilinear map e(x, y); counts as one pairing operation."""
    pairing_counter.add(1)
    return x.group._pairing(x, y)


def pairing_product_is_one(pairs) -> bool:
    """True iff the product of e(x_i, y_i) over all pairs is the GT identity.

    Counts ``len(pairs)`` pairing operations.  This is the only primitive the
    scheme verifiers use, which keeps the counter an exact record of
    verification cost.
    """
    pairs = list(pairs)
    if not pairs:
        raise ValueError("pairing product needs at least one pair")
    pairing_counter.add(len(pairs))
    return pairs[0][0].group._product_is_one(pairs)
