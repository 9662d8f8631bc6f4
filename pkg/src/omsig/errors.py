"""Exception hierarchy shared by the whole toolkit.

Decode failures are split into the four kinds a codec can report; scheme
operations raise ``SchemeError`` subclasses where the algorithms return a
rejection value instead of a signature.  Verification predicates never
raise: they return ``False``.
"""


class OmsigError(Exception):
    """Base class for all toolkit errors."""


class DecodeError(OmsigError):
    """A byte string could not be decoded into a value."""

    kind = "decode"


class BadLength(DecodeError):
    kind = "bad-length"


class BadHeader(DecodeError):
    kind = "bad-header"


class OffCurve(DecodeError):
    kind = "off-curve"


class WrongSubgroup(DecodeError):
    kind = "wrong-subgroup"


class InvalidParams(OmsigError):
    """Public parameters failed their load-time consistency relation."""


class SchemeError(OmsigError):
    """An algorithm rejected its input instead of producing a value."""


class ZeroMessage(SchemeError):
    """Message scalar (or one of its coordinates) reduced to zero."""


class InvalidChain(SchemeError):
    """The aggregate supplied to an append did not verify."""


class DuplicateKey(SchemeError):
    """An ordered key list contains the same public key twice."""


class TooManySigners(SchemeError):
    """Key list longer than the configured signer bound."""


class PositionOverflow(SchemeError):
    """Signing position would exceed the configured signer bound."""


class HarnessFault(OmsigError):
    """A reduction-harness precondition was violated."""


class StrategyFault(HarnessFault):
    """A scripted adversary broke the game's oracle protocol."""
