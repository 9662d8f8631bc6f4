"""Ordered multi-signatures with aggregatable public keys over type-3 pairings.

Layers, bottom up:

- ``omsig.groups``   pairing backends, randomness, hashing, byte envelopes
- ``omsig.ds``       randomizable base signatures on vector messages
- ``omsig.sas``      sequential aggregation with shared parameters
- ``omsig.oms``      order-binding multi-signatures with key aggregation
- ``omsig.registry`` certified-key registry
- ``omsig.harness``  security-game runners and reduction mechanics
- ``omsig.bench``    size/pairing-count/timing instrumentation
- ``omsig.cli``      operator command line
"""

from . import ds, errors, groups, oms, registry, sas

__version__ = "0.1.0"

__all__ = ["ds", "errors", "groups", "oms", "registry", "sas", "__version__"]
