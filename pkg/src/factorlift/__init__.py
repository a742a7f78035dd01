"""factorlift: certified constructions of universal dynamical systems.

Exact rational arithmetic end to end; every construction ships with a
machine-checkable certificate of the identities it claims.
"""

from .injections import (
    ComponentType,
    EmbeddingCertificate,
    PartialInjection,
    classify_components,
    decode_index,
    embed_injection,
    successor,
)
from .pairing import pair, unpair

__all__ = [
    "ComponentType",
    "EmbeddingCertificate",
    "PartialInjection",
    "classify_components",
    "decode_index",
    "embed_injection",
    "pair",
    "successor",
    "unpair",
]
