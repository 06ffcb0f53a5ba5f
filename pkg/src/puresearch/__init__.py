"""Local-first search client over tiered, reputation-weighted label sources."""

from .labels import LabelRecord, ParseWarning, canonicalize_url, parse_label_file, serialize_label_file
from .ranking import Policy, ScoredResult, adjustment_factor, rerank
from .trust import (
    AssertionSet,
    TrustModel,
    build_trust_model,
    expectation,
    naive_expectation,
    naive_reputation,
    reputation,
)

__version__ = "0.1.0"

__all__ = [
    "AssertionSet",
    "LabelRecord",
    "ParseWarning",
    "Policy",
    "ScoredResult",
    "TrustModel",
    "adjustment_factor",
    "build_trust_model",
    "canonicalize_url",
    "expectation",
    "naive_expectation",
    "naive_reputation",
    "parse_label_file",
    "rerank",
    "reputation",
    "serialize_label_file",
    "__version__",
]
