"""Fast binary embeddings h = sign(D Phi R x), baselines and analysis tools."""

from ._fbe import (
    ConfigError,
    DomainError,
    FormatError,
    Projector,
    ShapeError,
    SizeError,
    angle,
    binomial,
    bound_curve,
    charikar,
    estimate_rip,
    hamming,
    hamming_normalized,
    isometry_bound,
    lemma1_exact_bound,
    lemma1_stirling_bound,
    retrieval,
    storage_bytes,
    theorem1_lower_bound,
)

METHODS = ("lsh", "cbe", "bp", "proposed")

__all__ = [
    "METHODS",
    "ConfigError",
    "DomainError",
    "FormatError",
    "Projector",
    "ShapeError",
    "SizeError",
    "angle",
    "binomial",
    "bound_curve",
    "charikar",
    "estimate_rip",
    "hamming",
    "hamming_normalized",
    "isometry_bound",
    "lemma1_exact_bound",
    "lemma1_stirling_bound",
    "retrieval",
    "storage_bytes",
    "theorem1_lower_bound",
]
