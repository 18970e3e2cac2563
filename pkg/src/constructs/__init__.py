"""Construct algebra: combinator/composer hypermatrix products and friends."""

from .hypermatrix import (
    AlgebraSpec,
    ConformabilityError,
    Hypermatrix,
    cprod2,
    cprod3,
    cprod_general,
    gprod,
    hypermatrix_from_json,
    hypermatrix_to_json,
    validate_conformable,
)
from .algebras import (
    INSTANCE_KINDS,
    check_duality,
    complement_entries,
    elementwise_baseexp,
    elementwise_exp,
    identity_construct,
    make_algebra,
    trace_collapse,
)

__all__ = [
    "AlgebraSpec",
    "ConformabilityError",
    "Hypermatrix",
    "cprod2",
    "cprod3",
    "cprod_general",
    "gprod",
    "hypermatrix_from_json",
    "hypermatrix_to_json",
    "validate_conformable",
    "INSTANCE_KINDS",
    "check_duality",
    "complement_entries",
    "elementwise_baseexp",
    "elementwise_exp",
    "identity_construct",
    "make_algebra",
    "trace_collapse",
]
