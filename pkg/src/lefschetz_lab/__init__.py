"""Local standard bases, reduction modulo p and Frobenius closure probes."""

from .kernels import BACKEND
from .ring import (
    LOCAL,
    ParseError,
    Polynomial,
    RingContext,
    RingError,
    format_polynomial,
    lead_coefficient,
    parse_polynomial,
    parse_ring_file,
    serialize_ring_file,
    valuation,
)
from .stdbasis import (
    INFINITE,
    LocalIdeal,
    NormalForm,
    StandardBasis,
    colon,
    hilbert_samuel,
    intersect,
    length_artinian,
    membership,
    normal_form,
    s_pair,
    standard_basis,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "INFINITE",
    "LOCAL",
    "LocalIdeal",
    "NormalForm",
    "ParseError",
    "Polynomial",
    "RingContext",
    "RingError",
    "StandardBasis",
    "colon",
    "format_polynomial",
    "hilbert_samuel",
    "intersect",
    "lead_coefficient",
    "length_artinian",
    "membership",
    "normal_form",
    "parse_polynomial",
    "parse_ring_file",
    "s_pair",
    "serialize_ring_file",
    "standard_basis",
    "valuation",
]
