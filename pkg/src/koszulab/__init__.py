"""koszulab: exact commutative-algebra engine for Koszul towers, local
cohomology and homology, adic completion, and graded local duality checks."""

from .field import Field, FieldElement, DEFAULT_PRIME
from .ring import RingDescriptor, Polynomial, parse_poly, format_poly

__all__ = [
    "Field",
    "FieldElement",
    "DEFAULT_PRIME",
    "RingDescriptor",
    "Polynomial",
    "parse_poly",
    "format_poly",
]
