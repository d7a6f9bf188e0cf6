"""prism: exact quantum and Alexander-type invariants of virtual and
prismatic links, with symplectic-rank genus lower bounds."""

from .ring import (
    ExponentVector,
    LaurentPoly,
    RingContext,
    UnitSpec,
    add,
    canonical_form,
    eq_up_to_unit,
    mul,
    parse,
    substitute,
)

__all__ = [
    "ExponentVector",
    "LaurentPoly",
    "RingContext",
    "UnitSpec",
    "add",
    "canonical_form",
    "eq_up_to_unit",
    "mul",
    "parse",
    "substitute",
]
