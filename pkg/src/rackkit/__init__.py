"""Finite racks, their lattices of subracks, and the properties of those lattices."""

from .catalog import (
    builtin_group,
    conjugation_rack,
    dihedral,
    p_rack,
    parse_rack,
    resolve,
    serialize_rack,
    transposition_quandle,
    trivial_quandle,
)
from .errors import (
    CapExceededError,
    EnumerationOverflow,
    OrthocomplementUndecided,
    RackAxiomError,
    RackInputError,
    TheoremViolation,
)
from .lattice import SubrackLattice, enumerate_subracks
from .props import PropertyReport, property_report
from .racks import RackTable, closure, is_quandle, orbits, verify_rack

__version__ = "0.1.0"

__all__ = [
    "CapExceededError", "EnumerationOverflow", "OrthocomplementUndecided", "PropertyReport",
    "RackAxiomError", "RackInputError", "RackTable", "SubrackLattice", "TheoremViolation",
    "builtin_group", "closure", "conjugation_rack", "dihedral", "enumerate_subracks",
    "is_quandle", "orbits", "p_rack", "parse_rack", "property_report", "resolve",
    "serialize_rack", "transposition_quandle", "trivial_quandle", "verify_rack",
]
