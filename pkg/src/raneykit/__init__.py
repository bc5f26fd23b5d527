"""raneykit: finite MT-algebras, Raney extensions, and Funayama envelopes."""

from .lattice import (
    FiniteLattice,
    Subset,
    chain,
    downset_lattice,
    find_isomorphism,
    heyting_implication,
    is_boolean,
    is_distributive,
    is_subframe,
    join_irreducibles,
    join_of,
    meet_of,
    powerset_lattice,
    validate_lattice,
)

__all__ = [
    "FiniteLattice",
    "Subset",
    "chain",
    "downset_lattice",
    "find_isomorphism",
    "heyting_implication",
    "is_boolean",
    "is_distributive",
    "is_subframe",
    "join_irreducibles",
    "join_of",
    "meet_of",
    "powerset_lattice",
    "validate_lattice",
]
