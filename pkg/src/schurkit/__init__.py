"""Schur rings over finite abelian groups: construction, enumeration, duality, schurity."""

from .groups import (
    AbelianGroup,
    GroupError,
    Quotient,
    Section,
    Subgroup,
    all_subgroups,
    automorphism_group,
    make_group,
    omega_subgroup,
    orbits,
    orthogonal_complement,
    pairing_exponent,
    parse_group_spec,
    partition_stabilizer,
    quotient_group,
    subgroup_generated,
)
from .perms import PermGroup

__all__ = [
    "AbelianGroup", "GroupError", "PermGroup", "Quotient", "Section", "Subgroup",
    "all_subgroups", "automorphism_group", "make_group", "omega_subgroup",
    "orbits", "orthogonal_complement", "pairing_exponent", "parse_group_spec",
    "partition_stabilizer", "quotient_group", "subgroup_generated",
]
