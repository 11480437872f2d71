"""Exact combinatorics of extended affine Weyl groups, alcoves and Frobenius twists.

Modules:

- ``root_datum``: root systems, coweights and the group Lambda / Q^vee.
- ``affine_weyl``: the extended affine Weyl group, Bruhat order, admissible sets.
- ``building_geometry``: alcoves, residues, gates, acute cones, wall distances.
- ``sigma_structures``: diagram automorphisms, EO elements, rational elements, separation.
- ``finite_flag_lab``: flags over finite fields and Deligne-Lusztig varieties in type A.
- ``cli``: batch front end.
"""

from .affine_weyl import AffineElement, AffineWeylGroup, admissible_set, bruhat_leq, min_coset_rep
from .root_datum import RootDatum, build_root_datum

__all__ = [
    "AffineElement",
    "AffineWeylGroup",
    "RootDatum",
    "admissible_set",
    "bruhat_leq",
    "build_root_datum",
    "min_coset_rep",
]
