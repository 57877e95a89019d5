"""Butterflies (weak morphisms) between finite crossed modules."""

from .abelian import Complex2, ab_add, ab_hom_classes, ab_make, ab_neg, ab_zero, make_complex, mapping_cone_check
from .butterfly import (
    Butterfly,
    ButterflyIso,
    cokernel,
    compose,
    find_isomorphism,
    flip,
    identity_butterfly,
    is_equivalence,
    is_exact_at,
    is_split,
    kernel,
    les_fiber,
    les_kernel,
    make_butterfly,
    of_strict,
    pi1_map,
    pi2_map,
)
from .classify import enumerate_butterflies, enumerate_extensions, verify_torsor
from .cocycle import WeakCocycle, butterfly_from_cocycle, cocycle_from_butterfly
from .cohomology import h_n, make_module, obstruction, postnikov_class, trivial_module
from .config import set_size_limit, size_limit
from .errors import SizeLimit, ValidationError, WeakMapsError
from .extension import Extension, make_extension
from .group import FiniteGroup, cyclic, direct_product, dihedral, klein_four, make_group, quaternion, symmetric
from .hom import GroupHom, make_action, make_hom
from .xmod import CrossedModule, aut_xmod, group_as_xmod, make_crossed_module, abelian_as_xmod

__all__ = [
    "ab_add",
    "ab_hom_classes",
    "ab_make",
    "ab_neg",
    "ab_zero",
    "abelian_as_xmod",
    "aut_xmod",
    "Butterfly",
    "butterfly_from_cocycle",
    "ButterflyIso",
    "cocycle_from_butterfly",
    "cokernel",
    "Complex2",
    "compose",
    "CrossedModule",
    "cyclic",
    "dihedral",
    "direct_product",
    "enumerate_butterflies",
    "enumerate_extensions",
    "Extension",
    "find_isomorphism",
    "FiniteGroup",
    "flip",
    "group_as_xmod",
    "GroupHom",
    "h_n",
    "identity_butterfly",
    "is_equivalence",
    "is_exact_at",
    "is_split",
    "kernel",
    "klein_four",
    "les_fiber",
    "les_kernel",
    "make_action",
    "make_butterfly",
    "make_complex",
    "make_crossed_module",
    "make_extension",
    "make_group",
    "make_hom",
    "make_module",
    "mapping_cone_check",
    "obstruction",
    "of_strict",
    "pi1_map",
    "pi2_map",
    "postnikov_class",
    "quaternion",
    "set_size_limit",
    "size_limit",
    "SizeLimit",
    "symmetric",
    "trivial_module",
    "ValidationError",
    "verify_torsor",
    "WeakCocycle",
    "WeakMapsError",
]

__version__ = "0.1.0"
