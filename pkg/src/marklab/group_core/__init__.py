"""Computable groups, exact coefficient rings and exact matrices."""

from .groups import (
    CyclicGroup,
    DirectProduct,
    FreeGroup,
    Group,
    IntegerGroup,
    IntegerMatrixGroup,
    LaurentMatrixGroup,
    ModularMatrixGroup,
    PermutationGroup,
    QuotientGroup,
    Subgroup,
    dihedral_group,
    group_from_name,
    alternating_subgroup,
    element_order,
    evaluate_word,
    is_normal,
    is_subgroup,
    klein_group,
    symmetric_group,
)
from .matrices import LaurentMatrix, ModularMatrix, dump_matrices, load_matrices
from .rings import GF4, Integers, IntegersMod, MatrixRing, Ring, ring_from_name
from .sanov import SANOV_A, SANOV_B, SANOV_GENERATORS, sanov_membership
from .words import FreeWord, count_reduced_words, reduced_words
