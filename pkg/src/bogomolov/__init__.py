"""Exact computations with Bogomolov multipliers of exponent-p class-2 groups."""

from .core import (
    B0Result,
    ClassTwoElement,
    GroupParameters,
    bogomolov,
    commutator_coset_surjectivity,
    decomposable_closure,
    group_commutator,
    group_multiply,
    group_power,
    jacobi_absorption_check,
    torsion_witness_d4,
)
from .errors import (
    BogomolovError,
    BudgetExceeded,
    IndeterminacyLocus,
    NotDecomposable,
    ParameterError,
)
from .exterior import decompose, is_decomposable, quadric_system, wedge, wedge_square
from .grassmannian import enumerate_subspaces, gaussian_binomial, sample_subspace
from .linalg import (
    Field,
    Subspace,
    kernel_basis,
    rref,
    subspace_contains,
    subspace_intersect,
    subspace_sum,
)
from .snf import smith_normal_form

__version__ = "0.1.0"

__all__ = [
    "B0Result",
    "BogomolovError",
    "BudgetExceeded",
    "ClassTwoElement",
    "Field",
    "GroupParameters",
    "IndeterminacyLocus",
    "NotDecomposable",
    "ParameterError",
    "Subspace",
    "bogomolov",
    "commutator_coset_surjectivity",
    "decomposable_closure",
    "decompose",
    "enumerate_subspaces",
    "gaussian_binomial",
    "group_commutator",
    "group_multiply",
    "group_power",
    "is_decomposable",
    "jacobi_absorption_check",
    "kernel_basis",
    "quadric_system",
    "rref",
    "sample_subspace",
    "smith_normal_form",
    "subspace_contains",
    "subspace_intersect",
    "subspace_sum",
    "torsion_witness_d4",
    "wedge",
    "wedge_square",
]
