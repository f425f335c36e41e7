"""Exact highest-weight module computations for W(2,2) and the twisted Heisenberg-Virasoro algebra."""

from .algebra import AlgebraKind, CentralCharges, Family, I, L, Mode, W, bracket, format_rational, make_charges, rational
from .characters import h_pr, hv_irr_character, p2_series, partition_p2, w22_irr_character
from .embedding import PsiAction, branch, psi_map, v_r_minus, verify_w22_relations, verma_branch_decomposition, w_mode
from .linalg import LevelMatrix, Subspace, nullspace
from .pbw import ModuleSpec, ModuleVector, PBWMonomial, graded_basis, normal_order, verma_spec
from .screening import ExtModuleU, build_ext_module, kernel_dims, s_apply, verify_screening_commutators
from .verma import (
    AtypicalityReport,
    HighestWeightSpec,
    classify,
    find_cosingular,
    find_singular,
    gram_matrix,
    irreducible,
    submodule_closure,
    verma,
    verma_quotient,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraKind", "AtypicalityReport", "CentralCharges", "ExtModuleU", "Family", "HighestWeightSpec",
    "I", "L", "LevelMatrix", "Mode", "ModuleSpec", "ModuleVector", "PBWMonomial", "PsiAction",
    "Subspace", "W", "bracket", "branch", "build_ext_module", "classify", "find_cosingular",
    "find_singular", "format_rational", "gram_matrix", "graded_basis", "h_pr", "hv_irr_character",
    "irreducible", "kernel_dims", "make_charges", "normal_order", "nullspace", "p2_series",
    "partition_p2", "psi_map", "rational", "s_apply", "submodule_closure", "v_r_minus",
    "verify_screening_commutators", "verify_w22_relations", "verma", "verma_branch_decomposition",
    "verma_quotient", "verma_spec", "w22_irr_character", "w_mode",
]
