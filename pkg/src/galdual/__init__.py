"""Exact verification toolkit for mod-l Galois images of glued surfaces."""

from galdual.exactmat import (
    LAdicMatrix,
    ModMatrix,
    SmithForm,
    charpoly,
    det,
    format_matrix,
    mat_inv,
    mat_mul,
    parse_ladic,
    parse_mod,
    reduce_mod,
    smith_normal_form,
)
from galdual.formstab import (
    contragredient_census,
    format_census,
    glued_form_stabilizer,
    stabilizer_census,
    structure_invariants,
    subgroup_conjugacy_classes,
)
from galdual.groupengine import (
    common_stable_lines,
    fixed_vectors,
    generate_closure,
    intertwiner_space,
    perm_groups_conjugate,
    permutation_character,
    representations_equivalent,
    to_permutation_group,
    trivial_multiplicity,
)
from galdual.lattice import (
    KernelSpec,
    change_basis_from_kernel,
    change_basis_from_transformation,
    dual_isogeny_matrix,
    format_kernel,
    parse_kernel,
    polarization_type,
    pullback_polarization,
    pushforward_polarization,
    standard_polarization_matrix,
)
from galdual.paramgroups import (
    ImageGroup,
    ParamPoint,
    glued_polarization,
    image_rho_A,
    image_rho_Adual_contragredient,
    image_rho_Adual_isogeny,
    paired_generators,
    paired_group,
    sample_records,
    slab_records,
)
from galdual.verifier import (
    CheckReport,
    all_passed,
    check_ids,
    format_report,
    format_reports,
    run_all,
    run_check,
)

__all__ = [
    "CheckReport",
    "ImageGroup",
    "KernelSpec",
    "LAdicMatrix",
    "ModMatrix",
    "ParamPoint",
    "SmithForm",
    "all_passed",
    "change_basis_from_kernel",
    "change_basis_from_transformation",
    "charpoly",
    "check_ids",
    "common_stable_lines",
    "contragredient_census",
    "det",
    "dual_isogeny_matrix",
    "fixed_vectors",
    "format_census",
    "format_kernel",
    "format_matrix",
    "format_report",
    "format_reports",
    "generate_closure",
    "glued_form_stabilizer",
    "glued_polarization",
    "image_rho_A",
    "image_rho_Adual_contragredient",
    "image_rho_Adual_isogeny",
    "intertwiner_space",
    "mat_inv",
    "mat_mul",
    "paired_generators",
    "paired_group",
    "parse_kernel",
    "parse_ladic",
    "parse_mod",
    "perm_groups_conjugate",
    "permutation_character",
    "polarization_type",
    "pullback_polarization",
    "pushforward_polarization",
    "reduce_mod",
    "representations_equivalent",
    "run_all",
    "run_check",
    "sample_records",
    "slab_records",
    "smith_normal_form",
    "stabilizer_census",
    "standard_polarization_matrix",
    "structure_invariants",
    "subgroup_conjugacy_classes",
    "to_permutation_group",
    "trivial_multiplicity",
]
