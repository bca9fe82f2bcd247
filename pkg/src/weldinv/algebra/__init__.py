from .groups import (
    AbelianGroup,
    CrossedModule,
    FiniteGroup,
    GroupTooLarge,
    cyclic_group,
    make_gl_module,
    make_sign_module,
    make_trivial_E,
    matrix_inverse_mod,
    parse_cm_spec,
    parse_table_file,
    symmetric_group,
)
from .linalg import SnfResult, count_solutions_mod, invariant_factors, smith_normal_form

__all__ = [
    "AbelianGroup",
    "CrossedModule",
    "FiniteGroup",
    "GroupTooLarge",
    "SnfResult",
    "count_solutions_mod",
    "cyclic_group",
    "invariant_factors",
    "make_gl_module",
    "make_sign_module",
    "make_trivial_E",
    "matrix_inverse_mod",
    "parse_cm_spec",
    "parse_table_file",
    "smith_normal_form",
    "symmetric_group",
]
