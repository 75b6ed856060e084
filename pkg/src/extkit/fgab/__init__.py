from .snf import IntMatrixDecomposition, smith_normal_form, integer_kernel, solve_integer
from .group import FgError, FgGroup, FgHom, Presented, present, subgroup, quotient, direct_sum, in_span, same_subgroup, solve_in_span
from .homext import (
    ExtSpace,
    HomSpace,
    ext_fg,
    ext_space,
    hom_fg,
    hom_group,
    hom_space,
    relation_module,
    solve_extension_membership,
)
