"""Decide and probe consequence relations defined by finite logical matrices."""

from matcons.atlas import (
    Atlas,
    TheoryFamily,
    atlas_entails,
    lindenbaum_sigma_sets,
    lindenbaum_theories,
    make_atlas,
    product_atlas,
)
from matcons.conformity import (
    SearchBudget,
    Verdict,
    check_couniform_class,
    check_couniform_syntactic,
    check_uniform_bundle,
    check_uniform_syntactic,
    revalidate,
    single_matrix_report,
)
from matcons.extension import (
    LiftedConsequence,
    conservativity_check,
    lifted_entails,
    shared_atlas_check,
    wojcicki_entails,
)
from matcons.kernels import BACKEND
from matcons.language import (
    Formula,
    Fragment,
    Language,
    Signature,
    Substitution,
    apply_substitution,
    enumerate_fragment,
    extend_language,
    is_primitive_extension,
    parse_formula,
    print_formula,
    variables_of,
)
from matcons.matrix import (
    FiniteAlgebra,
    FiniteMatrix,
    MatrixClass,
    SigmaFamily,
    cn_restricted,
    entails_class,
    entails_matrix,
    entails_via_sigma,
    evaluate,
    is_inconsistent,
    is_model,
    sigma_family,
)

__version__ = "0.1.0"
