"""Exact computation with graded frozen quivers with potentials.

The package builds the word quiver of a reduced Coxeter word, checks the
grading hypotheses of a frozen QP, extracts the degree-zero subalgebra and
its frozen-vertex quotient, reconstructs the quiver with potential of a
global-dimension-two presentation, and verifies everything against honest
module computations over the preprojective algebra, all in exact rational
arithmetic.
"""

from .quiver import (
    Arrow,
    Quiver,
    FrozenData,
    build_quiver,
    freeze,
    full_subquiver,
    to_dot,
    quiver_to_json,
    quiver_from_json,
)
from .paths import (
    Path,
    PathElement,
    AlgebraPresentation,
    TableAlgebra,
    NotStabilized,
    compose,
    path_of,
    stationary,
    quotient_basis,
    algebra_dimension,
    truncated_algebra,
)
from .potential import (
    Potential,
    FrozenQP,
    HypothesisReport,
    check_hypotheses,
    cyclic_derivative,
    cyclically_equivalent,
    is_reduced_qp,
    jacobian_relations,
    qp_to_json,
    qp_from_json,
)
from .subalgebra import (
    degree_zero_presentation,
    bar_quotient_presentation,
    bar_jacobian_qp,
)
from .keller import KellerExtension, keller_extend, verify_endomorphism_match
from .coxeter import (
    CoxeterSystem,
    coxeter_system,
    is_reduced,
    reduce_word,
    elements_equal,
    enumerate_group,
    all_reduced_words,
    reduced_words_up_to,
)
from .birs import BirsQP, last_occurrences, admissible_orientation, build_birs_qp
from .modrep import (
    FDModule,
    preprojective_presentation,
    lambda_w_algebra,
    tw_summands,
    hom_space,
    end_gabriel_quiver,
    projective_resolution,
    global_dimension,
    check_complex_exact,
)
from .verify import verify_example

__version__ = "0.1.0"
