"""Graph-to-manifold reduction toolkit.

Builds, solves, and verifies the reductions that encode stability number,
max cut, and clique number as linear and quadratic programs over Stiefel,
Grassmann, and flag manifolds, plus the closed-form solver for
unconstrained linear objectives over flags and a Riemannian-ascent
numerical cross-check.
"""

from .closedform import (
    build_unconstrained_flag_lp,
    permutation_oracle_flag_lp,
    solve_flag_lp,
)
from .errors import (
    AmbiguityError,
    CapacityError,
    CertificateError,
    DecodeError,
    InfeasibleError,
    ManiredError,
    NumericalError,
    ParseError,
    PreconditionError,
    RankDeficiencyError,
    UnsupportedInstanceError,
)
from .graphs import (
    Certificate,
    Graph,
    adjacency_matrix,
    clique_number,
    generate,
    max_cut,
    motzkin_straus_value,
    parse_dimacs,
    stability_number,
    to_dimacs,
)
from .manifolds import (
    Flag,
    FlagSignature,
    Grassmann,
    Stiefel,
    default_parameters,
    grassmann_to_flag,
    membership,
    partial_sums,
    permutohedron_vertices,
    random_point,
    schur_horn_membership,
    threshold_k,
    trace_constant,
)
from .matrixcore import (
    diag_vector,
    majorization_check,
    qr_orthonormalize,
    sym_eig,
    symmetrize,
)
from .reductions import (
    Constraint,
    LinearInstance,
    QuadraticInstance,
    VerificationReport,
    build_flag_feasibility,
    build_flag_qp,
    build_grassmann_feasibility,
    build_stiefel_lp,
    build_stiefel_qp,
    check_feasibility_exact,
    classify_instance,
    decode_certificate,
    flag_qp_value,
    flag_qp_witness,
    flag_qp_witness_exact,
    instance_from_json,
    instance_graph,
    instance_to_json,
    round_to_integer_grid,
    solve_hypercube_qp_exact,
    solve_stiefel_diag_exact,
    verify_theorem,
)
from .riemannian import (
    AscentConfig,
    AscentTrace,
    ascend,
    qr_retract,
    stiefel_tangent_project,
)

__version__ = "0.1.0"
