"""Walk multiplets of cospectral vertex pairs in weighted graphs.

Detect cospectral vertex pairs, enumerate walk multiplets, apply
cospectrality-preserving modifications (cones, interconnections,
singlet removal), and verify the eigenvector structure these objects
impose (parity bases, zero sums).
"""

from .cospectral import (
    CospectralCertificate,
    CospectralRefusal,
    CriterionDisagreement,
    all_cospectral_pairs,
    is_cospectral_pair,
    is_walk_singlet,
    walk_matrix,
)
from .eigenstructure import (
    IndeterminateParity,
    ParityEigenbasis,
    ZeroSumReport,
    build_parity_basis,
    compact_support_report,
    count_parity_vectors,
    verify_zero_sums,
)
from .generators import (
    TEMPLATES,
    PipelineResult,
    TemplateInstance,
    break_symmetry_pipeline,
    build_template,
    sample_weight_classes,
)
from .graph import (
    Graph,
    GraphFormatError,
    VertexPair,
    WeightedIndicatorVector,
    cone_over,
    delete_vertices,
    graph_from_edges,
    load_graph,
    save_graph,
)
from .linalg import DEFAULT_TOL, FLOAT, RATIONAL, Matrix, Tolerance
from .multiplets import (
    BudgetExceeded,
    ConditionMatrix,
    Multiplet,
    check_condition,
    condition_matrix,
    enumerate_multiplets,
    union_multiplets,
    weight_space,
)
from .symmetry import (
    AutomorphismReport,
    find_automorphisms,
    has_exchange_automorphism,
    refine_colors,
)
from .transforms import (
    TransformRecord,
    TransformRefused,
    VerificationFailed,
    attach_graph_to_singlet,
    extend_by_cone,
    interconnect_multiplets,
    remove_vertex_checked,
    removable_multiplet_check,
    toggle_pair_edge,
    verify_cone_iff,
)

__version__ = "0.1.0"
