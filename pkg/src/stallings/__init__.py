"""Computing with finitely generated subgroups of free groups.

Subgroups are represented by their folded core graphs; the package computes
intersections and joins, topological pushouts, incidence-matrix normal
forms, and runs a verification harness over the rank inequalities these
objects satisfy.
"""

from .core import (
    Subgroup,
    TrivialIntersectionError,
    basis,
    membership,
    normalize_nonextremal,
    subgroup_from_spec,
    subgroup_graph,
    three_regularize,
)
from .graphs import (
    IN,
    OUT,
    LabeledGraph,
    bouquet_of,
    disjoint_union,
    fold_to_immersion,
    trim_to_core,
    wedge,
)
from .matrices import (
    BipartiteSummary,
    IncidenceMatrix,
    NormalForm,
    NotNormalizedError,
    bipartite_delta,
    branch_vertices,
    entry_sum_bound,
    incidence_matrix,
    normal_form,
)
from .products import (
    LEFT,
    RIGHT,
    DoubleCosetDecomposition,
    DoubleCosetEntry,
    FiberProduct,
    JoinResult,
    PushoutResult,
    StarClassSummary,
    based_meet_core,
    double_cosets,
    fiber_product,
    intersection,
    isolated_vertex_scan,
    join,
    join_with_maps,
    topological_pushout,
)
from .verify import (
    FuzzConfig,
    FuzzReport,
    InstanceReport,
    Verdict,
    check_instance,
    check_sharpness_suite,
    check_squares_construction,
    corpus,
    derive_verdicts,
    fuzz,
    imrich_muller_probe,
    normalize_pair,
    random_subgroup,
)
from .words import Alphabet, RANK2, Word, WordSyntaxError, embed_into_rank2

__all__ = [
    "Alphabet",
    "BipartiteSummary",
    "DoubleCosetDecomposition",
    "DoubleCosetEntry",
    "FiberProduct",
    "FuzzConfig",
    "FuzzReport",
    "IN",
    "IncidenceMatrix",
    "InstanceReport",
    "JoinResult",
    "LEFT",
    "LabeledGraph",
    "NormalForm",
    "NotNormalizedError",
    "OUT",
    "PushoutResult",
    "RANK2",
    "RIGHT",
    "StarClassSummary",
    "Subgroup",
    "TrivialIntersectionError",
    "Verdict",
    "Word",
    "WordSyntaxError",
    "based_meet_core",
    "basis",
    "bipartite_delta",
    "bouquet_of",
    "branch_vertices",
    "check_instance",
    "check_sharpness_suite",
    "check_squares_construction",
    "corpus",
    "derive_verdicts",
    "disjoint_union",
    "double_cosets",
    "embed_into_rank2",
    "entry_sum_bound",
    "fiber_product",
    "fold_to_immersion",
    "fuzz",
    "imrich_muller_probe",
    "incidence_matrix",
    "intersection",
    "isolated_vertex_scan",
    "join",
    "join_with_maps",
    "membership",
    "normal_form",
    "normalize_nonextremal",
    "normalize_pair",
    "random_subgroup",
    "subgroup_from_spec",
    "subgroup_graph",
    "three_regularize",
    "topological_pushout",
    "trim_to_core",
    "wedge",
]
