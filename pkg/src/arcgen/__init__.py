"""arcgen: constant-valency arc-transitive graph families whose symmetry
groups need unboundedly many generators, verified exactly at desk scale.
"""

from .caps import Caps, CapExceeded, DEFAULT_CAPS
from .field_linalg import FpMatrix, FpSubspace, kron, rref, unipotent_matrix
from .graph_builder import (
    CayleySpec,
    Graph,
    build_family_graph,
    cayley,
    export_graph,
    parse_graph,
    wreath_product,
)
from .group_algebra import (
    AbelianH,
    build_e_basis,
    gamma_chain,
    index_lower_bound,
    min_generators_local,
    outer_action,
    section_dims,
)
from .harness import BoundReport, VTInstance, bound_report, load_instance
from .perm_group import (
    Perm,
    PermGroup,
    exponent,
    frattini_decomposition_check,
    frattini_rank,
    is_arc_transitive,
    is_automorphism,
    is_vertex_transitive,
    local_action,
    normal_closure,
)
from .pipeline import (
    Bundle,
    ClaimReport,
    ConstructionParams,
    build_bundle,
    verify_theorem1,
)

__version__ = "0.1.0"

__all__ = [
    "AbelianH",
    "BoundReport",
    "Bundle",
    "Caps",
    "CapExceeded",
    "CayleySpec",
    "ClaimReport",
    "ConstructionParams",
    "DEFAULT_CAPS",
    "FpMatrix",
    "FpSubspace",
    "Graph",
    "Perm",
    "PermGroup",
    "VTInstance",
    "bound_report",
    "build_bundle",
    "build_e_basis",
    "build_family_graph",
    "cayley",
    "exponent",
    "export_graph",
    "frattini_decomposition_check",
    "frattini_rank",
    "gamma_chain",
    "index_lower_bound",
    "is_arc_transitive",
    "is_automorphism",
    "is_vertex_transitive",
    "kron",
    "load_instance",
    "local_action",
    "min_generators_local",
    "normal_closure",
    "outer_action",
    "parse_graph",
    "rref",
    "section_dims",
    "unipotent_matrix",
    "verify_theorem1",
    "wreath_product",
]
