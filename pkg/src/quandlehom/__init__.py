"""Exact-arithmetic homology and cup-product calculus for finite racks and quandles."""

__version__ = "0.1.0"

from .quandles import (
    AugmentedQuandle,
    AxiomReport,
    Classification,
    FiniteGroup,
    FiniteQuandle,
    InvalidStructureError,
    XSetAction,
    build_alexander,
    build_conjugation,
    build_dihedral,
    build_trivial,
    check_axioms,
    classify,
    inner_group,
    load_quandle,
    make_xset,
)
from .complexes import (
    CellCapExceededError,
    ComplexSlice,
    GF,
    RackSpace,
    Ring,
    SparseMatrix,
    SparseVector,
    TupleBasis,
    ZZ,
    boundary_matrices,
    mu_chain,
    quandle_quotient,
    structure_maps,
    verify_chain_map,
)
from .linalg import SpanFP, eliminate_fp, rank_fp, smith_normal_form, solve_fp
from .homology import (
    ClassRep,
    FpQuotientBasis,
    HomologyResult,
    bockstein_chain,
    bockstein_cochain,
    cohomology_fp,
    homology_fp,
    homology_z,
)
from .cup import (
    Cochain,
    CupCalculus,
    OperatorCalculus,
    class_cup,
    coproduct_pairing,
    homology_operation,
    identity_suite,
    subset_sign,
)
from .triangulation import Triangulation, triangulate_compare
from .nodes import (
    BettiTable,
    Node,
    QNode,
    betti_recursion,
    enumerate_m_basis,
    enumerate_q_nodes,
    node_compare,
    predicted_torsion_counts,
)
from .analysis import (
    bockstein_reduced_exactness,
    compare_all,
    operation_injectivity,
    quandle_homology_table,
    ring_structure_report,
)
