//! Quasi-tree-partitions: graph primitives, tree-decompositions,
//! partition construction, pattern detection and clustered colouring.

pub mod colouring;
pub mod construct;
pub mod gen;
pub mod graph;
pub mod io;
pub mod patterns;
pub mod qtp;
pub mod treedec;

pub use colouring::{
    clean_clustering_bound, colour_clean_qtp, colour_fractional_qtp, colour_heavy_qtp,
    fractional_clustering_bound, heavy_clustering_bound, validate_colouring, ColouringError,
    ColouringReport, ListAssignment, SetColouring,
};
pub use construct::{
    build_qtp_degeneracy, build_qtp_excluded, build_qtp_excluded_clean, build_qtp_kst_free,
    BuildError,
};
pub use gen::{generate, FamilyParams, GenError};
pub use graph::{Graph, GraphError, Vertex, VertexSet};
pub use io::{
    emit_document, emit_graph_text, parse_document, parse_graph_text, qtp_dot, treedec_dot,
    Document, GraphDoc, ParseError, QtpDoc, TreedecDoc, SCHEMA,
};
pub use patterns::{
    c_bound, extension_or_skewer, find_kst, find_kst_star, rho_oracle, verify_kst,
    verify_kst_star, verify_pattern, verify_rho_witness, KstStarWitness, KstWitness,
    PatternError, PatternWitness, RhoResult, RhoWitness,
};
pub use qtp::{
    loads_and_weight, to_treedec, validate_qtp, vertical_path_check, CheckMode, QtpError,
    QtpReport, QuasiTreePartition, RootedTree, VerticalPathReport,
};
pub use treedec::{
    balanced_separator, heuristic_treedec, treewidth_exact_small, validate_treedec,
    EliminationRule, SeparatorSplit, TreeDecomposition, TreedecError, TreedecReport,
};
