//! Personalized PageRank treated as an operator on the probability simplex.
//!
//! The crate computes the operator's fixed points exactly from graph
//! structure and verifies them dynamically. The pieces:
//!
//! - [`graph`]: edge-list parsing, degree summaries, and the row-stochastic
//!   transition matrix with dangling-row flags.
//! - [`structure`]: strongly connected components, the condensation DAG, and
//!   the block upper-triangular normal form with dangling clusters last.
//! - [`spectral`]: left Perron vectors of irreducible blocks, the resolvent
//!   action `x ↦ x^T X(λ)`, and degree-based shortcuts for undirected and
//!   Eulerian graphs.
//! - [`pagerank`]: the operator itself, the feedback iteration
//!   `x_k^T = x_{k-1}^T X(λ)`, closed-form iteration limits via absorption
//!   masses, and the fixed-point classifier.
//! - [`oracle`]: dense brute-force references used only by test code.
//!
//! For a strongly connected graph the iteration converges to the unique
//! Perron vector regardless of the starting distribution; otherwise all mass
//! drains into the dangling clusters and the fixed points form the convex
//! hull of the per-cluster Perron vertices.

pub mod error;
pub mod graph;
mod lu;
pub mod oracle;
pub mod pagerank;
pub mod spectral;
pub mod structure;

pub use error::{Error, Result};
pub use graph::{degrees, parse_edge_list, row_normalize, DegreeSummary, Edge, Graph, RowStochastic};
pub use pagerank::{
    classify_fixed_points, feedback_iterate, is_fixed_point, pagerank, predict_limit,
    resolve_dangling, DanglingPolicy, FixedPointReport, IterationTrace, PageRankConfig,
};
pub use spectral::{
    apply_resolvent, apply_resolvent_linear, degree_perron_eulerian, degree_perron_undirected,
    left_perron, norm1, norm1_diff, PerronResult, ResolventConfig, ResolventMethod,
};
pub use structure::{
    block_pattern_holds, dangling_clusters, graph_of_rows, is_eulerian_balanced, normal_form,
    scc, NormalBlock, NormalForm, SccDecomposition,
};
