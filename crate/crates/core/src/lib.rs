//! Counting simple paths between two vertices of a directed graph.
//!
//! Before any counting runs, the graph can be pruned to the vertices that lie
//! both in the forward scope of the source and the backward scope of the
//! target ([`pruning`]). Counting is then done either exactly by backtracking
//! ([`exact`]) or approximately by sequential importance sampling
//! ([`estimator`]).

pub mod error;
pub mod estimator;
pub mod exact;
pub mod graph;
pub mod pruning;

pub use error::{Error, Result};
pub use estimator::{
    estimate_count, sample_path, sampler_exact_moments, EstimateReport, ExactMoments,
    SampleOutcome, Variant,
};
pub use exact::{
    espe_count, espe_enumerate, pruned_espe_count, pruned_espe_enumerate, CountLimits,
    CountOutcome, PathCount, PrunedCountOutcome,
};
pub use graph::{
    load_edge_list, load_edge_list_file, write_edge_list, BuildStats, DirectedGraph,
    InducedSubgraph, LoadOptions, LoadedGraph, VertexId,
};
pub use pruning::{
    compute_inverse_scope, compute_scope, prune, scope_stats, PrunedGraph, ScopeResult,
    ScopeStats, VertexSet,
};
