//! Approximate graph edit distance via bipartite matching of
//! neighborhood trees.
//!
//! The library compares labeled graphs by assigning their vertices under
//! a ground cost that measures how similar their neighborhoods look: a
//! structure- and depth-preserving edit distance between (compressed)
//! neighborhood trees. The cost of the edit path read off the assignment
//! is the reported distance, always an upper bound on the exact graph
//! edit distance. An exact branch-and-bound solver for small instances
//! and a benchmark harness round out the crate.

#![forbid(unsafe_code)]

pub mod assignment;
pub mod bench;
pub mod canon;
pub mod cost;
pub mod dataset;
pub mod exact;
pub mod ged;
pub mod graph;
pub mod ntree;
pub mod sdted;

pub use assignment::{solve_lap, Assignment, CostMatrix, LapError};
pub use canon::{canonical_code, CanonicalCode, Canonizer, CodeId};
pub use cost::{cost, parse_cost, Cost, EditCostModel, LevelWeights};
pub use dataset::{parse_graphs, serialize_graphs, Dataset, ParseError};
pub use exact::{exact_ged, ExactError, EXACT_VERTEX_LIMIT};
pub use ged::{
    approx_ged, build_cost_matrix, derive_edit_path, ApproxConfig, ApproxResult, EditOp,
    EditPath, GedError, Method, PhaseTimings, VertexMapping,
};
pub use graph::{is_isomorphic, GraphError, LabelDictionary, LabelId, LabeledGraph};
pub use ntree::{NeighborhoodStructure, NodeId, NtreeError, StructureKind};
pub use sdted::{
    sdted, sdted_bruteforce, subtree_removal_cost, CacheScope, CacheStats, RemovalKind,
    SdtedCache, SdtedEngine, SdtedError,
};
