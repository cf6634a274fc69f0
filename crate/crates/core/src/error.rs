use thiserror::Error;

use crate::dag::VertexSet;

/// Errors raised across the library.
///
/// Variants raised before a graph exists carry labels; variants raised
/// while querying an existing graph carry vertex ids of that graph.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("invalid vertex label {0:?}: labels must be non-empty and whitespace-free")]
    InvalidLabel(String),
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
    #[error("self-loop at {0:?}")]
    SelfLoop(String),
    #[error("duplicate edge {0:?} -> {1:?}")]
    DuplicateEdge(String, String),
    #[error("cycle detected: {}", .0.join(" -> "))]
    CycleDetected(Vec<String>),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("cannot remove the last vertex of a graph")]
    LastVertex,
    #[error("size limit exceeded: {size} > {cap}")]
    SizeLimitExceeded { size: usize, cap: usize },
    #[error("label {0:?} is already in use")]
    LabelCollision(String),
    #[error("not tree-leaf-child: inner vertex {0:?} has no tree-leaf child")]
    NotTreeLeafChild(String),
    #[error("query set is empty")]
    EmptyQuery,
    #[error("query has no common ancestor")]
    NoLca,
    #[error("query has {} least common ancestors", .0.len())]
    AmbiguousLca(VertexSet),
    #[error("no member of the set system contains the query")]
    NoSuperset,
    #[error("rule (O*) violated: L(W|{witness}) has no unique minimal vertex")]
    OStarViolated { witness: String },
    #[error("graph does not have the global lca-property")]
    NotGlobalLca,
    #[error("graph is not a network")]
    NotANetwork,
    #[error("not constructible by (O*) leaf attachments: {reason} (prefix of {prefix_size} vertices)")]
    NotHolju { prefix_size: usize, reason: String },
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("inconsistent descendant family: {0}")]
    InconsistentFamily(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
