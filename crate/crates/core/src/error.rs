// SPDX-License-Identifier: Apache-2.0

use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("temporal graph has no time points")]
    EmptyTimes,
    #[error("times are not strictly increasing at index {index} ({previous} then {current})")]
    NonIncreasingTimes { index: usize, previous: i64, current: i64 },
    #[error("{times} time points but {snapshots} snapshots")]
    SnapshotCountMismatch { times: usize, snapshots: usize },
    #[error("node `{node}` listed twice")]
    DuplicateNode { node: String },
    #[error("snapshot {snapshot}: unknown node `{node}`")]
    UnknownNode { snapshot: usize, node: String },
    #[error("snapshot {snapshot}: self-loop on `{node}`")]
    SelfLoop { snapshot: usize, node: String },
    #[error("snapshot {snapshot}: node `{node}` has no colour")]
    MissingColour { snapshot: usize, node: String },
    #[error("snapshot {snapshot}: duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { snapshot: usize, u: String, v: String },
    #[error("node `{node}` changes colour over time")]
    NotColourPersistent { node: String },
    #[error("no edges to derive time points from")]
    EmptyEdgeSet,
    #[error("edge labelled with time {time} which is not in the explicit time list")]
    UnlistedTime { time: i64 },
    #[error("timestamped node ({node}, #{time_index}) does not exist")]
    UnknownTimestampedNode { node: String, time_index: usize },
    #[error("knowledge graph edge references node {index}, but there are only {len} nodes")]
    EdgeOutOfRange { index: usize, len: usize },
    #[error("knowledge graph relation label {label} is negative")]
    NegativeRelation { label: i64 },
    #[error("knowledge graph has {nodes} nodes but {colours} colours")]
    ColourCountMismatch { nodes: usize, colours: usize },
    #[error("layer {layer} was not computed (only {computed} layers available)")]
    LayerNotComputed { layer: usize, computed: usize },
    #[error("graph has {nodes} nodes, above the isomorphism search limit of {limit}")]
    SizeLimitExceeded { nodes: usize, limit: usize },
    #[error("model configuration mismatch: {0}")]
    ConfigMismatch(String),
    #[error("integer overflow in layer {layer}")]
    ArithmeticOverflow { layer: usize },
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
}
