// SPDX-License-Identifier: Apache-2.0

//! Knowledge graphs and the two temporal-graph encodings.
//!
//! Both encodings have one node per timestamped node and label edges with
//! exact time differences `t_j - t_i >= 0`:
//!
//! * [`k_glob`] links `(v, t_i) -> (u, t_j)` for every edge `{u, v}` at `t_i`
//!   and every later-or-equal `t_j`; this mirrors message passing from the
//!   neighbour's own (past) time point.
//! * [`k_loc`] links `(v, t_j) -> (u, t_j)` instead, so all edges stay inside
//!   one time point; this mirrors message passing from the neighbour's
//!   current-time embedding.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::tgraph::{TemporalGraph, TimestampedNode};

/// Relation label: an exact, non-negative time difference.
pub type Relation = i64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KgEdge {
    pub relation: Relation,
    pub source: usize,
    pub target: usize,
}

/// Directed, relation-labelled, node-coloured graph.
///
/// Edges are kept deduplicated and sorted by `(target, relation, source)` with
/// a per-target offset table, so the incoming `r`-neighbourhood of a node is a
/// contiguous slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeGraph {
    nodes: Vec<TimestampedNode>,
    colours: Vec<String>,
    edges: Vec<KgEdge>,
    in_offsets: Vec<usize>,
    relations: BTreeSet<Relation>,
}

/// Which input graph a node of a [`disjoint_union`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Origin {
    First,
    Second,
}

impl KnowledgeGraph {
    pub fn new(nodes: Vec<TimestampedNode>, colours: Vec<String>, edges: Vec<KgEdge>) -> Result<Self> {
        if nodes.len() != colours.len() {
            return Err(Error::ColourCountMismatch {
                nodes: nodes.len(),
                colours: colours.len(),
            });
        }
        for e in &edges {
            for idx in [e.source, e.target] {
                if idx >= nodes.len() {
                    return Err(Error::EdgeOutOfRange {
                        index: idx,
                        len: nodes.len(),
                    });
                }
            }
            if e.relation < 0 {
                return Err(Error::NegativeRelation { label: e.relation });
            }
        }
        Ok(Self::from_checked(nodes, colours, edges))
    }

    fn from_checked(nodes: Vec<TimestampedNode>, colours: Vec<String>, mut edges: Vec<KgEdge>) -> Self {
        edges.sort_unstable_by_key(|e| (e.target, e.relation, e.source));
        edges.dedup();
        let mut in_offsets = alloc::vec![0usize; nodes.len() + 1];
        for e in &edges {
            in_offsets[e.target + 1] += 1;
        }
        for i in 0..nodes.len() {
            in_offsets[i + 1] += in_offsets[i];
        }
        let relations = edges.iter().map(|e| e.relation).collect();
        Self {
            nodes,
            colours,
            edges,
            in_offsets,
            relations,
        }
    }

    pub fn empty() -> Self {
        Self::from_checked(Vec::new(), Vec::new(), Vec::new())
    }

    pub fn nodes(&self) -> &[TimestampedNode] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn colours(&self) -> &[String] {
        &self.colours
    }

    pub fn colour(&self, node: usize) -> &str {
        &self.colours[node]
    }

    /// Edges sorted by `(target, relation, source)`.
    pub fn edges(&self) -> &[KgEdge] {
        &self.edges
    }

    pub fn relations(&self) -> &BTreeSet<Relation> {
        &self.relations
    }

    /// All incoming edges of `node`, sorted by `(relation, source)`.
    pub fn incoming(&self, node: usize) -> &[KgEdge] {
        &self.edges[self.in_offsets[node]..self.in_offsets[node + 1]]
    }

    pub fn has_edge(&self, relation: Relation, source: usize, target: usize) -> bool {
        self.incoming(target)
            .binary_search_by_key(&(relation, source), |e| (e.relation, e.source))
            .is_ok()
    }

    /// Position of the first node equal to `tn`.
    pub fn position(&self, tn: &TimestampedNode) -> Option<usize> {
        self.nodes.iter().position(|n| n == tn)
    }

    /// `N_r(node)`: sources of `r`-labelled edges into `node`, ascending.
    pub fn in_neighbourhood(&self, node: usize, relation: Relation) -> Result<Vec<usize>> {
        if node >= self.nodes.len() {
            return Err(Error::EdgeOutOfRange {
                index: node,
                len: self.nodes.len(),
            });
        }
        let inc = self.incoming(node);
        let lo = inc.partition_point(|e| e.relation < relation);
        let hi = inc.partition_point(|e| e.relation <= relation);
        Ok(inc[lo..hi].iter().map(|e| e.source).collect())
    }

    /// Compressed incoming adjacency used by the refinement engine.
    pub(crate) fn in_offsets(&self) -> &[usize] {
        &self.in_offsets
    }
}

/// Position of `(v, time index i)` in the node list of either encoding.
pub fn kg_index(tg: &TemporalGraph, node: usize, time_index: usize) -> usize {
    node * tg.len() + time_index
}

fn encoding_nodes(tg: &TemporalGraph) -> (Vec<TimestampedNode>, Vec<String>) {
    let nodes: Vec<TimestampedNode> = tg.timestamped_nodes().collect();
    let colours = (0..tg.node_count())
        .flat_map(|v| tg.snapshots().iter().map(move |s| String::from(s.colour(v))))
        .collect();
    (nodes, colours)
}

fn encode(tg: &TemporalGraph, local: bool) -> KnowledgeGraph {
    let (nodes, colours) = encoding_nodes(tg);
    let times = tg.times();
    let mut edges = Vec::new();
    for (i, snap) in tg.snapshots().iter().enumerate() {
        for &(a, b) in snap.edges() {
            for j in i..tg.len() {
                let relation = times[j] - times[i];
                for (v, u) in [(a, b), (b, a)] {
                    let source = if local { kg_index(tg, v, j) } else { kg_index(tg, v, i) };
                    edges.push(KgEdge {
                        relation,
                        source,
                        target: kg_index(tg, u, j),
                    });
                }
            }
        }
    }
    KnowledgeGraph::from_checked(nodes, colours, edges)
}

/// Encoding for global message passing: `(t_j - t_i, (v, t_i), (u, t_j))` for
/// every `i <= j` and `{u, v}` in `E_i`, both orientations.
pub fn k_glob(tg: &TemporalGraph) -> KnowledgeGraph {
    encode(tg, false)
}

/// Encoding for local message passing: `(t_j - t_i, (v, t_j), (u, t_j))` for
/// every `i <= j` and `{u, v}` in `E_i`, both orientations.
pub fn k_loc(tg: &TemporalGraph) -> KnowledgeGraph {
    encode(tg, true)
}

/// Node-disjoint union. Relation labels are merged by value. Returns the
/// union and, per union node, its origin and index in the original graph.
pub fn disjoint_union(first: &KnowledgeGraph, second: &KnowledgeGraph) -> (KnowledgeGraph, Vec<(Origin, usize)>) {
    let offset = first.node_count();
    let mut nodes = first.nodes.clone();
    nodes.extend(second.nodes.iter().cloned());
    let mut colours = first.colours.clone();
    colours.extend(second.colours.iter().cloned());
    let mut edges = first.edges.clone();
    edges.extend(second.edges.iter().map(|e| KgEdge {
        relation: e.relation,
        source: e.source + offset,
        target: e.target + offset,
    }));
    let origin = (0..first.node_count())
        .map(|i| (Origin::First, i))
        .chain((0..second.node_count()).map(|i| (Origin::Second, i)))
        .collect();
    (KnowledgeGraph::from_checked(nodes, colours, edges), origin)
}

/// Temporal neighbourhood `N(v, t)`: every `(u, i')` with `{u, v}` in `E_{i'}`
/// and `t_{i'} <= t`. Returned as `(node index, time index)` pairs, ordered by
/// time index then node.
pub fn temporal_neighbourhood(tg: &TemporalGraph, tn: &TimestampedNode) -> Result<Vec<(usize, usize)>> {
    let (v, i) = tg.locate(tn)?;
    let mut out = Vec::new();
    for (k, snap) in tg.snapshots().iter().enumerate().take(i + 1) {
        for &(a, b) in snap.edges() {
            if a == v {
                out.push((b, k));
            } else if b == v {
                out.push((a, k));
            }
        }
    }
    out.sort_unstable_by_key(|&(u, k)| (k, u));
    Ok(out)
}
