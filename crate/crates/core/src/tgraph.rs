// SPDX-License-Identifier: Apache-2.0

//! Temporal graphs in the snapshot representation, plus conversions to and
//! from the aggregated (timestamp-labelled multigraph) and event forms.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A node at one time point. `time_index` is the 0-based position in
/// [`TemporalGraph::times`], not the timestamp itself.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimestampedNode {
    pub node: String,
    pub time_index: usize,
}

impl TimestampedNode {
    pub fn new(node: impl Into<String>, time_index: usize) -> Self {
        Self {
            node: node.into(),
            time_index,
        }
    }
}

/// Formats as `node#index`.
impl core::fmt::Display for TimestampedNode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}#{}", self.node, self.time_index)
    }
}

/// One snapshot over the shared node set, stored by node position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    colours: Vec<String>,
    /// Sorted, each pair `(u, v)` with `u < v`.
    edges: Vec<(usize, usize)>,
}

impl Snapshot {
    pub fn colours(&self) -> &[String] {
        &self.colours
    }

    pub fn colour(&self, node: usize) -> &str {
        &self.colours[node]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&key).is_ok()
    }
}

/// Unvalidated snapshot as it appears in input files: colours keyed by node
/// id, edges as id pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawSnapshot {
    pub colours: BTreeMap<String, String>,
    pub edges: Vec<(String, String)>,
}

/// Unvalidated temporal graph; turn it into a [`TemporalGraph`] with [`validate`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawTemporalGraph {
    pub nodes: Vec<String>,
    pub times: Vec<i64>,
    pub snapshots: Vec<RawSnapshot>,
}

/// A validated temporal graph. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalGraph {
    node_ids: Vec<String>,
    index: BTreeMap<String, usize>,
    times: Vec<i64>,
    snapshots: Vec<Snapshot>,
}

/// Checks every structural invariant and reports the first violation.
pub fn validate(raw: &RawTemporalGraph) -> Result<TemporalGraph> {
    if raw.times.is_empty() {
        return Err(Error::EmptyTimes);
    }
    for (i, w) in raw.times.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(Error::NonIncreasingTimes {
                index: i + 1,
                previous: w[0],
                current: w[1],
            });
        }
    }
    if raw.times.len() != raw.snapshots.len() {
        return Err(Error::SnapshotCountMismatch {
            times: raw.times.len(),
            snapshots: raw.snapshots.len(),
        });
    }
    let mut index = BTreeMap::new();
    for (i, id) in raw.nodes.iter().enumerate() {
        if index.insert(id.clone(), i).is_some() {
            return Err(Error::DuplicateNode { node: id.clone() });
        }
    }

    let mut snapshots = Vec::with_capacity(raw.snapshots.len());
    for (s, snap) in raw.snapshots.iter().enumerate() {
        if let Some(unknown) = snap.colours.keys().find(|k| !index.contains_key(*k)) {
            return Err(Error::UnknownNode {
                snapshot: s,
                node: unknown.clone(),
            });
        }
        let mut colours = Vec::with_capacity(raw.nodes.len());
        for id in &raw.nodes {
            match snap.colours.get(id) {
                Some(c) => colours.push(c.clone()),
                None => {
                    return Err(Error::MissingColour {
                        snapshot: s,
                        node: id.clone(),
                    })
                }
            }
        }
        let mut edges = Vec::with_capacity(snap.edges.len());
        let mut seen = BTreeSet::new();
        for (u, v) in &snap.edges {
            let ui = *index.get(u).ok_or_else(|| Error::UnknownNode {
                snapshot: s,
                node: u.clone(),
            })?;
            let vi = *index.get(v).ok_or_else(|| Error::UnknownNode {
                snapshot: s,
                node: v.clone(),
            })?;
            if ui == vi {
                return Err(Error::SelfLoop {
                    snapshot: s,
                    node: u.clone(),
                });
            }
            let key = (ui.min(vi), ui.max(vi));
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge {
                    snapshot: s,
                    u: u.clone(),
                    v: v.clone(),
                });
            }
            edges.push(key);
        }
        edges.sort_unstable();
        snapshots.push(Snapshot { colours, edges });
    }

    Ok(TemporalGraph {
        node_ids: raw.nodes.clone(),
        index,
        times: raw.times.clone(),
        snapshots,
    })
}

impl TemporalGraph {
    /// Builds from index-based parts. Panics are avoided by routing through
    /// [`validate`]; this is the convenient constructor for generators.
    pub fn from_indexed(
        node_ids: Vec<String>,
        times: Vec<i64>,
        colours: Vec<Vec<String>>,
        edges: Vec<Vec<(usize, usize)>>,
    ) -> Result<Self> {
        let snapshots = colours
            .into_iter()
            .zip(edges)
            .map(|(cols, es)| RawSnapshot {
                colours: node_ids.iter().cloned().zip(cols).collect(),
                edges: es
                    .into_iter()
                    .map(|(u, v)| {
                        let name = |i: usize| node_ids.get(i).cloned().unwrap_or_default();
                        (name(u), name(v))
                    })
                    .collect(),
            })
            .collect();
        validate(&RawTemporalGraph {
            nodes: node_ids.clone(),
            times,
            snapshots,
        })
    }

    pub fn to_raw(&self) -> RawTemporalGraph {
        RawTemporalGraph {
            nodes: self.node_ids.clone(),
            times: self.times.clone(),
            snapshots: self
                .snapshots
                .iter()
                .map(|s| RawSnapshot {
                    colours: self.node_ids.iter().cloned().zip(s.colours.iter().cloned()).collect(),
                    edges: s
                        .edges
                        .iter()
                        .map(|&(u, v)| (self.node_ids[u].clone(), self.node_ids[v].clone()))
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn node_ids(&self) -> &[String] {
        &self.node_ids
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn times(&self) -> &[i64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    pub fn snapshot(&self, i: usize) -> &Snapshot {
        &self.snapshots[i]
    }

    /// Number of timestamped nodes, `|V| * n`.
    pub fn timestamped_count(&self) -> usize {
        self.node_count() * self.len()
    }

    /// Total number of (snapshot, edge) pairs.
    pub fn edge_count(&self) -> usize {
        self.snapshots.iter().map(|s| s.edges.len()).sum()
    }

    /// Resolves a timestamped node to `(node index, time index)`.
    pub fn locate(&self, tn: &TimestampedNode) -> Result<(usize, usize)> {
        match self.node_index(&tn.node) {
            Some(v) if tn.time_index < self.len() => Ok((v, tn.time_index)),
            _ => Err(Error::UnknownTimestampedNode {
                node: tn.node.clone(),
                time_index: tn.time_index,
            }),
        }
    }

    pub fn time_index_of(&self, time: i64) -> Option<usize> {
        self.times.binary_search(&time).ok()
    }

    /// All timestamped nodes in node-major order: `(v0,t0), (v0,t1), ...`.
    pub fn timestamped_nodes(&self) -> impl Iterator<Item = TimestampedNode> + '_ {
        self.node_ids
            .iter()
            .flat_map(move |id| (0..self.len()).map(move |i| TimestampedNode::new(id.clone(), i)))
    }

    /// Per-snapshot adjacency lists: `result[i][v]` holds neighbours of `v` in `E_i`, sorted.
    pub fn adjacency(&self) -> Vec<Vec<Vec<usize>>> {
        self.snapshots
            .iter()
            .map(|s| {
                let mut adj = alloc::vec![Vec::new(); self.node_count()];
                for &(u, v) in &s.edges {
                    adj[u].push(v);
                    adj[v].push(u);
                }
                for list in &mut adj {
                    list.sort_unstable();
                }
                adj
            })
            .collect()
    }

    /// Same graph with every timestamp moved by `delta`.
    pub fn shifted(&self, delta: i64) -> Self {
        let mut out = self.clone();
        for t in &mut out.times {
            *t += delta;
        }
        out
    }

    /// Renames node `v` to `names[v]`; the names must be distinct.
    pub fn renamed(&self, names: &[String]) -> Result<Self> {
        let colours = self.snapshots.iter().map(|s| s.colours.clone()).collect();
        let edges = self.snapshots.iter().map(|s| s.edges.clone()).collect();
        Self::from_indexed(names.to_vec(), self.times.clone(), colours, edges)
    }

    /// Node-disjoint union of two graphs over the same time points. Node ids
    /// of `other` must not clash with ours.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        if self.times != other.times {
            return Err(Error::InvalidParameter(String::from(
                "disjoint union needs identical time points",
            )));
        }
        let offset = self.node_count();
        let mut names = self.node_ids.clone();
        names.extend(other.node_ids.iter().cloned());
        let colours = self
            .snapshots
            .iter()
            .zip(&other.snapshots)
            .map(|(a, b)| {
                let mut c = a.colours.clone();
                c.extend(b.colours.iter().cloned());
                c
            })
            .collect();
        let edges = self
            .snapshots
            .iter()
            .zip(&other.snapshots)
            .map(|(a, b)| {
                let mut e = a.edges.clone();
                e.extend(b.edges.iter().map(|&(u, v)| (u + offset, v + offset)));
                e
            })
            .collect();
        Self::from_indexed(names, self.times.clone(), colours, edges)
    }
}

/// True iff every node keeps its colour across all snapshots.
pub fn is_colour_persistent(tg: &TemporalGraph) -> bool {
    first_colour_change(tg).is_none()
}

fn first_colour_change(tg: &TemporalGraph) -> Option<usize> {
    let first = tg.snapshots.first()?;
    (0..tg.node_count()).find(|&v| tg.snapshots[1..].iter().any(|s| s.colours[v] != first.colours[v]))
}

/// Static multigraph whose edges carry the timestamp at which they exist.
/// Only colour-persistent graphs have one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AggregatedGraph {
    /// Node id and its (time-independent) colour.
    pub nodes: Vec<(String, String)>,
    /// `(u, v, t)` with `u < v` by node position, sorted.
    pub edges: BTreeSet<(String, String, i64)>,
}

pub fn to_aggregated(tg: &TemporalGraph) -> Result<AggregatedGraph> {
    if let Some(v) = first_colour_change(tg) {
        return Err(Error::NotColourPersistent {
            node: tg.node_ids[v].clone(),
        });
    }
    let nodes = tg
        .node_ids
        .iter()
        .enumerate()
        .map(|(v, id)| (id.clone(), tg.snapshots[0].colours[v].clone()))
        .collect();
    let mut edges = BTreeSet::new();
    for (i, s) in tg.snapshots.iter().enumerate() {
        for &(u, v) in &s.edges {
            edges.insert((tg.node_ids[u].clone(), tg.node_ids[v].clone(), tg.times[i]));
        }
    }
    Ok(AggregatedGraph { nodes, edges })
}

/// Rebuilds the snapshot form. Time points are the distinct edge labels, or
/// `explicit_times` when given (needed to recover edgeless snapshots).
pub fn from_aggregated(agg: &AggregatedGraph, explicit_times: Option<&[i64]>) -> Result<TemporalGraph> {
    let times: Vec<i64> = match explicit_times {
        Some(ts) => ts.to_vec(),
        None => {
            let set: BTreeSet<i64> = agg.edges.iter().map(|e| e.2).collect();
            if set.is_empty() {
                return Err(Error::EmptyEdgeSet);
            }
            set.into_iter().collect()
        }
    };
    let colours: BTreeMap<String, String> = agg.nodes.iter().cloned().collect();
    let mut snapshots: Vec<RawSnapshot> = times
        .iter()
        .map(|_| RawSnapshot {
            colours: colours.clone(),
            edges: Vec::new(),
        })
        .collect();
    for (u, v, t) in &agg.edges {
        let i = times
            .iter()
            .position(|x| x == t)
            .ok_or(Error::UnlistedTime { time: *t })?;
        snapshots[i].edges.push((u.clone(), v.clone()));
    }
    validate(&RawTemporalGraph {
        nodes: agg.nodes.iter().map(|n| n.0.clone()).collect(),
        times,
        snapshots,
    })
}

/// Builds a colour-persistent graph from `(u, v, t)` edge events. Nodes are
/// the union of endpoints in first-appearance order; repeated events collapse.
pub fn from_events<S: AsRef<str>>(events: &[(S, S, i64)], default_colour: &str) -> Result<TemporalGraph> {
    if events.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    let mut nodes: Vec<String> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut by_time: BTreeMap<i64, BTreeSet<(usize, usize)>> = BTreeMap::new();
    for (u, v, t) in events {
        let (u, v) = (u.as_ref(), v.as_ref());
        if u == v {
            return Err(Error::SelfLoop {
                snapshot: 0,
                node: String::from(u),
            });
        }
        let ui = intern_node(&mut nodes, &mut index, u);
        let vi = intern_node(&mut nodes, &mut index, v);
        by_time.entry(*t).or_default().insert((ui.min(vi), ui.max(vi)));
    }
    let times: Vec<i64> = by_time.keys().copied().collect();
    let colours = times
        .iter()
        .map(|_| alloc::vec![String::from(default_colour); nodes.len()])
        .collect();
    let edges = by_time.into_values().map(|s| s.into_iter().collect()).collect();
    TemporalGraph::from_indexed(nodes, times, colours, edges)
}

fn intern_node(nodes: &mut Vec<String>, index: &mut BTreeMap<String, usize>, name: &str) -> usize {
    if let Some(&i) = index.get(name) {
        return i;
    }
    nodes.push(String::from(name));
    index.insert(String::from(name), nodes.len() - 1);
    nodes.len() - 1
}
