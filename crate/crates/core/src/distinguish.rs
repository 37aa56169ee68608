// SPDX-License-Identifier: Apache-2.0

//! Which timestamped nodes can global and local MP-TGNNs tell apart?
//!
//! A pair is distinguishable by a model family exactly when relational
//! refinement separates the two nodes in the matching encoding. Nodes from
//! different graphs are compared inside the disjoint union of their encodings,
//! so colour ids are shared and no time alignment is needed.

use alloc::vec::Vec;
use core::fmt;

use crate::error::Result;
use crate::kgraph::{disjoint_union, k_glob, k_loc, kg_index, KnowledgeGraph};
use crate::rwl::{refine, Colouring};
use crate::tgraph::{TemporalGraph, TimestampedNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// Messages carry the neighbour's embedding at its own (past) time point.
    Global,
    /// Messages carry the neighbour's embedding at the current time point.
    Local,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Global, Mode::Local];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Global => "global",
            Mode::Local => "local",
        }
    }

    pub fn encode(self, tg: &TemporalGraph) -> KnowledgeGraph {
        match self {
            Mode::Global => k_glob(tg),
            Mode::Local => k_loc(tg),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub distinguishable: bool,
    pub first_layer: Option<usize>,
    pub mode: Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairClass {
    Both,
    GlobalOnly,
    LocalOnly,
    Neither,
}

impl PairClass {
    pub fn from_verdicts(global: &Verdict, local: &Verdict) -> Self {
        match (global.distinguishable, local.distinguishable) {
            (true, true) => PairClass::Both,
            (true, false) => PairClass::GlobalOnly,
            (false, true) => PairClass::LocalOnly,
            (false, false) => PairClass::Neither,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PairClass::Both => "both",
            PairClass::GlobalOnly => "global_only",
            PairClass::LocalOnly => "local_only",
            PairClass::Neither => "neither",
        }
    }
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One refinement run over the union of two graphs' encodings; answers any
/// number of cross-graph queries.
#[derive(Debug, Clone)]
pub struct JointRefinement<'a> {
    mode: Mode,
    first: &'a TemporalGraph,
    second: &'a TemporalGraph,
    offset: usize,
    colouring: Colouring,
}

impl<'a> JointRefinement<'a> {
    pub fn new(mode: Mode, first: &'a TemporalGraph, second: &'a TemporalGraph, max_layers: Option<usize>) -> Self {
        let (union, _) = disjoint_union(&mode.encode(first), &mode.encode(second));
        let offset = first.timestamped_count();
        let colouring = refine(&union, max_layers);
        Self {
            mode,
            first,
            second,
            offset,
            colouring,
        }
    }

    pub fn colouring(&self) -> &Colouring {
        &self.colouring
    }

    /// Union index of `(v, i)` in the first graph.
    pub fn first_index(&self, node: usize, time_index: usize) -> usize {
        kg_index(self.first, node, time_index)
    }

    /// Union index of `(v, i)` in the second graph.
    pub fn second_index(&self, node: usize, time_index: usize) -> usize {
        self.offset + kg_index(self.second, node, time_index)
    }

    pub fn verdict_indexed(&self, a: (usize, usize), b: (usize, usize)) -> Verdict {
        let first_layer = self
            .colouring
            .first_split(self.first_index(a.0, a.1), self.second_index(b.0, b.1));
        Verdict {
            distinguishable: first_layer.is_some(),
            first_layer,
            mode: self.mode,
        }
    }

    pub fn verdict(&self, a: &TimestampedNode, b: &TimestampedNode) -> Result<Verdict> {
        Ok(self.verdict_indexed(self.first.locate(a)?, self.second.locate(b)?))
    }
}

fn distinguishable(
    mode: Mode,
    tg1: &TemporalGraph,
    node1: &TimestampedNode,
    tg2: &TemporalGraph,
    node2: &TimestampedNode,
    max_layers: Option<usize>,
) -> Result<Verdict> {
    tg1.locate(node1)?;
    tg2.locate(node2)?;
    JointRefinement::new(mode, tg1, tg2, max_layers).verdict(node1, node2)
}

/// Can some global MP-TGNN (with at most `max_layers` layers, unbounded when
/// `None`) separate `node1` in `tg1` from `node2` in `tg2`?
pub fn distinguishable_global(
    tg1: &TemporalGraph,
    node1: &TimestampedNode,
    tg2: &TemporalGraph,
    node2: &TimestampedNode,
    max_layers: Option<usize>,
) -> Result<Verdict> {
    distinguishable(Mode::Global, tg1, node1, tg2, node2, max_layers)
}

/// Local counterpart of [`distinguishable_global`].
pub fn distinguishable_local(
    tg1: &TemporalGraph,
    node1: &TimestampedNode,
    tg2: &TemporalGraph,
    node2: &TimestampedNode,
    max_layers: Option<usize>,
) -> Result<Verdict> {
    distinguishable(Mode::Local, tg1, node1, tg2, node2, max_layers)
}

pub fn classify_pair(
    tg1: &TemporalGraph,
    node1: &TimestampedNode,
    tg2: &TemporalGraph,
    node2: &TimestampedNode,
) -> Result<PairClass> {
    let g = distinguishable_global(tg1, node1, tg2, node2, None)?;
    let l = distinguishable_local(tg1, node1, tg2, node2, None)?;
    Ok(PairClass::from_verdicts(&g, &l))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassCounts {
    pub both: usize,
    pub global_only: usize,
    pub local_only: usize,
    pub neither: usize,
}

impl ClassCounts {
    fn add(&mut self, c: PairClass) {
        match c {
            PairClass::Both => self.both += 1,
            PairClass::GlobalOnly => self.global_only += 1,
            PairClass::LocalOnly => self.local_only += 1,
            PairClass::Neither => self.neither += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.both + self.global_only + self.local_only + self.neither
    }
}

/// Classification of every (timestamped node of `tg1`, timestamped node of
/// `tg2`) pair, row-major in the node-major order of
/// [`TemporalGraph::timestamped_nodes`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMatrix {
    pub rows: Vec<TimestampedNode>,
    pub cols: Vec<TimestampedNode>,
    pub classes: Vec<PairClass>,
    pub global_first_layers: Vec<Option<usize>>,
    pub local_first_layers: Vec<Option<usize>>,
    pub counts: ClassCounts,
}

impl ClassMatrix {
    pub fn get(&self, row: usize, col: usize) -> PairClass {
        self.classes[row * self.cols.len() + col]
    }
}

/// Classifies all cross pairs from two refinement runs.
pub fn classify_all(tg1: &TemporalGraph, tg2: &TemporalGraph) -> ClassMatrix {
    let glob = JointRefinement::new(Mode::Global, tg1, tg2, None);
    let loc = JointRefinement::new(Mode::Local, tg1, tg2, None);
    let rows: Vec<TimestampedNode> = tg1.timestamped_nodes().collect();
    let cols: Vec<TimestampedNode> = tg2.timestamped_nodes().collect();
    let (n1, n2) = (tg1.len(), tg2.len());
    let mut classes = Vec::with_capacity(rows.len() * cols.len());
    let mut global_first_layers = Vec::with_capacity(classes.capacity());
    let mut local_first_layers = Vec::with_capacity(classes.capacity());
    let mut counts = ClassCounts::default();
    for r in 0..rows.len() {
        let a = (r / n1, r % n1);
        for c in 0..cols.len() {
            let b = (c / n2, c % n2);
            let g = glob.verdict_indexed(a, b);
            let l = loc.verdict_indexed(a, b);
            let class = PairClass::from_verdicts(&g, &l);
            counts.add(class);
            classes.push(class);
            global_first_layers.push(g.first_layer);
            local_first_layers.push(l.first_layer);
        }
    }
    ClassMatrix {
        rows,
        cols,
        classes,
        global_first_layers,
        local_first_layers,
        counts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{fixture, Fixture};

    fn single(name: &str) -> TemporalGraph {
        match fixture(name).unwrap() {
            Fixture::Single(g) => g,
            Fixture::Pair(..) => unreachable!(),
        }
    }

    fn pair(name: &str) -> (TemporalGraph, TemporalGraph) {
        match fixture(name).unwrap() {
            Fixture::Pair(a, b) => (a, b),
            Fixture::Single(_) => unreachable!(),
        }
    }

    #[test]
    fn fig2_vs_fig3_is_global_only() {
        let (tg, tg2) = (single("fig2"), single("fig3"));
        let b4 = TimestampedNode::new("b", 3);
        let g = distinguishable_global(&tg, &b4, &tg2, &b4, None).unwrap();
        assert_eq!(g.first_layer, Some(1));
        let l = distinguishable_local(&tg, &b4, &tg2, &b4, None).unwrap();
        assert!(!l.distinguishable);
        assert_eq!(classify_pair(&tg, &b4, &tg2, &b4).unwrap(), PairClass::GlobalOnly);
    }

    #[test]
    fn fig6_is_local_only() {
        let (tg, tg2) = pair("fig6_pair");
        let (a, a2) = (TimestampedNode::new("a", 1), TimestampedNode::new("a'", 1));
        let l = distinguishable_local(&tg, &a, &tg2, &a2, None).unwrap();
        assert_eq!(l.first_layer, Some(2));
        assert!(
            !distinguishable_global(&tg, &a, &tg2, &a2, None)
                .unwrap()
                .distinguishable
        );
        assert_eq!(classify_pair(&tg, &a, &tg2, &a2).unwrap(), PairClass::LocalOnly);
    }

    #[test]
    fn fig5_is_both() {
        let (tg, tg2) = pair("fig5_pair");
        let (a, a2) = (TimestampedNode::new("a", 1), TimestampedNode::new("a'", 1));
        assert_eq!(classify_pair(&tg, &a, &tg2, &a2).unwrap(), PairClass::Both);
    }

    #[test]
    fn node_against_itself() {
        let tg = single("fig2");
        for tn in tg.timestamped_nodes() {
            assert_eq!(classify_pair(&tg, &tn, &tg, &tn).unwrap(), PairClass::Neither);
        }
        let m = classify_all(&tg, &tg);
        for i in 0..m.rows.len() {
            assert_eq!(m.get(i, i), PairClass::Neither);
        }
    }

    #[test]
    fn unknown_node_is_an_error() {
        let tg = single("fig2");
        let bad = TimestampedNode::new("q", 0);
        let ok = TimestampedNode::new("a", 0);
        assert!(classify_pair(&tg, &bad, &tg, &ok).is_err());
        assert!(distinguishable_local(&tg, &ok, &tg, &TimestampedNode::new("a", 9), None).is_err());
    }

    #[test]
    fn matrix_matches_per_pair_calls() {
        let (tg, tg2) = pair("fig5_pair");
        let m = classify_all(&tg, &tg2);
        assert_eq!(m.counts.total(), 36);
        for (r, a) in m.rows.iter().enumerate() {
            for (c, b) in m.cols.iter().enumerate() {
                assert_eq!(m.get(r, c), classify_pair(&tg, a, &tg2, b).unwrap());
            }
        }
    }

    #[test]
    fn bounded_layers_hide_late_splits() {
        let (tg, tg2) = pair("fig6_pair");
        let (a, a2) = (TimestampedNode::new("a", 1), TimestampedNode::new("a'", 1));
        let l = distinguishable_local(&tg, &a, &tg2, &a2, Some(1)).unwrap();
        assert!(!l.distinguishable);
    }
}
