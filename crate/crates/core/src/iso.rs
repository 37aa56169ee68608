// SPDX-License-Identifier: Apache-2.0

//! Exact pointwise and timewise isomorphism of temporal graphs.
//!
//! Pointwise: identical time points and an isomorphism `f_i` per snapshot.
//! Timewise: equal number of snapshots, equal consecutive gaps and one
//! bijection `f` that is an isomorphism of every snapshot simultaneously.
//!
//! Search is backtracking over candidate images restricted to matching colour
//! refinement classes. Every witness the search returns is re-checked by
//! [`verify`], which works directly from the definitions on node ids and shares
//! no code with the search.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rwl::{refine_indexed, ColourId, Interner};
use crate::tgraph::TemporalGraph;

pub const DEFAULT_NODE_LIMIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IsoKind {
    Pointwise,
    Timewise,
}

impl IsoKind {
    pub fn name(self) -> &'static str {
        match self {
            IsoKind::Pointwise => "pointwise",
            IsoKind::Timewise => "timewise",
        }
    }
}

/// Node maps of an isomorphism: one per snapshot (pointwise) or a single one
/// shared by all snapshots (timewise).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    pub kind: IsoKind,
    pub maps: Vec<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IsoOptions {
    pub node_limit: usize,
}

impl Default for IsoOptions {
    fn default() -> Self {
        Self {
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

pub fn pointwise_iso(tg1: &TemporalGraph, tg2: &TemporalGraph) -> Result<Option<IsoWitness>> {
    pointwise_iso_with(tg1, tg2, IsoOptions::default())
}

pub fn timewise_iso(tg1: &TemporalGraph, tg2: &TemporalGraph) -> Result<Option<IsoWitness>> {
    timewise_iso_with(tg1, tg2, IsoOptions::default())
}

fn check_limit(tg1: &TemporalGraph, tg2: &TemporalGraph, opts: IsoOptions) -> Result<()> {
    let nodes = tg1.node_count().max(tg2.node_count());
    if nodes > opts.node_limit {
        return Err(Error::SizeLimitExceeded {
            nodes,
            limit: opts.node_limit,
        });
    }
    Ok(())
}

pub fn pointwise_iso_with(tg1: &TemporalGraph, tg2: &TemporalGraph, opts: IsoOptions) -> Result<Option<IsoWitness>> {
    check_limit(tg1, tg2, opts)?;
    if tg1.times() != tg2.times() || tg1.node_count() != tg2.node_count() {
        return Ok(None);
    }
    let mut maps = Vec::with_capacity(tg1.len());
    for i in 0..tg1.len() {
        let a = LayeredGraph::from_snapshots(tg1, &[i]);
        let b = LayeredGraph::from_snapshots(tg2, &[i]);
        match find_isomorphism(&a, &b) {
            Some(f) => maps.push(named_map(tg1, tg2, &f)),
            None => return Ok(None),
        }
    }
    Ok(Some(IsoWitness {
        kind: IsoKind::Pointwise,
        maps,
    }))
}

pub fn timewise_iso_with(tg1: &TemporalGraph, tg2: &TemporalGraph, opts: IsoOptions) -> Result<Option<IsoWitness>> {
    check_limit(tg1, tg2, opts)?;
    if !same_gaps(tg1, tg2) || tg1.node_count() != tg2.node_count() {
        return Ok(None);
    }
    let all: Vec<usize> = (0..tg1.len()).collect();
    let a = LayeredGraph::from_snapshots(tg1, &all);
    let b = LayeredGraph::from_snapshots(tg2, &all);
    Ok(find_isomorphism(&a, &b).map(|f| IsoWitness {
        kind: IsoKind::Timewise,
        maps: alloc::vec![named_map(tg1, tg2, &f)],
    }))
}

fn same_gaps(tg1: &TemporalGraph, tg2: &TemporalGraph) -> bool {
    tg1.len() == tg2.len()
        && tg1
            .times()
            .windows(2)
            .zip(tg2.times().windows(2))
            .all(|(a, b)| a[1] - a[0] == b[1] - b[0])
}

fn named_map(tg1: &TemporalGraph, tg2: &TemporalGraph, f: &[usize]) -> BTreeMap<String, String> {
    f.iter()
        .enumerate()
        .map(|(v, &w)| (tg1.node_ids()[v].clone(), tg2.node_ids()[w].clone()))
        .collect()
}

/// Independent check of a witness against the definitions.
pub fn verify(tg1: &TemporalGraph, tg2: &TemporalGraph, witness: &IsoWitness) -> bool {
    match witness.kind {
        IsoKind::Pointwise => {
            tg1.times() == tg2.times()
                && witness.maps.len() == tg1.len()
                && witness
                    .maps
                    .iter()
                    .enumerate()
                    .all(|(i, f)| snapshot_isomorphism(tg1, tg2, i, f))
        }
        IsoKind::Timewise => {
            same_gaps(tg1, tg2)
                && witness.maps.len() == 1
                && (0..tg1.len()).all(|i| snapshot_isomorphism(tg1, tg2, i, &witness.maps[0]))
        }
    }
}

fn snapshot_isomorphism(tg1: &TemporalGraph, tg2: &TemporalGraph, i: usize, f: &BTreeMap<String, String>) -> bool {
    // Bijection between the node sets.
    let domain: BTreeSet<&String> = f.keys().collect();
    let image: BTreeSet<&String> = f.values().collect();
    let nodes1: BTreeSet<&String> = tg1.node_ids().iter().collect();
    let nodes2: BTreeSet<&String> = tg2.node_ids().iter().collect();
    if domain != nodes1 || image != nodes2 || image.len() != f.len() {
        return false;
    }
    let raw1 = tg1.to_raw();
    let raw2 = tg2.to_raw();
    let (s1, s2) = (&raw1.snapshots[i], &raw2.snapshots[i]);
    // Colours preserved.
    if f.iter().any(|(v, w)| s1.colours.get(v) != s2.colours.get(w)) {
        return false;
    }
    // Edges mapped onto edges; equal counts plus injectivity gives "iff".
    let norm = |a: &String, b: &String| {
        if a <= b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        }
    };
    let edges2: BTreeSet<(String, String)> = s2.edges.iter().map(|(a, b)| norm(a, b)).collect();
    s1.edges.len() == s2.edges.len() && s1.edges.iter().all(|(a, b)| edges2.contains(&norm(&f[a], &f[b])))
}

/// Simple undirected graph whose node colours are tuples over the selected
/// snapshots and whose edges carry the set of snapshots they appear in.
struct LayeredGraph {
    colour_keys: Vec<Vec<String>>,
    /// `adj[u][v]`: sorted snapshot positions (within the selection) of edge {u, v}.
    adj: Vec<Vec<Vec<u32>>>,
}

impl LayeredGraph {
    fn from_snapshots(tg: &TemporalGraph, snapshots: &[usize]) -> Self {
        let n = tg.node_count();
        let colour_keys = (0..n)
            .map(|v| {
                snapshots
                    .iter()
                    .map(|&i| String::from(tg.snapshot(i).colour(v)))
                    .collect()
            })
            .collect();
        let mut adj = alloc::vec![alloc::vec![Vec::new(); n]; n];
        for (k, &i) in snapshots.iter().enumerate() {
            for &(u, v) in tg.snapshot(i).edges() {
                adj[u][v].push(k as u32);
                adj[v][u].push(k as u32);
            }
        }
        Self { colour_keys, adj }
    }

    fn len(&self) -> usize {
        self.colour_keys.len()
    }
}

/// Stable refinement colours of both graphs, computed on their disjoint union
/// so the ids are comparable.
fn joint_classes(a: &LayeredGraph, b: &LayeredGraph) -> Vec<ColourId> {
    let mut interner: Interner<&Vec<String>> = Interner::default();
    let layer0: Vec<ColourId> = a
        .colour_keys
        .iter()
        .chain(&b.colour_keys)
        .map(|k| interner.intern_owned(k))
        .collect();
    let offset = a.len();
    let mut offsets = alloc::vec![0usize];
    let mut incoming = Vec::new();
    for (shift, g) in [(0, a), (offset, b)] {
        for v in 0..g.len() {
            for u in 0..g.len() {
                for &k in &g.adj[u][v] {
                    incoming.push((i64::from(k), u + shift));
                }
            }
            offsets.push(incoming.len());
        }
    }
    let colouring = refine_indexed(layer0, &offsets, &incoming, None);
    let last = colouring.computed_layers() - 1;
    colouring.layer(last).map(<[ColourId]>::to_vec).unwrap_or_default()
}

fn find_isomorphism(a: &LayeredGraph, b: &LayeredGraph) -> Option<Vec<usize>> {
    let n = a.len();
    if n != b.len() {
        return None;
    }
    let classes = joint_classes(a, b);
    let (ca, cb) = classes.split_at(n);
    let candidates: Vec<Vec<usize>> = ca.iter().map(|&c| (0..n).filter(|&w| cb[w] == c).collect()).collect();
    // Class histograms must agree, otherwise no bijection respects them.
    let hist = |c: &[ColourId]| {
        let mut m: BTreeMap<ColourId, usize> = BTreeMap::new();
        for &x in c {
            *m.entry(x).or_default() += 1;
        }
        m
    };
    if hist(ca) != hist(cb) {
        return None;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (candidates[v].len(), v));

    let mut search = Search {
        a,
        b,
        order: &order,
        candidates: &candidates,
        map: alloc::vec![usize::MAX; n],
        used: alloc::vec![false; n],
    };
    if search.extend(0) {
        Some(search.map)
    } else {
        None
    }
}

struct Search<'a> {
    a: &'a LayeredGraph,
    b: &'a LayeredGraph,
    order: &'a [usize],
    candidates: &'a [Vec<usize>],
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        for &w in &self.candidates[v] {
            if self.used[w] || !self.consistent(depth, v, w) {
                continue;
            }
            self.map[v] = w;
            self.used[w] = true;
            if self.extend(depth + 1) {
                return true;
            }
            self.used[w] = false;
            self.map[v] = usize::MAX;
        }
        false
    }

    fn consistent(&self, depth: usize, v: usize, w: usize) -> bool {
        self.order[..depth].iter().all(|&x| {
            let y = self.map[x];
            self.a.adj[v][x] == self.b.adj[w][y]
        })
    }
}
