// SPDX-License-Identifier: Apache-2.0

//! Named fixture graphs and seeded random temporal graphs.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::prng::XorShift64Star;
use crate::tgraph::TemporalGraph;

pub const FIXTURE_NAMES: [&str; 4] = ["fig2", "fig3", "fig5_pair", "fig6_pair"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fixture {
    Single(TemporalGraph),
    Pair(TemporalGraph, TemporalGraph),
}

impl Fixture {
    /// The first graph, or the only one.
    pub fn first(&self) -> &TemporalGraph {
        match self {
            Fixture::Single(g) | Fixture::Pair(g, _) => g,
        }
    }

    pub fn second(&self) -> Option<&TemporalGraph> {
        match self {
            Fixture::Single(_) => None,
            Fixture::Pair(_, g) => Some(g),
        }
    }
}

pub fn fixture(name: &str) -> Result<Fixture> {
    match name {
        "fig2" => Ok(Fixture::Single(fig2()?)),
        "fig3" => Ok(Fixture::Single(fig3()?)),
        "fig5_pair" => Ok(Fixture::Pair(
            green(&["a", "b", "c"], &[&[(0, 1)], &[]])?,
            green(&["a'", "b'", "c'"], &[&[(1, 2)], &[]])?,
        )),
        "fig6_pair" => Ok(Fixture::Pair(
            green(&["a", "b", "c"], &[&[(0, 1)], &[(1, 2)]])?,
            green(&["a'", "b'", "c'"], &[&[(0, 1)], &[]])?,
        )),
        other => Err(Error::UnknownFixture(String::from(other))),
    }
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| String::from(*s)).collect()
}

const FIG_EDGES: [&[(usize, usize)]; 4] = [&[], &[(0, 1)], &[(1, 2)], &[(0, 2), (1, 2)]];

fn fig2() -> Result<TemporalGraph> {
    let colours = [
        ["blue", "green", "red"],
        ["green", "green", "red"],
        ["green", "green", "green"],
        ["blue", "green", "green"],
    ];
    TemporalGraph::from_indexed(
        strings(&["a", "b", "c"]),
        alloc::vec![1, 2, 3, 4],
        colours.iter().map(|c| strings(c)).collect(),
        FIG_EDGES.iter().map(|e| e.to_vec()).collect(),
    )
}

fn fig3() -> Result<TemporalGraph> {
    TemporalGraph::from_indexed(
        strings(&["a", "b", "c"]),
        alloc::vec![1, 2, 3, 4],
        alloc::vec![strings(&["blue", "green", "green"]); 4],
        FIG_EDGES.iter().map(|e| e.to_vec()).collect(),
    )
}

fn green(names: &[&str], edges: &[&[(usize, usize)]]) -> Result<TemporalGraph> {
    TemporalGraph::from_indexed(
        strings(names),
        (1..=edges.len() as i64).collect(),
        alloc::vec![alloc::vec![String::from("green"); names.len()]; edges.len()],
        edges.iter().map(|e| e.to_vec()).collect(),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomSpec {
    pub seed: u64,
    pub nodes: usize,
    pub snapshots: usize,
    pub edge_prob: f64,
    /// Number of distinct colour tokens `c0, c1, ...`.
    pub palette: usize,
    pub colour_persistent: bool,
    /// Times `1..=n` when set, otherwise a random start with gaps in `1..=5`.
    pub uniform_grid: bool,
}

impl Default for RandomSpec {
    fn default() -> Self {
        Self {
            seed: 0,
            nodes: 5,
            snapshots: 3,
            edge_prob: 0.3,
            palette: 2,
            colour_persistent: false,
            uniform_grid: true,
        }
    }
}

/// Erdős–Rényi snapshots with random colours. Deterministic in `spec.seed`.
pub fn random_tg(spec: &RandomSpec) -> Result<TemporalGraph> {
    if spec.nodes == 0 || spec.snapshots == 0 || spec.palette == 0 {
        return Err(Error::InvalidParameter(format!(
            "nodes, snapshots and palette must be positive (got {}, {}, {})",
            spec.nodes, spec.snapshots, spec.palette
        )));
    }
    if !(0.0..=1.0).contains(&spec.edge_prob) {
        return Err(Error::InvalidParameter(format!(
            "edge_prob {} outside [0, 1]",
            spec.edge_prob
        )));
    }
    let mut rng = XorShift64Star::new(spec.seed);
    let palette = spec.palette as u64;
    let draw_colours = |rng: &mut XorShift64Star| -> Vec<String> {
        (0..spec.nodes).map(|_| format!("c{}", rng.below(palette))).collect()
    };

    let times: Vec<i64> = if spec.uniform_grid {
        (1..=spec.snapshots as i64).collect()
    } else {
        let mut t = rng.range_i64(0, 10);
        (0..spec.snapshots)
            .map(|_| {
                t += rng.range_i64(1, 5);
                t
            })
            .collect()
    };

    let persistent = draw_colours(&mut rng);
    let mut colours = Vec::with_capacity(spec.snapshots);
    let mut edges = Vec::with_capacity(spec.snapshots);
    for i in 0..spec.snapshots {
        colours.push(if spec.colour_persistent || i == 0 {
            persistent.clone()
        } else {
            draw_colours(&mut rng)
        });
        let mut e = Vec::new();
        for u in 0..spec.nodes {
            for v in u + 1..spec.nodes {
                if rng.bernoulli(spec.edge_prob) {
                    e.push((u, v));
                }
            }
        }
        edges.push(e);
    }
    let names = (0..spec.nodes).map(|v| format!("n{v}")).collect();
    TemporalGraph::from_indexed(names, times, colours, edges)
}

/// Moves node `v` to position `perm[v]` in every snapshot, keeping the node-id
/// list. The result is timewise isomorphic to `tg` via `node_ids[v] -> node_ids[perm[v]]`.
pub fn permuted_copy(tg: &TemporalGraph, seed: u64) -> (TemporalGraph, Vec<usize>) {
    let mut perm: Vec<usize> = (0..tg.node_count()).collect();
    XorShift64Star::new(seed).shuffle(&mut perm);
    (apply_permutation(tg, &perm), perm)
}

/// Relabels by an explicit permutation (see [`permuted_copy`]).
pub fn apply_permutation(tg: &TemporalGraph, perm: &[usize]) -> TemporalGraph {
    let n = tg.node_count();
    assert_eq!(perm.len(), n, "permutation length must equal node count");
    let colours = tg
        .snapshots()
        .iter()
        .map(|s| {
            let mut c = alloc::vec![String::new(); n];
            for (v, &p) in perm.iter().enumerate() {
                c[p] = String::from(s.colour(v));
            }
            c
        })
        .collect();
    let edges = tg
        .snapshots()
        .iter()
        .map(|s| s.edges().iter().map(|&(u, v)| (perm[u], perm[v])).collect())
        .collect();
    TemporalGraph::from_indexed(tg.node_ids().to_vec(), tg.times().to_vec(), colours, edges)
        .unwrap_or_else(|e| unreachable!("permutation of a valid graph is valid: {e}"))
}
