// SPDX-License-Identifier: Apache-2.0

//! Test-only helpers: a naive refinement oracle and random knowledge graphs.

#![allow(dead_code)]

use std::collections::BTreeMap;

use tempowl_core::kgraph::KgEdge;
use tempowl_core::prng::XorShift64Star;
use tempowl_core::{KnowledgeGraph, TimestampedNode};

/// Partition as a "class representative" vector: `rep[v]` is the smallest node
/// equivalent to `v`.
pub type Reps = Vec<usize>;

/// Fixpoint refinement by direct pairwise comparison. Two nodes stay together
/// iff they were together and, for every previous class and relation, they
/// have the same number of incoming edges from that class with that relation.
/// No hashing or interning is involved. Returns the partition of every layer
/// up to and including the first repeated one.
pub fn naive_partitions(kg: &KnowledgeGraph) -> Vec<Reps> {
    let n = kg.node_count();
    let mut reps: Reps = (0..n)
        .map(|v| (0..=v).find(|&u| kg.colour(u) == kg.colour(v)).unwrap())
        .collect();
    let mut out = vec![reps.clone()];
    loop {
        let profile = |v: usize, reps: &Reps| -> BTreeMap<(usize, i64), usize> {
            let mut m = BTreeMap::new();
            for e in kg.incoming(v) {
                *m.entry((reps[e.source], e.relation)).or_insert(0) += 1;
            }
            m
        };
        let next: Reps = (0..n)
            .map(|v| {
                (0..=v)
                    .find(|&u| reps[u] == reps[v] && profile(u, &reps) == profile(v, &reps))
                    .unwrap()
            })
            .collect();
        let same = next == reps;
        reps = next;
        if same {
            return out;
        }
        out.push(reps.clone());
    }
}

/// Converts a list of classes into the representative form.
pub fn reps_from_classes(classes: &[Vec<usize>], n: usize) -> Reps {
    let mut reps = vec![usize::MAX; n];
    for class in classes {
        let min = *class.iter().min().unwrap();
        for &v in class {
            reps[v] = min;
        }
    }
    reps
}

/// Random knowledge graph with `nodes` nodes, relations in `0..relations`
/// and colours from a palette of `palette`.
pub fn random_kg(seed: u64, nodes: usize, relations: i64, palette: u64, density: f64) -> KnowledgeGraph {
    let mut rng = XorShift64Star::new(seed);
    let colours = (0..nodes).map(|_| format!("k{}", rng.below(palette))).collect();
    let mut edges = Vec::new();
    for source in 0..nodes {
        for target in 0..nodes {
            for relation in 0..relations {
                if rng.bernoulli(density) {
                    edges.push(KgEdge {
                        relation,
                        source,
                        target,
                    });
                }
            }
        }
    }
    let names = (0..nodes).map(|v| TimestampedNode::new(format!("x{v}"), 0)).collect();
    KnowledgeGraph::new(names, colours, edges).unwrap()
}
