// SPDX-License-Identifier: Apache-2.0

//! Relational 1-WL colour refinement.
//!
//! Layer `l` colour of `v` is an interned id of
//! `(colour_{l-1}(v), sorted multiset of (colour_{l-1}(u), r) over edges (r, u, v))`.
//! Interning (rather than hashing) keeps the update injective. Ids are dense per
//! layer and assigned in first-encounter order while sweeping nodes by
//! position, so equal partitions always yield identical id vectors and a run is
//! bit-for-bit reproducible.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kgraph::{KnowledgeGraph, Relation};

pub type ColourId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colouring {
    layers: Vec<Vec<ColourId>>,
    class_counts: Vec<usize>,
    stable_at: Option<usize>,
}

impl Colouring {
    /// Number of layers actually stored (layer 0 included).
    pub fn computed_layers(&self) -> usize {
        self.layers.len()
    }

    /// Smallest `l` whose partition equals the partition at `l + 1`, if reached.
    pub fn stable_at(&self) -> Option<usize> {
        self.stable_at
    }

    pub fn node_count(&self) -> usize {
        self.layers.first().map_or(0, Vec::len)
    }

    /// Colour ids at `layer`; layers past stabilisation resolve to the stable one.
    pub fn layer(&self, layer: usize) -> Result<&[ColourId]> {
        if let Some(l) = self.layers.get(layer) {
            return Ok(l);
        }
        match self.stable_at {
            Some(s) => Ok(&self.layers[s]),
            None => Err(Error::LayerNotComputed {
                layer,
                computed: self.layers.len(),
            }),
        }
    }

    pub fn colours_at(&self, layer: usize, node: usize) -> Result<ColourId> {
        self.layer(layer).map(|l| l[node])
    }

    pub fn class_count(&self, layer: usize) -> Result<usize> {
        self.layer(layer)?;
        Ok(self.class_counts[layer.min(self.class_counts.len() - 1)])
    }

    /// Colour classes at `layer`, each sorted, ordered by smallest member.
    pub fn partition_at(&self, layer: usize) -> Result<Vec<Vec<usize>>> {
        let ids = self.layer(layer)?;
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (node, &c) in ids.iter().enumerate() {
            let c = c as usize;
            // First-encounter numbering: a new id is always the next class.
            if c == classes.len() {
                classes.push(Vec::new());
            }
            classes[c].push(node);
        }
        Ok(classes)
    }

    /// Least layer at which `a` and `b` receive different colours, searching
    /// through stabilisation (or the last computed layer).
    pub fn first_split(&self, a: usize, b: usize) -> Option<usize> {
        self.layers.iter().position(|l| l[a] != l[b])
    }
}

/// Refines `kg` until the partition stops changing or `max_layers` iterations
/// have run. `None` means `|nodes|`, enough to always reach stabilisation.
pub fn refine(kg: &KnowledgeGraph, max_layers: Option<usize>) -> Colouring {
    let mut initial = Interner::default();
    let layer0 = kg.colours().iter().map(|c| initial.intern(c.as_str())).collect();
    let incoming: Vec<(Relation, usize)> = kg.edges().iter().map(|e| (e.relation, e.source)).collect();
    refine_indexed(layer0, kg.in_offsets(), &incoming, max_layers)
}

/// Refinement over an already-compiled graph: `incoming[offsets[v]..offsets[v+1]]`
/// are the `(relation, source)` pairs of edges into `v`.
pub(crate) fn refine_indexed(
    layer0: Vec<ColourId>,
    offsets: &[usize],
    incoming: &[(Relation, usize)],
    max_layers: Option<usize>,
) -> Colouring {
    let n = layer0.len();
    let max_layers = max_layers.unwrap_or(n);
    let mut class_counts = alloc::vec![count_classes(&layer0)];
    let mut layers = alloc::vec![layer0];
    let mut stable_at = if n == 0 { Some(0) } else { None };

    let mut signature: Vec<(ColourId, Relation)> = Vec::new();
    let mut ell = 0;
    while stable_at.is_none() && ell < max_layers {
        let prev = &layers[ell];
        let mut table: Interner<(ColourId, Vec<(ColourId, Relation)>)> = Interner::default();
        let mut next = Vec::with_capacity(n);
        for v in 0..n {
            signature.clear();
            signature.extend(incoming[offsets[v]..offsets[v + 1]].iter().map(|&(r, u)| (prev[u], r)));
            signature.sort_unstable();
            next.push(table.intern_owned((prev[v], signature.clone())));
        }
        let classes = table.len();
        ell += 1;
        if classes == class_counts[ell - 1] {
            stable_at = Some(ell - 1);
        } else {
            layers.push(next);
            class_counts.push(classes);
        }
    }

    Colouring {
        layers,
        class_counts,
        stable_at,
    }
}

fn count_classes(ids: &[ColourId]) -> usize {
    ids.iter().max().map_or(0, |&m| m as usize + 1)
}

/// Insert-or-get table handing out dense ids in first-encounter order.
#[derive(Debug)]
pub(crate) struct Interner<K> {
    ids: BTreeMap<K, ColourId>,
}

impl<K> Default for Interner<K> {
    fn default() -> Self {
        Self { ids: BTreeMap::new() }
    }
}

impl<K: Ord> Interner<K> {
    pub(crate) fn intern_owned(&mut self, key: K) -> ColourId {
        let next = self.ids.len() as ColourId;
        *self.ids.entry(key).or_insert(next)
    }

    pub(crate) fn len(&self) -> usize {
        self.ids.len()
    }
}

impl<'a> Interner<&'a str> {
    fn intern(&mut self, key: &'a str) -> ColourId {
        self.intern_owned(key)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kgraph::{k_glob, KgEdge};
    use crate::tgraph::TimestampedNode;
    use alloc::string::String;
    use alloc::vec;

    fn kg(colours: &[&str], edges: &[(i64, usize, usize)]) -> KnowledgeGraph {
        KnowledgeGraph::new(
            (0..colours.len()).map(|i| TimestampedNode::new("n", i)).collect(),
            colours.iter().map(|c| String::from(*c)).collect(),
            edges
                .iter()
                .map(|&(relation, source, target)| KgEdge {
                    relation,
                    source,
                    target,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn edgeless_uniform_is_stable_at_zero() {
        let c = refine(&kg(&["g", "g", "g"], &[]), None);
        assert_eq!(c.stable_at(), Some(0));
        assert_eq!(c.partition_at(0).unwrap(), vec![vec![0, 1, 2]]);
        assert_eq!(c.partition_at(5).unwrap(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn path_splits_ends_from_middle() {
        // 0 -> 1 -> 2, all same colour: in-degree separates 0 at layer 1,
        // then 1 and 2 differ by their source's colour at layer 2.
        let c = refine(&kg(&["g", "g", "g"], &[(0, 0, 1), (0, 1, 2)]), None);
        assert_eq!(c.partition_at(1).unwrap(), vec![vec![0], vec![1, 2]]);
        assert_eq!(c.partition_at(2).unwrap(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(c.stable_at(), Some(2));
        assert_eq!(c.first_split(1, 2), Some(2));
    }

    #[test]
    fn relation_labels_matter() {
        let c = refine(&kg(&["g", "g", "g", "g"], &[(0, 0, 1), (1, 2, 3)]), None);
        assert_ne!(c.colours_at(1, 1).unwrap(), c.colours_at(1, 3).unwrap());
    }

    #[test]
    fn bounded_run_reports_missing_layers() {
        let graph = kg(&["g", "g", "g"], &[(0, 0, 1), (0, 1, 2)]);
        let c = refine(&graph, Some(1));
        assert_eq!(c.stable_at(), None);
        assert!(c.colours_at(1, 0).is_ok());
        assert!(matches!(
            c.colours_at(2, 0),
            Err(Error::LayerNotComputed { layer: 2, .. })
        ));
    }

    #[test]
    fn layer_zero_follows_initial_colours() {
        let tg = match crate::gen::fixture("fig2").unwrap() {
            crate::gen::Fixture::Single(g) => g,
            _ => unreachable!(),
        };
        let kg = k_glob(&tg);
        let c = refine(&kg, None);
        let classes = c.partition_at(0).unwrap();
        assert_eq!(classes.len(), 3);
        for class in classes {
            let colour = kg.colour(class[0]);
            assert!(class.iter().all(|&v| kg.colour(v) == colour));
        }
    }

    #[test]
    fn empty_and_singleton() {
        let c = refine(&KnowledgeGraph::empty(), None);
        assert_eq!(c.stable_at(), Some(0));
        let c = refine(&kg(&["x"], &[]), None);
        assert_eq!(c.partition_at(0).unwrap(), vec![vec![0]]);
        assert_eq!(c.stable_at(), Some(0));
    }
}
