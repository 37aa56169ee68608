// SPDX-License-Identifier: Apache-2.0

mod common;

use proptest::prelude::*;
use std::collections::BTreeSet;

use tempowl_core::distinguish::{classify_all, JointRefinement};
use tempowl_core::gen::{permuted_copy, random_tg, RandomSpec};
use tempowl_core::iso::{pointwise_iso, timewise_iso, verify};
use tempowl_core::kgraph::{k_glob, k_loc, kg_index, temporal_neighbourhood, KgEdge};
use tempowl_core::prng::XorShift64Star;
use tempowl_core::props::stabilisation_on;
use tempowl_core::rwl::refine;
use tempowl_core::tgnn::{forward, ModelConfig, Variant};
use tempowl_core::tgraph::{from_aggregated, from_events, is_colour_persistent, to_aggregated, validate};
use tempowl_core::{KnowledgeGraph, Mode, TemporalGraph, TimestampedNode};

use common::{naive_partitions, random_kg, reps_from_classes};

fn spec_strategy(colour_persistent: bool) -> impl Strategy<Value = RandomSpec> {
    (
        any::<u64>(),
        1usize..=7,
        1usize..=5,
        0.0f64..=0.7,
        1usize..=3,
        any::<bool>(),
    )
        .prop_map(
            move |(seed, nodes, snapshots, edge_prob, palette, uniform_grid)| RandomSpec {
                seed,
                nodes,
                snapshots,
                edge_prob,
                palette,
                colour_persistent,
                uniform_grid,
            },
        )
}

fn tg_strategy() -> impl Strategy<Value = TemporalGraph> {
    any::<bool>()
        .prop_flat_map(spec_strategy)
        .prop_map(|spec| random_tg(&spec).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generator_output_validates(tg in tg_strategy()) {
        prop_assert_eq!(validate(&tg.to_raw()).unwrap(), tg);
    }

    #[test]
    fn aggregated_round_trip(spec in spec_strategy(true)) {
        let tg = random_tg(&spec).unwrap();
        let agg = to_aggregated(&tg).unwrap();
        let back = from_aggregated(&agg, Some(tg.times())).unwrap();
        prop_assert_eq!(&back, &tg);
        if !agg.edges.is_empty() {
            let inferred = from_aggregated(&agg, None).unwrap();
            prop_assert_eq!(to_aggregated(&inferred).unwrap(), agg);
        }
    }

    #[test]
    fn events_recount(seed in any::<u64>(), count in 1usize..200) {
        let mut rng = XorShift64Star::new(seed);
        let mut events = Vec::new();
        while events.len() < count {
            let (u, v) = (rng.below(12), rng.below(12));
            if u != v {
                events.push((format!("v{u}"), format!("v{v}"), rng.range_i64(0, 30)));
            }
        }
        let tg = from_events(&events, "grey").unwrap();
        prop_assert!(is_colour_persistent(&tg));
        let nodes: BTreeSet<&str> = events.iter().flat_map(|(u, v, _)| [u.as_str(), v.as_str()]).collect();
        let steps: BTreeSet<i64> = events.iter().map(|e| e.2).collect();
        let edges: BTreeSet<(i64, &str, &str)> = events
            .iter()
            .map(|(u, v, t)| if u < v { (*t, u.as_str(), v.as_str()) } else { (*t, v.as_str(), u.as_str()) })
            .collect();
        prop_assert_eq!(tg.node_count(), nodes.len());
        prop_assert_eq!(tg.len(), steps.len());
        prop_assert_eq!(tg.edge_count(), edges.len());
    }

    #[test]
    fn encodings_agree_with_temporal_neighbourhood(tg in tg_strategy()) {
        let (glob, loc) = (k_glob(&tg), k_loc(&tg));
        prop_assert_eq!(glob.edges().len(), loc.edges().len());
        let times = tg.times();
        for tn in tg.timestamped_nodes() {
            let (v, i) = tg.locate(&tn).unwrap();
            let target = kg_index(&tg, v, i);
            let nbhd = temporal_neighbourhood(&tg, &tn).unwrap();
            let expect_glob: BTreeSet<KgEdge> = nbhd
                .iter()
                .map(|&(u, j)| KgEdge { relation: times[i] - times[j], source: kg_index(&tg, u, j), target })
                .collect();
            let got_glob: BTreeSet<KgEdge> = glob.incoming(target).iter().copied().collect();
            prop_assert_eq!(got_glob, expect_glob);
            let expect_loc: BTreeSet<KgEdge> = nbhd
                .iter()
                .map(|&(u, j)| KgEdge { relation: times[i] - times[j], source: kg_index(&tg, u, i), target })
                .collect();
            let got_loc: BTreeSet<KgEdge> = loc.incoming(target).iter().copied().collect();
            prop_assert_eq!(got_loc, expect_loc);
        }
        for kg in [&glob, &loc] {
            for e in kg.edges() {
                if kg.nodes()[e.source].time_index == kg.nodes()[e.target].time_index {
                    prop_assert!(kg.has_edge(e.relation, e.target, e.source));
                }
            }
        }
    }

    #[test]
    fn refinement_matches_naive_oracle(seed in any::<u64>(), nodes in 1usize..=12, rels in 1i64..=3, palette in 1u64..=3) {
        let kg = random_kg(seed, nodes, rels, palette, 0.15);
        check_against_oracle(&kg)?;
    }

    #[test]
    fn refinement_is_monotone_and_bounded(tg in tg_strategy()) {
        for mode in Mode::ALL {
            let c = refine(&mode.encode(&tg), None);
            prop_assert!(stabilisation_on(&c).is_ok());
        }
    }

    #[test]
    fn refinement_is_permutation_invariant(seed in any::<u64>(), nodes in 1usize..=12) {
        let kg = random_kg(seed, nodes, 2, 2, 0.2);
        let mut perm: Vec<usize> = (0..nodes).collect();
        XorShift64Star::new(seed ^ 0xABCD).shuffle(&mut perm);
        let mut colours = vec![String::new(); nodes];
        for v in 0..nodes {
            colours[perm[v]] = kg.colour(v).to_string();
        }
        let edges = kg
            .edges()
            .iter()
            .map(|e| KgEdge { relation: e.relation, source: perm[e.source], target: perm[e.target] })
            .collect();
        let permuted = KnowledgeGraph::new(kg.nodes().to_vec(), colours, edges).unwrap();
        let (a, b) = (refine(&kg, None), refine(&permuted, None));
        prop_assert_eq!(a.stable_at(), b.stable_at());
        for ell in 0..a.computed_layers() {
            for x in 0..nodes {
                for y in 0..nodes {
                    let same_a = a.colours_at(ell, x).unwrap() == a.colours_at(ell, y).unwrap();
                    let same_b = b.colours_at(ell, perm[x]).unwrap() == b.colours_at(ell, perm[y]).unwrap();
                    prop_assert_eq!(same_a, same_b);
                }
            }
        }
    }

    #[test]
    fn verdicts_are_symmetric(a in tg_strategy(), b in tg_strategy()) {
        for mode in Mode::ALL {
            let ab = JointRefinement::new(mode, &a, &b, None);
            let ba = JointRefinement::new(mode, &b, &a, None);
            for x in a.timestamped_nodes() {
                for y in b.timestamped_nodes() {
                    prop_assert_eq!(ab.verdict(&x, &y).unwrap(), ba.verdict(&y, &x).unwrap());
                }
            }
        }
    }

    #[test]
    fn timewise_implies_pointwise_and_neither(tg in tg_strategy(), seed in any::<u64>()) {
        let (copy, _) = permuted_copy(&tg, seed);
        let w = timewise_iso(&tg, &copy).unwrap();
        prop_assert!(w.is_some());
        let w = w.unwrap();
        prop_assert!(verify(&tg, &copy, &w));
        prop_assert!(pointwise_iso(&tg, &copy).unwrap().is_some());
        let matrix = classify_all(&tg, &copy);
        let f = &w.maps[0];
        for (r, row) in matrix.rows.iter().enumerate() {
            let image = TimestampedNode::new(f[&row.node].clone(), row.time_index);
            let c = matrix.cols.iter().position(|c| *c == image).unwrap();
            prop_assert_eq!(matrix.get(r, c), tempowl_core::PairClass::Neither);
        }
    }

    #[test]
    fn simulator_is_deterministic(tg in tg_strategy(), seed in any::<u64>()) {
        for variant in [Variant::SumSign, Variant::ConcatSumRelu, Variant::HashInjective] {
            let cfg = ModelConfig::new(Mode::Local, variant, 3, 3, seed);
            prop_assert_eq!(forward(&tg, &cfg).unwrap(), forward(&tg, &cfg).unwrap());
        }
    }
}

fn check_against_oracle(kg: &KnowledgeGraph) -> Result<(), TestCaseError> {
    let engine = refine(kg, None);
    let oracle = naive_partitions(kg);
    let layers = oracle.len().max(engine.computed_layers());
    for ell in 0..=layers {
        let expected = &oracle[ell.min(oracle.len() - 1)];
        let got = reps_from_classes(&engine.partition_at(ell).unwrap(), kg.node_count());
        prop_assert_eq!(&got, expected, "layer {}", ell);
    }
    prop_assert_eq!(engine.stable_at(), Some(oracle.len() - 1));
    Ok(())
}
