// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite: prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::thread;
use std::time::{Duration, Instant};

use tempowl_core::distinguish::{classify_pair, distinguishable_global, distinguishable_local};
use tempowl_core::gen::{fixture, random_tg, Fixture};
use tempowl_core::iso::{pointwise_iso, verify};
use tempowl_core::kgraph::{k_glob, k_loc};
use tempowl_core::props::{completeness_on, stabilisation_on, trial_spec, Property, Violation};
use tempowl_core::rwl::refine;
use tempowl_core::{KnowledgeGraph, PairClass, TemporalGraph, TimestampedNode};

use common::{naive_partitions, random_kg, reps_from_classes};

type Outcome = Result<String, String>;

fn pair(name: &str) -> (TemporalGraph, TemporalGraph) {
    match fixture(name).unwrap() {
        Fixture::Pair(a, b) => (a, b),
        Fixture::Single(_) => unreachable!(),
    }
}

fn single(name: &str) -> TemporalGraph {
    fixture(name).unwrap().first().clone()
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn workers() -> usize {
    thread::available_parallelism().map_or(4, |n| n.get()).min(16)
}

/// Runs `check` on every seed in `0..trials` across worker threads and
/// returns the violation with the smallest seed, if any.
fn run_trials(property: Property, trials: u64) -> Outcome {
    let k = workers() as u64;
    let mut violations: Vec<Violation> = thread::scope(|s| {
        let handles: Vec<_> = (0..k)
            .map(|w| {
                s.spawn(move || {
                    (w..trials)
                        .step_by(k as usize)
                        .filter_map(|seed| property.check(seed).err())
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    });
    violations.sort_by_key(|v| v.seed);
    match violations.first() {
        None => Ok(format!("{trials} trials, 0 violations")),
        Some(v) => Err(format!("{} violations; first: {v}", violations.len())),
    }
}

fn criterion1() -> Outcome {
    let (tg, tg2) = (single("fig2"), single("fig3"));
    let b = TimestampedNode::new("b", 3);
    let g = distinguishable_global(&tg, &b, &tg2, &b, None).map_err(|e| e.to_string())?;
    let l = distinguishable_local(&tg, &b, &tg2, &b, None).map_err(|e| e.to_string())?;
    let class = classify_pair(&tg, &b, &tg2, &b).map_err(|e| e.to_string())?;
    ensure(class == PairClass::GlobalOnly, || format!("class {class}"))?;
    ensure(g.first_layer == Some(1), || {
        format!("global first layer {:?}", g.first_layer)
    })?;
    ensure(!l.distinguishable, || format!("local separates at {:?}", l.first_layer))?;
    Ok(String::from("global_only, global first layer 1"))
}

fn criterion2() -> Outcome {
    let (tg, tg2) = pair("fig6_pair");
    let (a, a2) = (TimestampedNode::new("a", 1), TimestampedNode::new("a'", 1));
    let g = distinguishable_global(&tg, &a, &tg2, &a2, None).map_err(|e| e.to_string())?;
    let l = distinguishable_local(&tg, &a, &tg2, &a2, None).map_err(|e| e.to_string())?;
    let class = classify_pair(&tg, &a, &tg2, &a2).map_err(|e| e.to_string())?;
    ensure(class == PairClass::LocalOnly, || format!("class {class}"))?;
    ensure(l.first_layer == Some(2), || {
        format!("local first layer {:?}", l.first_layer)
    })?;
    ensure(!g.distinguishable, || {
        format!("global separates at {:?}", g.first_layer)
    })?;
    Ok(String::from("local_only, local first layer 2"))
}

fn criterion3() -> Outcome {
    let (tg, tg2) = pair("fig5_pair");
    let w = pointwise_iso(&tg, &tg2)
        .map_err(|e| e.to_string())?
        .ok_or("not pointwise isomorphic")?;
    ensure(verify(&tg, &tg2, &w), || String::from("witness fails verification"))?;
    let f1: Vec<(&str, &str)> = w.maps[0].iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    ensure(f1 == [("a", "b'"), ("b", "c'"), ("c", "a'")], || {
        format!("f_1 = {f1:?}")
    })?;
    let (a, a2) = (TimestampedNode::new("a", 1), TimestampedNode::new("a'", 1));
    let g = distinguishable_global(&tg, &a, &tg2, &a2, None).map_err(|e| e.to_string())?;
    let l = distinguishable_local(&tg, &a, &tg2, &a2, None).map_err(|e| e.to_string())?;
    let class = PairClass::from_verdicts(&g, &l);
    ensure(class == PairClass::Both, || format!("class {class}"))?;
    ensure(g.first_layer == Some(1) && l.first_layer == Some(1), || {
        format!("first layers {:?}/{:?}", g.first_layer, l.first_layer)
    })?;
    Ok(String::from(
        "pointwise witness f_1 = {a->b', b->c', c->a'}, both at layer 1",
    ))
}

fn criterion8() -> Outcome {
    for name in ["fig2", "fig3", "fig5_pair", "fig6_pair"] {
        let f = fixture(name).unwrap();
        completeness_on(f.first()).map_err(|e| format!("{name}: {e}"))?;
        if let Some(g) = f.second() {
            completeness_on(g).map_err(|e| format!("{name}: {e}"))?;
        }
    }
    run_trials(Property::Completeness, 200).map(|s| format!("4 fixtures + {s}"))
}

fn oracle_check(kg: &KnowledgeGraph) -> Result<(), String> {
    let engine = refine(kg, None);
    let oracle = naive_partitions(kg);
    let layers = oracle.len().max(engine.computed_layers());
    for ell in 0..=layers {
        let got = reps_from_classes(&engine.partition_at(ell).map_err(|e| e.to_string())?, kg.node_count());
        ensure(got == oracle[ell.min(oracle.len() - 1)], || {
            format!("layer {ell} differs")
        })?;
    }
    Ok(())
}

fn criterion9() -> Outcome {
    let mut checked = 0usize;
    for seed in 0..300u64 {
        // Encodings of small temporal graphs...
        let mut spec = trial_spec(seed, seed.is_multiple_of(2), seed.is_multiple_of(3));
        spec.nodes = spec.nodes.min(4);
        spec.snapshots = spec.snapshots.min(12 / spec.nodes).max(1);
        let tg = random_tg(&spec).map_err(|e| e.to_string())?;
        for kg in [k_glob(&tg), k_loc(&tg)] {
            if kg.node_count() <= 12 {
                oracle_check(&kg).map_err(|e| format!("seed {seed}: {e}"))?;
                checked += 1;
            }
        }
        // ...and arbitrary multi-relational graphs.
        let nodes = 1 + (seed % 12) as usize;
        let kg = random_kg(seed, nodes, 1 + (seed % 3) as i64, 1 + seed % 3, 0.12);
        oracle_check(&kg).map_err(|e| format!("seed {seed} (random KG): {e}"))?;
        checked += 1;
    }
    Ok(format!("{checked} knowledge graphs match the oracle"))
}

fn criterion10() -> Outcome {
    let mut count = 0usize;
    for seed in 0..300u64 {
        let tg =
            random_tg(&trial_spec(seed, seed.is_multiple_of(2), seed.is_multiple_of(3))).map_err(|e| e.to_string())?;
        for kg in [
            k_glob(&tg),
            k_loc(&tg),
            random_kg(seed, 1 + (seed % 12) as usize, 2, 2, 0.15),
        ] {
            stabilisation_on(&refine(&kg, None)).map_err(|e| format!("seed {seed}: {e}"))?;
            count += 1;
        }
    }
    run_trials(Property::Stabilisation, 500).map(|s| format!("{count} graphs + {s}"))
}

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            title: "fig2/fig3 (b,t4) is global_only",
            limit: Duration::from_secs(1),
            run: criterion1,
        },
        Criterion {
            id: 2,
            title: "fig6 (a,t2)/(a',t2) is local_only",
            limit: Duration::from_secs(1),
            run: criterion2,
        },
        Criterion {
            id: 3,
            title: "fig5 pointwise isomorphic yet both",
            limit: Duration::from_secs(1),
            run: criterion3,
        },
        Criterion {
            id: 4,
            title: "timewise isomorphic pairs are never separated",
            limit: Duration::from_secs(120),
            run: || run_trials(Property::Theorem6, 1000),
        },
        Criterion {
            id: 5,
            title: "colour-persistent: local subsumes global",
            limit: Duration::from_secs(120),
            run: || run_trials(Property::Theorem9, 1000),
        },
        Criterion {
            id: 6,
            title: "local separations survive index shifts",
            limit: Duration::from_secs(60),
            run: || run_trials(Property::Lemma1, 500),
        },
        Criterion {
            id: 7,
            title: "equal colours imply equal embeddings",
            limit: Duration::from_secs(180),
            run: || run_trials(Property::Soundness, 500),
        },
        Criterion {
            id: 8,
            title: "injective simulator matches refinement",
            limit: Duration::from_secs(60),
            run: criterion8,
        },
        Criterion {
            id: 9,
            title: "engine matches naive oracle",
            limit: Duration::from_secs(60),
            run: criterion9,
        },
        Criterion {
            id: 10,
            title: "stabilisation bound and monotone refinement",
            limit: Duration::from_secs(60),
            run: criterion10,
        },
    ];

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > c.limit => Err(format!("{msg}, but took {elapsed:.2?} (limit {:?})", c.limit)),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS [{elapsed:>9.2?}] {}: {msg}", c.id, c.title),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL [{elapsed:>9.2?}] {}: {msg}", c.id, c.title);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
