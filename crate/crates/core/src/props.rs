// SPDX-License-Identifier: Apache-2.0

//! Seeded single-trial property checks.
//!
//! Every check is a pure function of its seed, so a failing trial is
//! reproduced exactly by rerunning that seed. Runners (the fuzz command, the
//! acceptance suite) only loop over seeds and collect [`Violation`]s.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::distinguish::{classify_all, JointRefinement, Mode, PairClass};
use crate::error::Error;
use crate::gen::{fixture, permuted_copy, random_tg, Fixture, RandomSpec};
use crate::iso::{pointwise_iso, verify};
use crate::prng::{splitmix64, XorShift64Star};
use crate::rwl::{refine, Colouring};
use crate::tgnn::{forward_joint, ModelConfig, Variant};
use crate::tgraph::{TemporalGraph, TimestampedNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    Theorem5,
    Theorem6,
    Theorem7,
    Theorem8,
    Theorem9,
    Lemma1,
    Soundness,
    Completeness,
    Stabilisation,
}

impl Property {
    pub const ALL: [Property; 9] = [
        Property::Theorem5,
        Property::Theorem6,
        Property::Theorem7,
        Property::Theorem8,
        Property::Theorem9,
        Property::Lemma1,
        Property::Soundness,
        Property::Completeness,
        Property::Stabilisation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Theorem5 => "theorem5",
            Property::Theorem6 => "theorem6",
            Property::Theorem7 => "theorem7",
            Property::Theorem8 => "theorem8",
            Property::Theorem9 => "theorem9",
            Property::Lemma1 => "lemma1",
            Property::Soundness => "soundness",
            Property::Completeness => "completeness",
            Property::Stabilisation => "stabilisation",
        }
    }

    /// Runs one trial.
    pub fn check(self, seed: u64) -> Result<(), Violation> {
        let outcome = match self {
            Property::Theorem5 => theorem5(seed),
            Property::Theorem6 => theorem6(seed),
            Property::Theorem7 => theorem7(seed),
            Property::Theorem8 => theorem8(seed),
            Property::Theorem9 => theorem9(seed),
            Property::Lemma1 => lemma1(seed),
            Property::Soundness => soundness(seed),
            Property::Completeness => completeness(seed),
            Property::Stabilisation => stabilisation(seed),
        };
        outcome.map_err(|detail| Violation {
            property: self,
            seed,
            detail,
        })
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown property {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub property: Property,
    pub seed: u64,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at seed {}: {}", self.property, self.seed, self.detail)
    }
}

type Check = Result<(), String>;

fn fail<E: fmt::Display>(e: E) -> String {
    format!("{e}")
}

/// Random shape used by the fuzzed properties: up to 8 nodes, up to 5 snapshots.
pub fn trial_spec(seed: u64, colour_persistent: bool, uniform_grid: bool) -> RandomSpec {
    let mut rng = XorShift64Star::new(splitmix64(seed));
    RandomSpec {
        seed: rng.next_u64(),
        nodes: rng.range_i64(1, 8) as usize,
        snapshots: rng.range_i64(1, 5) as usize,
        edge_prob: 0.1 + 0.5 * rng.unit_f64(),
        palette: rng.range_i64(1, 3) as usize,
        colour_persistent,
        uniform_grid,
    }
}

fn sub_seed(seed: u64, k: u64) -> u64 {
    splitmix64(seed ^ splitmix64(k))
}

fn pair_fixture(name: &str) -> Result<(TemporalGraph, TemporalGraph), String> {
    match fixture(name).map_err(fail)? {
        Fixture::Pair(a, b) => Ok((a, b)),
        Fixture::Single(_) => Err(format!("{name} is not a pair")),
    }
}

fn single_fixture(name: &str) -> Result<TemporalGraph, String> {
    Ok(fixture(name).map_err(fail)?.first().clone())
}

/// A random graph on the given time points, used as an extra disconnected
/// component that must not change any verdict inside a fixture.
fn padding(seed: u64, times: &[i64]) -> Result<TemporalGraph, String> {
    let mut spec = trial_spec(seed, false, true);
    spec.snapshots = times.len();
    spec.nodes = spec.nodes.min(4);
    let tg = random_tg(&spec).map_err(fail)?;
    let shifted = tg.shifted(times[0] - 1);
    if shifted.times() == times {
        Ok(shifted)
    } else {
        Err(String::from("padding times do not line up"))
    }
}

fn expect_class(
    tg1: &TemporalGraph,
    a: &TimestampedNode,
    tg2: &TemporalGraph,
    b: &TimestampedNode,
    class: PairClass,
    global_first: Option<usize>,
    local_first: Option<usize>,
) -> Check {
    let g = JointRefinement::new(Mode::Global, tg1, tg2, None)
        .verdict(a, b)
        .map_err(fail)?;
    let l = JointRefinement::new(Mode::Local, tg1, tg2, None)
        .verdict(a, b)
        .map_err(fail)?;
    let got = PairClass::from_verdicts(&g, &l);
    if got != class || g.first_layer != global_first || l.first_layer != local_first {
        return Err(format!(
            "{a} vs {b}: expected {class} (global {global_first:?}, local {local_first:?}), \
             got {got} (global {:?}, local {:?})",
            g.first_layer, l.first_layer
        ));
    }
    Ok(())
}

/// Pointwise isomorphic, yet separated by both model families at layer 1.
fn theorem5(seed: u64) -> Check {
    let (tg, tg2) = pair_fixture("fig5_pair")?;
    let pad = padding(seed, tg.times())?;
    let (tg, tg2) = (
        tg.disjoint_union(&pad).map_err(fail)?,
        tg2.disjoint_union(&pad).map_err(fail)?,
    );
    let witness = pointwise_iso(&tg, &tg2)
        .map_err(fail)?
        .ok_or("no pointwise isomorphism")?;
    if !verify(&tg, &tg2, &witness) {
        return Err(String::from("pointwise witness failed verification"));
    }
    let (a, a2) = (TimestampedNode::new("a", 1), TimestampedNode::new("a'", 1));
    expect_class(&tg, &a, &tg2, &a2, PairClass::Both, Some(1), Some(1))
}

/// Timewise isomorphic graphs: corresponding nodes are never separated, by
/// refinement or by any sampled model.
fn theorem6(seed: u64) -> Check {
    let spec = trial_spec(seed, false, seed.is_multiple_of(2));
    let tg = random_tg(&spec).map_err(fail)?;
    let mut rng = XorShift64Star::new(sub_seed(seed, 1));
    let (mut copy, perm) = permuted_copy(&tg, rng.next_u64());
    if rng.bernoulli(0.5) {
        copy = copy.shifted(rng.range_i64(-20, 20));
    }
    let n = tg.len();
    let matrix = classify_all(&tg, &copy);
    for (v, &pv) in perm.iter().enumerate() {
        for i in 0..n {
            let class = matrix.get(v * n + i, pv * n + i);
            if class != PairClass::Neither {
                return Err(format!("({v},{i}) vs its image classified {class}"));
            }
        }
    }
    for k in 0..5 {
        let model_seed = rng.next_u64();
        let mode = Mode::ALL[k % 2];
        let variant = [Variant::SumSign, Variant::ConcatSumRelu][(k / 2) % 2];
        let cfg = ModelConfig::new(mode, variant, 3, 4, model_seed);
        let states = forward_joint(&[&tg, &copy], &cfg).map_err(fail)?;
        for ell in 0..=cfg.layers {
            for (v, &pv) in perm.iter().enumerate() {
                for i in 0..n {
                    if states[0].get(ell, v * n + i) != states[1].get(ell, pv * n + i) {
                        return Err(format!(
                            "{mode} {variant} model seed {model_seed}: ({v},{i}) differs from its image at layer {ell}"
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Global-only separation on the non-persistent fixture.
fn theorem7(seed: u64) -> Check {
    let (tg, tg2) = (single_fixture("fig2")?, single_fixture("fig3")?);
    let pad = padding(seed, tg.times())?;
    let (tg, tg2) = (
        tg.disjoint_union(&pad).map_err(fail)?,
        tg2.disjoint_union(&pad).map_err(fail)?,
    );
    let b = TimestampedNode::new("b", 3);
    expect_class(&tg, &b, &tg2, &b, PairClass::GlobalOnly, Some(1), None)
}

/// Local-only separation, two layers deep.
fn theorem8(seed: u64) -> Check {
    let (tg, tg2) = pair_fixture("fig6_pair")?;
    let pad = padding(seed, tg.times())?;
    let (tg, tg2) = (
        tg.disjoint_union(&pad).map_err(fail)?,
        tg2.disjoint_union(&pad).map_err(fail)?,
    );
    let (a, a2) = (TimestampedNode::new("a", 1), TimestampedNode::new("a'", 1));
    expect_class(&tg, &a, &tg2, &a2, PairClass::LocalOnly, None, Some(2))
}

/// On colour-persistent graphs local refinement separates everything global
/// refinement does, no later.
fn theorem9(seed: u64) -> Check {
    let tg1 = random_tg(&trial_spec(seed, true, seed.is_multiple_of(3))).map_err(fail)?;
    let tg2 = random_tg(&trial_spec(sub_seed(seed, 2), true, seed.is_multiple_of(3))).map_err(fail)?;
    let matrix = classify_all(&tg1, &tg2);
    for (k, class) in matrix.classes.iter().enumerate() {
        let (g, l) = (matrix.global_first_layers[k], matrix.local_first_layers[k]);
        let ok = match (g, l) {
            (Some(g), Some(l)) => l <= g,
            (Some(_), None) => false,
            _ => true,
        };
        if !ok || *class == PairClass::GlobalOnly {
            let (r, c) = (&matrix.rows[k / matrix.cols.len()], &matrix.cols[k % matrix.cols.len()]);
            return Err(format!("{r} vs {c}: {class}, global layer {g:?}, local layer {l:?}"));
        }
    }
    Ok(())
}

/// Within one local encoding on a uniform grid, a separation persists when
/// both time indices move forward together.
fn lemma1(seed: u64) -> Check {
    let tg = random_tg(&trial_spec(seed, true, true)).map_err(fail)?;
    let colouring = refine(&Mode::Local.encode(&tg), None);
    let n = tg.len();
    let nodes = tg.node_count();
    let last = colouring.computed_layers();
    for ell in 0..last {
        let c = colouring.layer(ell).map_err(fail)?;
        for v in 0..nodes {
            for u in 0..nodes {
                for i in 0..n {
                    for j in 0..n {
                        if c[v * n + i] == c[u * n + j] {
                            continue;
                        }
                        for k in 1..n - i.max(j) {
                            if c[v * n + i + k] == c[u * n + j + k] {
                                return Err(format!(
                                    "layer {ell}: ({v},{i})/({u},{j}) differ but shift by {k} agrees"
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Equal refinement colours force equal embeddings for every sampled model.
fn soundness(seed: u64) -> Check {
    let colour_persistent = seed % 2 == 1;
    let tg1 = random_tg(&trial_spec(seed, colour_persistent, seed % 4 < 2)).map_err(fail)?;
    let tg2 = random_tg(&trial_spec(sub_seed(seed, 3), colour_persistent, seed % 4 < 2)).map_err(fail)?;
    let mut rng = XorShift64Star::new(sub_seed(seed, 4));
    for mode in Mode::ALL {
        let joint = JointRefinement::new(mode, &tg1, &tg2, None);
        for k in 0..10 {
            let variant = [Variant::SumSign, Variant::ConcatSumRelu][k % 2];
            let cfg = ModelConfig::new(mode, variant, 4, 3, rng.next_u64());
            let states = forward_joint(&[&tg1, &tg2], &cfg).map_err(fail)?;
            for ell in 0..=cfg.layers {
                let colours = joint.colouring().layer(ell).map_err(fail)?;
                let (n1, n2) = (tg1.len(), tg2.len());
                let mut keyed: Vec<(u32, &[i128], usize)> = Vec::new();
                for x in 0..tg1.timestamped_count() {
                    keyed.push((colours[joint.first_index(x / n1, x % n1)], states[0].get(ell, x), 0));
                }
                for y in 0..tg2.timestamped_count() {
                    keyed.push((colours[joint.second_index(y / n2, y % n2)], states[1].get(ell, y), 1));
                }
                keyed.sort_by_key(|e| e.0);
                for w in keyed.windows(2) {
                    if w[0].0 == w[1].0 && w[0].1 != w[1].1 {
                        return Err(format!(
                            "{mode} {variant} model seed {}: equal colours, unequal embeddings at layer {ell}",
                            cfg.seed
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Renumbers ids by first occurrence so two labelings of one partition compare equal.
pub fn canonical_labels<T: Ord + Clone>(labels: &[T]) -> Vec<usize> {
    let mut seen: alloc::collections::BTreeMap<T, usize> = alloc::collections::BTreeMap::new();
    labels
        .iter()
        .map(|l| {
            let next = seen.len();
            *seen.entry(l.clone()).or_insert(next)
        })
        .collect()
}

/// Injective simulator classes coincide with refinement classes at every layer.
pub fn completeness_on(tg: &TemporalGraph) -> Check {
    for mode in Mode::ALL {
        let colouring: Colouring = refine(&mode.encode(tg), None);
        let layers = colouring.stable_at().unwrap_or(colouring.computed_layers()) + 1;
        let cfg = ModelConfig::new(mode, Variant::HashInjective, layers, 0, 0);
        let states = forward_joint(&[tg], &cfg).map_err(fail)?;
        for ell in 0..=layers {
            let sim = canonical_labels(states[0].layer(ell).map_err(fail)?);
            let rwl = canonical_labels(colouring.layer(ell).map_err(fail)?);
            if sim != rwl {
                return Err(format!("{mode}: partitions differ at layer {ell}"));
            }
        }
    }
    Ok(())
}

fn completeness(seed: u64) -> Check {
    completeness_on(&random_tg(&trial_spec(seed, seed.is_multiple_of(2), !seed.is_multiple_of(3))).map_err(fail)?)
}

/// Refinement stops within `|V|` layers and never merges classes.
pub fn stabilisation_on(colouring: &Colouring) -> Check {
    let nodes = colouring.node_count();
    match colouring.stable_at() {
        Some(s) if s <= nodes => {}
        other => return Err(format!("stable_at {other:?} with {nodes} nodes")),
    }
    for ell in 1..colouring.computed_layers() {
        let (prev, cur) = (
            colouring.layer(ell - 1).map_err(fail)?,
            colouring.layer(ell).map_err(fail)?,
        );
        // Refinement: each current class maps into a single previous class.
        let mut parent: alloc::collections::BTreeMap<u32, u32> = alloc::collections::BTreeMap::new();
        for (p, c) in prev.iter().zip(cur) {
            if *parent.entry(*c).or_insert(*p) != *p {
                return Err(format!("layer {ell} merges classes of layer {}", ell - 1));
            }
        }
    }
    Ok(())
}

fn stabilisation(seed: u64) -> Check {
    let tg = random_tg(&trial_spec(seed, false, seed.is_multiple_of(2))).map_err(fail)?;
    for mode in Mode::ALL {
        stabilisation_on(&refine(&mode.encode(&tg), None)).map_err(|e| format!("{mode}: {e}"))?;
    }
    Ok(())
}
