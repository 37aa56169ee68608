// SPDX-License-Identifier: Apache-2.0

//! Integer-exact forward pass of a message-passing temporal GNN.
//!
//! ```text
//! h_v^0(t) = x_v(t)
//! h_v^l(t) = COM^l( h_v^{l-1}(t), AGG^l({{ (m, g(t - t')) | (u, t') in N(v, t) }}) )
//! ```
//!
//! with `m = h_u^{l-1}(t')` in global mode and `m = h_u^{l-1}(t)` in local
//! mode, and `g` the identity on time differences. The simulator walks the
//! temporal neighbourhood of the snapshot graph directly; it never looks at a
//! knowledge-graph encoding, which is what makes it usable as a cross-check of
//! the refinement results.
//!
//! Variants:
//! * [`Variant::SumSign`]: `sign(W (h + sum alpha_{dt} m) - 1)`.
//! * [`Variant::ConcatSumRelu`]: `W2 [h || relu(W1 (sum (m || dt)))]`.
//! * [`Variant::HashInjective`]: `h` is an interned id of `(h, sorted multiset)`,
//!   i.e. an injective combine/aggregate.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::distinguish::Mode;
use crate::error::{Error, Result};
use crate::prng::{fnv1a, splitmix64, XorShift64Star};
use crate::rwl::Interner;
use crate::tgraph::{TemporalGraph, TimestampedNode};

pub type Scalar = i128;

/// Interned input of the injective variant: own embedding plus sorted messages.
type HashKey = (Vec<Scalar>, Vec<(Vec<Scalar>, i64)>);

/// Weight entries are drawn uniformly from `-WEIGHT_BOUND..=WEIGHT_BOUND`.
pub const WEIGHT_BOUND: i64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    SumSign,
    ConcatSumRelu,
    HashInjective,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::SumSign => "sum_sign",
            Variant::ConcatSumRelu => "concat_sum_relu",
            Variant::HashInjective => "hash_injective",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Scalar>,
}

impl Matrix {
    fn random(rows: usize, cols: usize, rng: &mut XorShift64Star) -> Self {
        let data = (0..rows * cols)
            .map(|_| Scalar::from(rng.range_i64(-WEIGHT_BOUND, WEIGHT_BOUND)))
            .collect();
        Self { rows, cols, data }
    }

    fn apply(&self, x: &[Scalar], layer: usize) -> Result<Vec<Scalar>> {
        if x.len() != self.cols {
            return Err(Error::ConfigMismatch(alloc::format!(
                "layer {layer}: matrix has {} columns, input has {} entries",
                self.cols,
                x.len()
            )));
        }
        let overflow = || Error::ArithmeticOverflow { layer };
        self.data
            .chunks(self.cols)
            .map(|row| {
                row.iter().zip(x).try_fold(0 as Scalar, |acc, (w, v)| {
                    w.checked_mul(*v).and_then(|p| acc.checked_add(p)).ok_or_else(overflow)
                })
            })
            .collect()
    }
}

/// Parameters of one layer (`1..=L`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayerWeights {
    /// `W` is `d x d`; `alpha_{dt}` is derived from `alpha_seed` and `dt`.
    SumSign {
        w: Matrix,
        alpha_seed: u64,
        bias: Scalar,
    },
    /// `W1` is `d x (d + 1)`, `W2` is `d x 2d`.
    ConcatSumRelu {
        w1: Matrix,
        w2: Matrix,
    },
    HashInjective,
}

impl LayerWeights {
    /// Coefficient `alpha_r` for time difference `dt`, uniform in the weight range.
    pub fn alpha(alpha_seed: u64, dt: i64) -> Scalar {
        let mut rng = XorShift64Star::new(alpha_seed ^ splitmix64(dt as u64));
        Scalar::from(rng.range_i64(-WEIGHT_BOUND, WEIGHT_BOUND))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelConfig {
    pub mode: Mode,
    pub variant: Variant,
    pub layers: usize,
    pub width: usize,
    pub seed: u64,
    pub weights: Vec<LayerWeights>,
}

impl ModelConfig {
    /// Samples all weights deterministically from `seed`.
    pub fn new(mode: Mode, variant: Variant, layers: usize, width: usize, seed: u64) -> Self {
        let mut rng = XorShift64Star::new(seed);
        let weights = (0..layers)
            .map(|_| match variant {
                Variant::SumSign => LayerWeights::SumSign {
                    w: Matrix::random(width, width, &mut rng),
                    alpha_seed: rng.next_u64(),
                    bias: 1,
                },
                Variant::ConcatSumRelu => LayerWeights::ConcatSumRelu {
                    w1: Matrix::random(width, width + 1, &mut rng),
                    w2: Matrix::random(width, 2 * width, &mut rng),
                },
                Variant::HashInjective => LayerWeights::HashInjective,
            })
            .collect();
        Self {
            mode,
            variant,
            layers,
            width,
            seed,
            weights,
        }
    }

    fn check(&self) -> Result<()> {
        if self.weights.len() != self.layers {
            return Err(Error::ConfigMismatch(alloc::format!(
                "{} layers configured but {} weight sets",
                self.layers,
                self.weights.len()
            )));
        }
        if self.variant != Variant::HashInjective && self.width == 0 {
            return Err(Error::ConfigMismatch(String::from("embedding width must be positive")));
        }
        let matches = self.weights.iter().all(|w| {
            matches!(
                (self.variant, w),
                (Variant::SumSign, LayerWeights::SumSign { .. })
                    | (Variant::ConcatSumRelu, LayerWeights::ConcatSumRelu { .. })
                    | (Variant::HashInjective, LayerWeights::HashInjective)
            )
        });
        if !matches {
            return Err(Error::ConfigMismatch(alloc::format!(
                "weights do not match variant {}",
                self.variant
            )));
        }
        Ok(())
    }
}

/// Input encoding `x_v(t)` of a colour token: `width` integers in the weight
/// range, a fixed function of the token (independent of the model seed).
pub fn encode_colour(token: &str, width: usize) -> Vec<Scalar> {
    let mut rng = XorShift64Star::new(fnv1a(token.as_bytes()));
    (0..width)
        .map(|_| Scalar::from(rng.range_i64(-WEIGHT_BOUND, WEIGHT_BOUND)))
        .collect()
}

/// `layers[l][v * n + i]` is `h_v^l(t_i)`; for the hash variant a one-element
/// vector holding the interned id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingState {
    times: usize,
    node_ids: Vec<String>,
    layers: Vec<Vec<Vec<Scalar>>>,
}

impl EmbeddingState {
    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn index_of(&self, tn: &TimestampedNode) -> Result<usize> {
        match self.node_ids.iter().position(|id| *id == tn.node) {
            Some(v) if tn.time_index < self.times => Ok(v * self.times + tn.time_index),
            _ => Err(Error::UnknownTimestampedNode {
                node: tn.node.clone(),
                time_index: tn.time_index,
            }),
        }
    }

    pub fn layer(&self, layer: usize) -> Result<&[Vec<Scalar>]> {
        self.layers
            .get(layer)
            .map(Vec::as_slice)
            .ok_or(Error::LayerNotComputed {
                layer,
                computed: self.layers.len(),
            })
    }

    pub fn embedding(&self, tn: &TimestampedNode, layer: usize) -> Result<&[Scalar]> {
        let i = self.index_of(tn)?;
        Ok(&self.layer(layer)?[i])
    }

    pub fn get(&self, layer: usize, index: usize) -> &[Scalar] {
        &self.layers[layer][index]
    }

    /// Iterates `(timestamped node, embedding)` at `layer`.
    pub fn iter_layer(&self, layer: usize) -> impl Iterator<Item = (TimestampedNode, &[Scalar])> + '_ {
        self.layers[layer].iter().enumerate().map(move |(k, h)| {
            (
                TimestampedNode::new(self.node_ids[k / self.times].clone(), k % self.times),
                h.as_slice(),
            )
        })
    }
}

/// Exact componentwise equality of two embeddings in one state.
pub fn embedding_equal(state: &EmbeddingState, a: &TimestampedNode, b: &TimestampedNode, layer: usize) -> Result<bool> {
    Ok(state.embedding(a, layer)? == state.embedding(b, layer)?)
}

/// Same as [`embedding_equal`] across two states computed with one config.
pub fn embeddings_equal(
    s1: &EmbeddingState,
    a: &TimestampedNode,
    s2: &EmbeddingState,
    b: &TimestampedNode,
    layer: usize,
) -> Result<bool> {
    Ok(s1.embedding(a, layer)? == s2.embedding(b, layer)?)
}

pub fn forward(tg: &TemporalGraph, cfg: &ModelConfig) -> Result<EmbeddingState> {
    let mut out = forward_joint(&[tg], cfg)?;
    Ok(out.pop().unwrap_or_else(|| unreachable!()))
}

/// Runs the model on several graphs. Hash-variant ids are interned in shared
/// tables, so they are comparable across the returned states; the arithmetic
/// variants are independent per graph anyway.
pub fn forward_joint(graphs: &[&TemporalGraph], cfg: &ModelConfig) -> Result<Vec<EmbeddingState>> {
    cfg.check()?;
    let nbhds: Vec<Vec<Vec<(usize, usize)>>> = graphs.iter().map(|tg| neighbourhoods(tg)).collect();

    let mut tokens: Interner<String> = Interner::default();
    let mut current: Vec<Vec<Vec<Scalar>>> = graphs
        .iter()
        .map(|tg| {
            let n = tg.len();
            (0..tg.timestamped_count())
                .map(|k| {
                    let colour = tg.snapshot(k % n).colour(k / n);
                    match cfg.variant {
                        Variant::HashInjective => alloc::vec![Scalar::from(tokens.intern_owned(String::from(colour)))],
                        _ => encode_colour(colour, cfg.width),
                    }
                })
                .collect()
        })
        .collect();
    let mut states: Vec<Vec<Vec<Vec<Scalar>>>> = current.iter().map(|l| alloc::vec![l.clone()]).collect();

    for (ell, weights) in cfg.weights.iter().enumerate() {
        let layer = ell + 1;
        let mut table: Interner<HashKey> = Interner::default();
        let mut next_all = Vec::with_capacity(graphs.len());
        for (g, tg) in graphs.iter().enumerate() {
            let n = tg.len();
            let prev = &current[g];
            let mut next = Vec::with_capacity(prev.len());
            for k in 0..prev.len() {
                let i = k % n;
                let t = tg.times()[i];
                let mut messages: Vec<(Vec<Scalar>, i64)> = nbhds[g][k]
                    .iter()
                    .map(|&(u, j)| {
                        let source = match cfg.mode {
                            Mode::Global => u * n + j,
                            Mode::Local => u * n + i,
                        };
                        (prev[source].clone(), t - tg.times()[j])
                    })
                    .collect();
                messages.sort();
                let h = match weights {
                    LayerWeights::SumSign { w, alpha_seed, bias } => {
                        sum_sign(&prev[k], &messages, w, *alpha_seed, *bias, layer)?
                    }
                    LayerWeights::ConcatSumRelu { w1, w2 } => concat_sum_relu(&prev[k], &messages, w1, w2, layer)?,
                    LayerWeights::HashInjective => {
                        alloc::vec![Scalar::from(table.intern_owned((prev[k].clone(), messages)))]
                    }
                };
                next.push(h);
            }
            next_all.push(next);
        }
        for (g, layer_out) in next_all.iter().enumerate() {
            states[g].push(layer_out.clone());
        }
        current = next_all;
    }

    Ok(graphs
        .iter()
        .zip(states)
        .map(|(tg, layers)| EmbeddingState {
            times: tg.len(),
            node_ids: tg.node_ids().to_vec(),
            layers,
        })
        .collect())
}

/// `N(v, t_i)` for every timestamped node, indexed `v * n + i`.
fn neighbourhoods(tg: &TemporalGraph) -> Vec<Vec<(usize, usize)>> {
    let n = tg.len();
    let adj = tg.adjacency();
    let mut out = Vec::with_capacity(tg.timestamped_count());
    for v in 0..tg.node_count() {
        let mut acc: Vec<(usize, usize)> = Vec::new();
        for (i, snapshot_adj) in adj.iter().enumerate().take(n) {
            acc.extend(snapshot_adj[v].iter().map(|&u| (u, i)));
            out.push(acc.clone());
        }
    }
    out
}

fn sign(x: Scalar) -> Scalar {
    x.signum()
}

fn sum_sign(
    own: &[Scalar],
    messages: &[(Vec<Scalar>, i64)],
    w: &Matrix,
    alpha_seed: u64,
    bias: Scalar,
    layer: usize,
) -> Result<Vec<Scalar>> {
    let overflow = || Error::ArithmeticOverflow { layer };
    let mut acc = own.to_vec();
    for (m, dt) in messages {
        let alpha = LayerWeights::alpha(alpha_seed, *dt);
        if m.len() != acc.len() {
            return Err(Error::ConfigMismatch(String::from(
                "message width differs from embedding width",
            )));
        }
        for (a, x) in acc.iter_mut().zip(m) {
            *a = alpha
                .checked_mul(*x)
                .and_then(|p| a.checked_add(p))
                .ok_or_else(overflow)?;
        }
    }
    w.apply(&acc, layer)?
        .into_iter()
        .map(|x| x.checked_sub(bias).map(sign).ok_or_else(overflow))
        .collect()
}

fn concat_sum_relu(
    own: &[Scalar],
    messages: &[(Vec<Scalar>, i64)],
    w1: &Matrix,
    w2: &Matrix,
    layer: usize,
) -> Result<Vec<Scalar>> {
    let overflow = || Error::ArithmeticOverflow { layer };
    let mut agg = alloc::vec![0 as Scalar; own.len() + 1];
    for (m, dt) in messages {
        if m.len() != own.len() {
            return Err(Error::ConfigMismatch(String::from(
                "message width differs from embedding width",
            )));
        }
        for (a, x) in agg.iter_mut().zip(m.iter().chain(core::iter::once(&Scalar::from(*dt)))) {
            *a = a.checked_add(*x).ok_or_else(overflow)?;
        }
    }
    let hidden: Vec<Scalar> = w1.apply(&agg, layer)?.into_iter().map(|x| x.max(0)).collect();
    let mut joined = own.to_vec();
    joined.extend(hidden);
    w2.apply(&joined, layer)
}
