// SPDX-License-Identifier: Apache-2.0

//! Expressiveness analysis for message-passing temporal graph neural networks.
//!
//! A [`TemporalGraph`] is compiled into one of two knowledge graphs
//! ([`kgraph::k_glob`] for global message passing, [`kgraph::k_loc`] for local
//! message passing). Relational colour refinement ([`rwl::refine`]) over those
//! knowledge graphs decides which timestamped nodes a model family can tell
//! apart. [`distinguish`] wraps this into pairwise verdicts and a four-way
//! classification, [`iso`] provides exact pointwise/timewise isomorphism
//! checks, and [`tgnn`] is an integer-exact forward simulator that serves as an
//! independent cross-check of the refinement results.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the fuzz runner
//! and the command-line interface live in the companion `tempowl` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod distinguish;
mod error;
pub mod gen;
pub mod iso;
pub mod kgraph;
pub mod prng;
pub mod props;
pub mod rwl;
pub mod tgnn;
pub mod tgraph;

pub use distinguish::{Mode, PairClass, Verdict};
pub use error::{Error, Result};
pub use kgraph::KnowledgeGraph;
pub use rwl::Colouring;
pub use tgraph::{Snapshot, TemporalGraph, TimestampedNode};
