// SPDX-License-Identifier: Apache-2.0

//! File formats, the parallel fuzz runner and the `tempowl` command line,
//! on top of the `no_std` analysis core in `tempowl_core`.

pub mod cli;
pub mod fuzz;
pub mod io;

pub use tempowl_core as core;
