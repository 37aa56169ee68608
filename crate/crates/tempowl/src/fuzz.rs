// SPDX-License-Identifier: Apache-2.0

//! Parallel runner for the seeded property checks.

use std::num::NonZeroUsize;
use std::thread;

use serde::Serialize;

use tempowl_core::props::{Property, Violation};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "TEMPOWL_THREADS";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub property: &'static str,
    pub first_seed: u64,
    pub trials: u64,
    pub violations: usize,
    /// Smallest failing seed, which reruns the failure with `--seed S --trials 1`.
    pub minimal_seed: Option<u64>,
    pub detail: Option<String>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Machine parallelism, capped by `TEMPOWL_THREADS` when that is set and positive.
pub fn worker_count() -> usize {
    let available = thread::available_parallelism().map_or(1, NonZeroUsize::get);
    match std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
    {
        Some(cap) if cap > 0 => cap.min(available),
        _ => available,
    }
}

/// Checks seeds `first_seed .. first_seed + trials`. The result does not
/// depend on the number of workers.
pub fn run(property: Property, first_seed: u64, trials: u64, workers: usize) -> FuzzReport {
    let workers = workers.clamp(1, trials.max(1) as usize) as u64;
    let mut violations: Vec<Violation> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    (w..trials)
                        .step_by(workers as usize)
                        .filter_map(|k| property.check(first_seed.wrapping_add(k)).err())
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("fuzz worker panicked"))
            .collect()
    });
    violations.sort_by_key(|v| v.seed);
    FuzzReport {
        property: property.name(),
        first_seed,
        trials,
        violations: violations.len(),
        minimal_seed: violations.first().map(|v| v.seed),
        detail: violations.first().map(|v| v.detail.clone()),
    }
}
