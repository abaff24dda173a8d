//! Seeded disorder ensembles.
//!
//! Realization `r` draws its schedule from `derive_seed(base_seed, r)`, so
//! realizations can run in any order on any number of workers. Results land
//! in one slot per realization and are reduced sequentially in index order,
//! which keeps the output bit-identical for every worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};

/// Environment variable consulted for the worker count when no flag is given.
pub const WORKERS_ENV: &str = "QWALK_WORKERS";

/// Desk-scale default ensemble size.
pub const DEFAULT_REALIZATIONS: usize = 100;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub realizations: usize,
    pub base_seed: u64,
}

impl EnsembleSpec {
    pub fn new(realizations: usize, base_seed: u64) -> Result<Self> {
        if realizations == 0 {
            return Err(WalkError::invalid("realizations", "need at least one realization"));
        }
        Ok(EnsembleSpec { realizations, base_seed })
    }

    pub fn seed_for(&self, index: usize) -> u64 {
        derive_seed(self.base_seed, index)
    }
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output for counter `index + 1` of the stream starting at `base`.
///
/// The finalizer is a bijection and the counters differ for distinct
/// indices, so derived seeds never collide within one base seed.
pub fn derive_seed(base: u64, index: usize) -> u64 {
    let mut z = base.wrapping_add(GOLDEN_GAMMA.wrapping_mul(index as u64 + 1));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Flag value if given, else `QWALK_WORKERS`, else the machine's parallelism.
pub fn resolve_workers(flag: Option<usize>) -> usize {
    flag.filter(|&w| w > 0)
        .or_else(|| std::env::var(WORKERS_ENV).ok().and_then(|v| v.trim().parse().ok()).filter(|&w| w > 0))
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Cell-wise mean and standard error over realizations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub realizations: usize,
}

/// Run `task(index, seed)` for every realization and return the outputs in index order.
///
/// On failure the lowest failing index is reported, whatever order workers finished in.
pub fn run_realizations<T, F>(spec: &EnsembleSpec, workers: usize, task: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, u64) -> Result<T> + Sync,
{
    let run_one = |r: usize| {
        let seed = spec.seed_for(r);
        task(r, seed).map_err(|e| WalkError::Realization { index: r, seed, source: Box::new(e) })
    };
    let slots: Vec<Result<T>> = if workers <= 1 {
        (0..spec.realizations).map(run_one).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| WalkError::invalid("workers", e.to_string()))?;
        pool.install(|| (0..spec.realizations).into_par_iter().map(run_one).collect())
    };
    slots.into_iter().collect()
}

pub fn run_ensemble<F>(spec: &EnsembleSpec, workers: usize, task: F) -> Result<EnsembleStats>
where
    F: Fn(usize, u64) -> Result<Vec<f64>> + Sync,
{
    let outputs = run_realizations(spec, workers, task)?;
    reduce(&outputs)
}

/// Mean and `sample_std / √N`, summed in slice order.
pub fn reduce(samples: &[Vec<f64>]) -> Result<EnsembleStats> {
    let n = samples.len();
    let Some(first) = samples.first() else {
        return Err(WalkError::invalid("realizations", "cannot reduce an empty ensemble"));
    };
    let width = first.len();
    if let Some(bad) = samples.iter().find(|s| s.len() != width) {
        return Err(WalkError::DimensionMismatch { expected: width, found: bad.len() });
    }
    let mut mean = vec![0.0; width];
    for s in samples {
        for (m, v) in mean.iter_mut().zip(s) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    // cells where every realization agrees reproduce that value exactly
    let mut constant = vec![true; width];
    for s in &samples[1..] {
        for ((c, v), f) in constant.iter_mut().zip(s).zip(first) {
            *c &= v == f;
        }
    }
    for ((m, c), f) in mean.iter_mut().zip(&constant).zip(first) {
        if *c {
            *m = *f;
        }
    }
    let mut stderr = vec![0.0; width];
    if n > 1 {
        for s in samples {
            for ((acc, v), m) in stderr.iter_mut().zip(s).zip(&mean) {
                *acc += (v - m) * (v - m);
            }
        }
        let scale = ((n - 1) as f64 * n as f64).sqrt();
        for (e, c) in stderr.iter_mut().zip(&constant) {
            *e = if *c { 0.0 } else { e.sqrt() / scale };
        }
    }
    Ok(EnsembleStats { mean, stderr, realizations: n })
}
