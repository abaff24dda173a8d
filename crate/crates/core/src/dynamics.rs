//! Schrödinger-picture evolution of a single walker: position distributions,
//! inverse participation ratio and spreading width.

use serde::{Deserialize, Serialize};

use crate::ensemble::{reduce, run_realizations, EnsembleSpec};
use crate::error::{Result, WalkError};
use crate::state::WalkerState;
use crate::walk::{site_label, WalkConfig};

/// Position distributions p_x(t) for t = 0..=T, columns in internal site order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub sites: usize,
    pub rows: Vec<Vec<f64>>,
    pub ipr: Vec<f64>,
}

impl Trajectory {
    pub fn steps(&self) -> usize {
        self.rows.len() - 1
    }

    /// Row `t` reordered by centered label −L/2..L/2−1.
    pub fn centered_row(&self, t: usize) -> Vec<f64> {
        centered(&self.rows[t])
    }
}

/// Reorder an internal-index vector by centered label.
pub fn centered(values: &[f64]) -> Vec<f64> {
    let sites = values.len();
    let half = sites / 2;
    (0..sites).map(|j| values[(j + sites - half) % sites]).collect()
}

pub fn evolve(config: &WalkConfig, initial: &WalkerState) -> Result<Trajectory> {
    config.validate()?;
    if initial.sites() != config.sites {
        return Err(WalkError::DimensionMismatch { expected: config.dim(), found: initial.dim() });
    }
    let schedule = config.schedule()?;
    let mut state = initial.clone();
    let mut scratch = Vec::new();
    let mut rows = Vec::with_capacity(config.steps + 1);
    rows.push(state.probabilities());
    let fixed = if schedule.is_time_independent() { Some(schedule.rotations(0, config.sites)?) } else { None };
    for t in 0..config.steps {
        match &fixed {
            Some(rot) => state.step_in_place(rot, &mut scratch)?,
            None => state.step_in_place(&schedule.rotations(t, config.sites)?, &mut scratch)?,
        }
        rows.push(state.probabilities());
    }
    let ipr = rows.iter().map(|r| ipr(r)).collect();
    Ok(Trajectory { sites: config.sites, rows, ipr })
}

/// Ensemble-averaged distributions and IPR, each with a standard error.
///
/// The IPR is averaged per realization, not computed from the mean distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryEnsemble {
    pub sites: usize,
    pub p_mean: Vec<Vec<f64>>,
    pub p_stderr: Vec<Vec<f64>>,
    pub ipr_mean: Vec<f64>,
    pub ipr_stderr: Vec<f64>,
    pub realizations: usize,
}

pub fn evolve_ensemble(
    config: &WalkConfig,
    initial: &WalkerState,
    spec: &EnsembleSpec,
    workers: usize,
) -> Result<TrajectoryEnsemble> {
    let runs = run_realizations(spec, workers, |_, seed| evolve(&config.with_seed(seed), initial))?;
    let flat: Vec<Vec<f64>> = runs.iter().map(|r| r.rows.iter().flatten().copied().collect()).collect();
    let iprs: Vec<Vec<f64>> = runs.iter().map(|r| r.ipr.clone()).collect();
    let p = reduce(&flat)?;
    let q = reduce(&iprs)?;
    let split = |v: Vec<f64>| v.chunks(config.sites).map(|c| c.to_vec()).collect();
    Ok(TrajectoryEnsemble {
        sites: config.sites,
        p_mean: split(p.mean),
        p_stderr: split(p.stderr),
        ipr_mean: q.mean,
        ipr_stderr: q.stderr,
        realizations: runs.len(),
    })
}

/// Mean of `values[t]` over `t ∈ window`.
pub fn window_mean(values: &[f64], window: std::ops::RangeInclusive<usize>) -> f64 {
    let n = window.clone().count() as f64;
    values[window].iter().sum::<f64>() / n
}

/// Σ_x p_x².
pub fn ipr(distribution: &[f64]) -> f64 {
    distribution.iter().map(|p| p * p).sum()
}

/// Variance of the position distribution in centered labels.
pub fn position_variance(distribution: &[f64]) -> f64 {
    let sites = distribution.len();
    let (mut m1, mut m2) = (0.0, 0.0);
    for (x, &p) in distribution.iter().enumerate() {
        let l = site_label(x, sites) as f64;
        m1 += p * l;
        m2 += p * l * l;
    }
    m2 - m1 * m1
}
