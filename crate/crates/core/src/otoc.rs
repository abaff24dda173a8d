//! Out-of-time-ordered correlators `C_{μν}(l, t) = ½ ⟨|[W^μ_l(t), V^ν_0]|²⟩`.
//!
//! The expectation is the normalized trace `N · Tr(·)`. Cycling the trace
//! moves the time evolution from `W` onto `V`: with `V(t) = U(t) V U(t)†`
//! held as the rank-2 pair (a, b) and `M_l = ⟨l|V(t)|l⟩`,
//!
//! ```text
//! C(l, t) = N · ( ‖α_l‖² + ‖β_l‖² − Re Tr₂[σ^μ M_l σ^μ M_l] )
//! ```
//!
//! where α_l, β_l are the site-l spinors of a and b. One forward evolution of
//! `V` yields every l at once.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::centered;
use crate::ensemble::{run_realizations, EnsembleSpec};
use crate::error::{Result, WalkError};
use crate::operator::{evolve_forward, initial_local_operator, Rank2Operator};
use crate::spin::{matmul, trace, Axis, AxisPair};
use crate::walk::WalkConfig;

/// Normalization N applied after the ½ prefactor.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Infinite-temperature trace, N = 1/D with D = 2L.
    #[default]
    InverseDim,
    Half,
    Unit,
}

impl Normalization {
    pub fn factor(self, dim: usize) -> f64 {
        match self {
            Normalization::InverseDim => 1.0 / dim as f64,
            Normalization::Half => 0.5,
            Normalization::Unit => 1.0,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Normalization::InverseDim => "inverse-dim",
            Normalization::Half => "half",
            Normalization::Unit => "unit",
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Normalization {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inverse-dim" | "inv-dim" | "1/d" => Ok(Normalization::InverseDim),
            "half" | "1/2" => Ok(Normalization::Half),
            "unit" | "1" => Ok(Normalization::Unit),
            other => Err(WalkError::invalid("norm", format!("unknown normalization {other:?}"))),
        }
    }
}

/// Values within this distance below zero are rounding noise and clamp to 0.
const CLAMP_TOLERANCE: f64 = 1e-12;

/// OTOC values for every probe site at one time, in internal site order.
pub fn otoc_row(evolved: &Rank2Operator, mu: Axis, norm: Normalization) -> Vec<f64> {
    let sigma = mu.pauli();
    let factor = norm.factor(evolved.dim());
    (0..evolved.sites())
        .map(|l| {
            let weight = evolved.site_weight(l);
            if weight == 0.0 {
                return 0.0;
            }
            let m = evolved.site_block(l);
            let sms = matmul(&matmul(&sigma, &m), &sigma);
            let overlap = trace(&matmul(&sms, &m)).re;
            let c = factor * (weight - overlap);
            if c < 0.0 && c > -CLAMP_TOLERANCE * factor.max(1.0) {
                0.0
            } else {
                c
            }
        })
        .collect()
}

/// C_{μν}(l, t) on a (t, l) lattice for several pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OtocGrid {
    pub config: WalkConfig,
    pub normalization: Normalization,
    pub pairs: Vec<AxisPair>,
    /// `[pair][t][column]`, column `j` holding centered label `j − L/2`.
    pub values: Vec<Vec<Vec<f64>>>,
    /// Standard error per cell when averaged over an ensemble.
    pub stderr: Option<Vec<Vec<Vec<f64>>>>,
    pub realizations: usize,
}

impl OtocGrid {
    pub fn sites(&self) -> usize {
        self.config.sites
    }

    pub fn steps(&self) -> usize {
        self.config.steps
    }

    /// Centered label of column `j`.
    pub fn label(&self, column: usize) -> i64 {
        column as i64 - (self.sites() / 2) as i64
    }

    pub fn column(&self, label: i64) -> usize {
        (label + (self.sites() / 2) as i64) as usize
    }

    pub fn labels(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.sites()).map(|j| self.label(j))
    }

    pub fn pair_index(&self, pair: AxisPair) -> Option<usize> {
        self.pairs.iter().position(|&p| p == pair)
    }

    pub fn value(&self, pair: usize, t: usize, label: i64) -> f64 {
        self.values[pair][t][self.column(label)]
    }

    pub fn pair_values(&self, pair: usize) -> &[Vec<f64>] {
        &self.values[pair]
    }

    /// Rescale every cell (and stderr) by `N_new / N_old`.
    pub fn renormalized(&self, norm: Normalization) -> OtocGrid {
        let dim = self.config.dim();
        let ratio = norm.factor(dim) / self.normalization.factor(dim);
        let scale = |v: &Vec<Vec<Vec<f64>>>| -> Vec<Vec<Vec<f64>>> {
            v.iter().map(|p| p.iter().map(|row| row.iter().map(|c| c * ratio).collect()).collect()).collect()
        };
        OtocGrid {
            values: scale(&self.values),
            stderr: self.stderr.as_ref().map(scale),
            normalization: norm,
            ..self.clone()
        }
    }

    pub fn front_velocity(&self, pair: usize, threshold_fraction: f64) -> Result<FrontEstimate> {
        front_velocity(&self.values[pair], threshold_fraction)
    }
}

fn group_by_source(pairs: &[AxisPair]) -> BTreeMap<Axis, Vec<(usize, Axis)>> {
    let mut by_nu: BTreeMap<Axis, Vec<(usize, Axis)>> = BTreeMap::new();
    for (i, p) in pairs.iter().enumerate() {
        by_nu.entry(p.nu).or_default().push((i, p.mu));
    }
    by_nu
}

/// Single-realization grid from the schedule drawn with `config.seed`.
pub fn otoc_grid(config: &WalkConfig, pairs: &[AxisPair], norm: Normalization) -> Result<OtocGrid> {
    config.validate()?;
    if pairs.is_empty() {
        return Err(WalkError::invalid("pairs", "need at least one (mu, nu) pair"));
    }
    let schedule = config.schedule()?;
    let mut values = vec![Vec::with_capacity(config.steps + 1); pairs.len()];
    for (nu, probes) in group_by_source(pairs) {
        let source = initial_local_operator(nu, 0, config.sites)?;
        evolve_forward(&source, &schedule, config.steps, |_, evolved| {
            for &(slot, mu) in &probes {
                values[slot].push(centered(&otoc_row(evolved, mu, norm)));
            }
            Ok(())
        })?;
    }
    Ok(OtocGrid { config: *config, normalization: norm, pairs: pairs.to_vec(), values, stderr: None, realizations: 1 })
}

/// Cell-wise ensemble mean of OTOC grids, realization `r` seeded by `spec.seed_for(r)`.
pub fn otoc_ensemble(
    config: &WalkConfig,
    pairs: &[AxisPair],
    norm: Normalization,
    spec: &EnsembleSpec,
    workers: usize,
) -> Result<OtocGrid> {
    let grids = run_realizations(spec, workers, |_, seed| otoc_grid(&config.with_seed(seed), pairs, norm))?;
    average_grids(config, &grids)
}

/// Mean and standard error over grids that share shape and pair labels.
pub fn average_grids(config: &WalkConfig, grids: &[OtocGrid]) -> Result<OtocGrid> {
    let first = grids.first().ok_or_else(|| WalkError::invalid("realizations", "no grids to average"))?;
    let flat: Vec<Vec<f64>> =
        grids.iter().map(|g| g.values.iter().flatten().flatten().copied().collect::<Vec<f64>>()).collect();
    let stats = crate::ensemble::reduce(&flat)?;
    let rows = config.steps + 1;
    let cols = config.sites;
    let unflatten = |v: &[f64]| -> Vec<Vec<Vec<f64>>> {
        v.chunks(rows * cols).map(|p| p.chunks(cols).map(|r| r.to_vec()).collect()).collect()
    };
    Ok(OtocGrid {
        config: *config,
        normalization: first.normalization,
        pairs: first.pairs.clone(),
        values: unflatten(&stats.mean),
        stderr: Some(unflatten(&stats.stderr)),
        realizations: grids.len(),
    })
}

/// Largest |label| in a centered row with value ≥ `threshold`.
pub fn front_extent(row: &[f64], threshold: f64) -> Option<usize> {
    let half = (row.len() / 2) as i64;
    row.iter()
        .enumerate()
        .filter(|(_, &c)| c >= threshold && c > 0.0)
        .map(|(j, _)| (j as i64 - half).unsigned_abs() as usize)
        .max()
}

/// Front extent at row `t` with the threshold set to `fraction` of the block's global maximum.
pub fn relative_front_extent(rows: &[Vec<f64>], t: usize, fraction: f64) -> Option<usize> {
    let peak = rows.iter().flatten().copied().fold(0.0_f64, f64::max);
    if peak <= 0.0 {
        return None;
    }
    front_extent(&rows[t], fraction * peak)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit, in sites.
    pub residual: f64,
    /// (t, l*(t)) points entering the fit.
    pub points: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrontEstimate {
    Front(FrontFit),
    /// All-zero grid, or fewer than two usable time slices.
    NoFront,
}

impl FrontEstimate {
    pub fn slope(&self) -> Option<f64> {
        match self {
            FrontEstimate::Front(f) => Some(f.slope),
            FrontEstimate::NoFront => None,
        }
    }
}

/// Least-squares slope of the threshold front l*(t) over t ∈ [T/4, T].
///
/// `rows` is one pair's `[t][centered column]` block; the threshold is
/// `threshold_fraction` times the block's global maximum.
pub fn front_velocity(rows: &[Vec<f64>], threshold_fraction: f64) -> Result<FrontEstimate> {
    if !(threshold_fraction > 0.0 && threshold_fraction < 1.0) {
        return Err(WalkError::invalid(
            "threshold_fraction",
            format!("must lie in (0, 1), got {threshold_fraction}"),
        ));
    }
    let peak = rows.iter().flatten().copied().fold(0.0_f64, f64::max);
    if peak <= 0.0 || rows.is_empty() {
        return Ok(FrontEstimate::NoFront);
    }
    let threshold = threshold_fraction * peak;
    let last = rows.len() - 1;
    let points: Vec<(usize, usize)> = (last / 4..=last)
        .filter_map(|t| front_extent(&rows[t], threshold).map(|l| (t, l)))
        .collect();
    if points.len() < 2 {
        return Ok(FrontEstimate::NoFront);
    }
    let (slope, intercept, _) = linear_fit(points.iter().map(|&(t, l)| (t as f64, l as f64)));
    let residual = (points
        .iter()
        .map(|&(t, l)| {
            let r = l as f64 - (slope * t as f64 + intercept);
            r * r
        })
        .sum::<f64>()
        / points.len() as f64)
        .sqrt();
    Ok(FrontEstimate::Front(FrontFit { slope, intercept, residual, points }))
}

/// Ordinary least squares `y = slope·x + intercept`; returns (slope, intercept, R²).
pub fn linear_fit(points: impl IntoIterator<Item = (f64, f64)>) -> (f64, f64, f64) {
    let pts: Vec<(f64, f64)> = points.into_iter().collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    (slope, intercept, r2)
}
