//! Fully resolved run descriptions and their execution.
//!
//! A [`RunRequest`] carries every value that influences the output, so the
//! copy stored in a manifest is enough to regenerate the same CSV bytes.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use qwalk_core::analytics::{butterfly_velocity, dispersion, group_velocity, k_grid, localization_length};
use qwalk_core::dynamics::evolve_ensemble;
use qwalk_core::ensemble::EnsembleSpec;
use qwalk_core::krylov::{gram_matrix, k_complexity_ensemble, krylov_decompose};
use qwalk_core::otoc::{otoc_ensemble, Normalization};
use qwalk_core::walk::{label_site, site_label};
use qwalk_core::{Axis, AxisPair, DisorderSpec, InitialSpinor, WalkConfig, WalkerState};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Result;
use crate::table::{Field, Table, TableWriter};

/// Wavenumber grid used for v_B in OTOC manifests.
pub const VB_K_POINTS: usize = 2001;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkRequest {
    pub sites: usize,
    pub steps: usize,
    pub disorder: DisorderSpec,
    pub realizations: usize,
    pub base_seed: u64,
}

impl WalkRequest {
    fn config(&self) -> Result<WalkConfig> {
        Ok(WalkConfig::new(self.sites, self.steps, self.disorder, self.base_seed)?)
    }

    fn ensemble(&self) -> Result<EnsembleSpec> {
        Ok(EnsembleSpec::new(self.realizations, self.base_seed)?)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emission {
    Gram,
    Norms,
    Phi,
    K,
}

impl FromStr for Emission {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gram" => Ok(Emission::Gram),
            "norms" => Ok(Emission::Norms),
            "phi" => Ok(Emission::Phi),
            "k" => Ok(Emission::K),
            other => Err(format!("unknown emission {other:?} (expected gram, norms, phi or k)")),
        }
    }
}

impl fmt::Display for Emission {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Emission::Gram => "gram",
            Emission::Norms => "norms",
            Emission::Phi => "phi",
            Emission::K => "k",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum RunRequest {
    Dispersion {
        theta: f64,
        k_points: usize,
    },
    Evolve {
        walk: WalkRequest,
        initial: InitialSpinor,
    },
    Otoc {
        walk: WalkRequest,
        pairs: Vec<AxisPair>,
        normalization: Normalization,
        front_threshold: f64,
    },
    Krylov {
        walk: WalkRequest,
        mu: Axis,
        /// Centered site label of the initial operator.
        site: i64,
        emit: BTreeSet<Emission>,
        epsilon: f64,
    },
}

/// CSV tables plus derived scalars for the manifest.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub tables: Vec<Table>,
    pub derived: Value,
}

impl RunRequest {
    pub fn command(&self) -> &'static str {
        match self {
            RunRequest::Dispersion { .. } => "dispersion",
            RunRequest::Evolve { .. } => "evolve",
            RunRequest::Otoc { .. } => "otoc",
            RunRequest::Krylov { .. } => "krylov",
        }
    }

    pub fn base_seed(&self) -> Option<u64> {
        self.walk().map(|w| w.base_seed)
    }

    pub fn normalization(&self) -> Option<Normalization> {
        match self {
            RunRequest::Otoc { normalization, .. } => Some(*normalization),
            _ => None,
        }
    }

    fn walk(&self) -> Option<&WalkRequest> {
        match self {
            RunRequest::Dispersion { .. } => None,
            RunRequest::Evolve { walk, .. } | RunRequest::Otoc { walk, .. } | RunRequest::Krylov { walk, .. } => Some(walk),
        }
    }

    pub fn execute(&self, workers: usize) -> Result<RunOutput> {
        match self {
            RunRequest::Dispersion { theta, k_points } => run_dispersion(*theta, *k_points),
            RunRequest::Evolve { walk, initial } => run_evolve(walk, *initial, workers),
            RunRequest::Otoc { walk, pairs, normalization, front_threshold } => {
                run_otoc(walk, pairs, *normalization, *front_threshold, workers)
            }
            RunRequest::Krylov { walk, mu, site, emit, epsilon } => run_krylov(walk, *mu, *site, emit, *epsilon, workers),
        }
    }
}

fn optional<T: Serialize>(value: qwalk_core::Result<T>) -> Value {
    value.map(|v| json!(v)).unwrap_or(Value::Null)
}

fn run_dispersion(theta: f64, k_points: usize) -> Result<RunOutput> {
    let mut w = TableWriter::new("dispersion.csv", &["k", "omega", "v_g"])?;
    for k in k_grid(k_points) {
        w.row(&[Field::Float(k), Field::Float(dispersion(k, theta)?), Field::Float(group_velocity(k, theta)?)])?;
    }
    let derived = json!({
        "butterfly_velocity": butterfly_velocity(theta, k_points.max(64))?,
        "localization_length": optional(localization_length(theta)),
    });
    Ok(RunOutput { tables: vec![w.finish()?], derived })
}

fn run_evolve(walk: &WalkRequest, initial: InitialSpinor, workers: usize) -> Result<RunOutput> {
    let config = walk.config()?;
    let init = WalkerState::localized(walk.sites, 0, initial.spinor())?;
    let ens = evolve_ensemble(&config, &init, &walk.ensemble()?, workers)?;

    let mut dist = TableWriter::new("distribution.csv", &["t", "x", "p_mean", "p_stderr"])?;
    let half = walk.sites as i64 / 2;
    for t in 0..=walk.steps {
        for label in -half..half {
            let x = label_site(label, walk.sites);
            dist.row(&[
                Field::Int(t as i64),
                Field::Int(label),
                Field::Float(ens.p_mean[t][x]),
                Field::Float(ens.p_stderr[t][x]),
            ])?;
        }
    }
    let mut ipr = TableWriter::new("ipr.csv", &["t", "ipr_mean", "ipr_stderr"])?;
    for t in 0..=walk.steps {
        ipr.row(&[Field::Int(t as i64), Field::Float(ens.ipr_mean[t]), Field::Float(ens.ipr_stderr[t])])?;
    }
    let derived = json!({
        "realizations": ens.realizations,
        "localization_length": optional(localization_length(walk.disorder.theta0)),
    });
    Ok(RunOutput { tables: vec![dist.finish()?, ipr.finish()?], derived })
}

fn run_otoc(
    walk: &WalkRequest,
    pairs: &[AxisPair],
    norm: Normalization,
    front_threshold: f64,
    workers: usize,
) -> Result<RunOutput> {
    let config = walk.config()?;
    let grid = otoc_ensemble(&config, pairs, norm, &walk.ensemble()?, workers)?;
    let stderr = grid.stderr.as_ref().expect("ensemble grids carry stderr");

    let mut w = TableWriter::new("otoc.csv", &["pair", "t", "l", "c_mean", "c_stderr"])?;
    let mut fronts = Vec::with_capacity(pairs.len());
    for (p, pair) in pairs.iter().enumerate() {
        let name = pair.to_string();
        for t in 0..=walk.steps {
            for col in 0..walk.sites {
                w.row(&[
                    Field::Text(&name),
                    Field::Int(t as i64),
                    Field::Int(grid.label(col)),
                    Field::Float(grid.values[p][t][col]),
                    Field::Float(stderr[p][t][col]),
                ])?;
            }
        }
        fronts.push(json!({ "pair": name, "estimate": grid.front_velocity(p, front_threshold)? }));
    }
    let derived = json!({
        "butterfly_velocity": optional(butterfly_velocity(walk.disorder.theta0, VB_K_POINTS)),
        "front_threshold": front_threshold,
        "front_velocity": fronts,
        "realizations": grid.realizations,
    });
    Ok(RunOutput { tables: vec![w.finish()?], derived })
}

fn run_krylov(
    walk: &WalkRequest,
    mu: Axis,
    site_label_value: i64,
    emit: &BTreeSet<Emission>,
    epsilon: f64,
    workers: usize,
) -> Result<RunOutput> {
    let config = walk.config()?;
    let spec = walk.ensemble()?;
    let site = label_site(site_label_value, walk.sites);
    debug_assert_eq!(site_label(site, walk.sites), site_label_value);
    let mut tables = Vec::new();
    let mut derived = serde_json::Map::new();

    // gram, norms and phi describe a single realization: the first one
    if emit.iter().any(|e| *e != Emission::K) {
        let gram = gram_matrix(&config.with_seed(spec.seed_for(0)), mu, site, walk.steps)?;
        let dec = krylov_decompose(&gram, epsilon)?;
        derived.insert("structure_realization".into(), json!(0));
        derived.insert("rank".into(), json!(dec.rank));
        if emit.contains(&Emission::Gram) {
            let mut w = TableWriter::new("krylov_gram.csv", &["n", "m", "value"])?;
            for n in 0..gram.size() {
                for m in 0..gram.size() {
                    w.row(&[Field::Int(n as i64), Field::Int(m as i64), Field::Float(gram.get(n, m))])?;
                }
            }
            tables.push(w.finish()?);
        }
        if emit.contains(&Emission::Norms) {
            let mut w = TableWriter::new("krylov_norms.csv", &["n", "norm_A"])?;
            for (n, v) in dec.norms.iter().enumerate() {
                w.row(&[Field::Int(n as i64), Field::Float(*v)])?;
            }
            tables.push(w.finish()?);
        }
        if emit.contains(&Emission::Phi) {
            let mut w = TableWriter::new("krylov_phi.csv", &["n", "t", "value"])?;
            for (n, row) in dec.amplitudes.iter().enumerate() {
                for (t, v) in row.iter().enumerate() {
                    w.row(&[Field::Int(n as i64), Field::Int(t as i64), Field::Float(*v)])?;
                }
            }
            tables.push(w.finish()?);
        }
    }
    if emit.contains(&Emission::K) {
        let ens = k_complexity_ensemble(&config, mu, site, epsilon, &spec, workers)?;
        let mut w = TableWriter::new("krylov_k.csv", &["t", "k_mean", "k_stderr"])?;
        for t in 0..=walk.steps {
            w.row(&[Field::Int(t as i64), Field::Float(ens.mean[t]), Field::Float(ens.stderr[t])])?;
        }
        tables.push(w.finish()?);
        derived.insert("realizations".into(), json!(ens.realizations));
    }
    Ok(RunOutput { tables, derived: Value::Object(derived) })
}
