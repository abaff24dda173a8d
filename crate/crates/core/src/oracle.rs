//! Dense-matrix ground truth for the rank-2 fast paths.
//!
//! Everything here builds full `2L × 2L` matrices straight from the walk
//! definition `U = S (⊕ C)` and never calls into the structured step code.
//! Meant for tests and validation at small L.

use num_complex::Complex64;

use crate::error::{Result, WalkError};
use crate::otoc::Normalization;
use crate::operator::Rank2Operator;
use crate::spin::{Axis, AxisPair, ONE, ZERO};
use crate::walk::{coin_matrix, CoinParams, CoinRow, CoinSchedule, WalkConfig};

/// Largest lattice the oracle accepts without an explicit override.
pub const ORACLE_SITE_LIMIT: usize = 32;

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> Self {
        DenseOperator { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn matmul(&self, other: &DenseOperator) -> DenseOperator {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> DenseOperator {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn sub(&self, other: &DenseOperator) -> DenseOperator {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        DenseOperator { dim: self.dim, data }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// Tr(A† B) without forming the product.
    pub fn hs_inner(&self, other: &DenseOperator) -> Complex64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        (0..n).map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum()).collect()
    }

    /// `|a⟩⟨a| − |b⟩⟨b|` materialized.
    pub fn from_rank2(op: &Rank2Operator) -> DenseOperator {
        let a = op.plus.amplitudes();
        let b = op.minus.amplitudes();
        let n = a.len();
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = a[i] * a[j].conj() - b[i] * b[j].conj();
            }
        }
        out
    }
}

/// `σ^μ ⊗ |site⟩⟨site|` built entrywise from the Pauli matrix.
pub fn dense_local(axis: Axis, site: usize, sites: usize) -> DenseOperator {
    let mut m = DenseOperator::zeros(2 * sites);
    let p = axis.pauli();
    for i in 0..2 {
        for j in 0..2 {
            m.set(2 * site + i, 2 * site + j, p[i][j]);
        }
    }
    m
}

/// One-step unitary as the product of the shift permutation and the block-diagonal coin.
pub fn dense_step_unitary(row: CoinRow<'_>, sites: usize) -> DenseOperator {
    let n = 2 * sites;
    let mut coin = DenseOperator::zeros(n);
    for x in 0..sites {
        let theta = match row {
            CoinRow::Uniform(t) => t,
            CoinRow::PerSite(a) => a[x],
        };
        let c = coin_matrix(CoinParams { theta });
        for i in 0..2 {
            for j in 0..2 {
                coin.set(2 * x + i, 2 * x + j, c[i][j]);
            }
        }
    }
    // S = |↓⟩⟨↓| ⊗ T₊ + |↑⟩⟨↑| ⊗ T₋ with T± |x⟩ = |x ± 1⟩
    let mut shift = DenseOperator::zeros(n);
    for x in 0..sites {
        shift.set(2 * ((x + 1) % sites) + 1, 2 * x + 1, ONE);
        shift.set(2 * ((x + sites - 1) % sites), 2 * x, ONE);
    }
    shift.matmul(&coin)
}

/// Dense propagators for one walk realization.
#[derive(Clone, Debug)]
pub struct DenseOracle {
    sites: usize,
    schedule: CoinSchedule,
}

impl DenseOracle {
    pub fn new(config: &WalkConfig) -> Result<Self> {
        Self::with_override(config, false)
    }

    pub fn with_override(config: &WalkConfig, allow_large: bool) -> Result<Self> {
        if config.sites > ORACLE_SITE_LIMIT && !allow_large {
            return Err(WalkError::OracleTooLarge { sites: config.sites, limit: ORACLE_SITE_LIMIT });
        }
        Ok(DenseOracle { sites: config.sites, schedule: config.schedule()? })
    }

    pub fn from_schedule(sites: usize, schedule: CoinSchedule) -> Result<Self> {
        if sites > ORACLE_SITE_LIMIT {
            return Err(WalkError::OracleTooLarge { sites, limit: ORACLE_SITE_LIMIT });
        }
        Ok(DenseOracle { sites, schedule })
    }

    pub fn dim(&self) -> usize {
        2 * self.sites
    }

    /// `U(t) = U_t ⋯ U_1` for t = 0..=steps.
    pub fn propagators(&self, steps: usize) -> Vec<DenseOperator> {
        let mut out = Vec::with_capacity(steps + 1);
        out.push(DenseOperator::identity(self.dim()));
        for t in 0..steps {
            let u = dense_step_unitary(self.schedule.row(t), self.sites);
            let next = u.matmul(&out[t]);
            out.push(next);
        }
        out
    }

    /// Amplitude vectors for t = 0..=steps.
    pub fn dense_evolve(&self, initial: &[Complex64], steps: usize) -> Vec<Vec<Complex64>> {
        self.propagators(steps).iter().map(|u| u.apply(initial)).collect()
    }

    /// `U(t)† O U(t)` for t = 0..=steps.
    pub fn heisenberg(&self, op: &DenseOperator, steps: usize) -> Vec<DenseOperator> {
        self.propagators(steps).iter().map(|u| u.adjoint().matmul(op).matmul(u)).collect()
    }

    /// C_{μν}(l, t) from `½ N Tr([W_l(t), V]† [W_l(t), V])` with W evolved in the
    /// Heisenberg picture. Indexed `[t][internal site]`.
    pub fn dense_commutator_otoc(&self, pair: AxisPair, norm: Normalization, steps: usize) -> Vec<Vec<f64>> {
        let dim = self.dim();
        let v = dense_local(pair.nu, 0, self.sites);
        let props = self.propagators(steps);
        let factor = 0.5 * norm.factor(dim);
        props
            .iter()
            .map(|u| {
                let ud = u.adjoint();
                (0..self.sites)
                    .map(|l| {
                        let w = ud.matmul(&dense_local(pair.mu, l, self.sites)).matmul(u);
                        let comm = w.matmul(&v).sub(&v.matmul(&w));
                        factor * comm.hs_inner(&comm).re
                    })
                    .collect()
            })
            .collect()
    }

    /// Gram matrix `(O_s|O_t) / (O_0|O_0)` of Heisenberg snapshots of `σ^μ ⊗ |site⟩⟨site|`.
    pub fn dense_gram(&self, axis: Axis, site: usize, steps: usize) -> Vec<Vec<f64>> {
        let op = dense_local(axis, site, self.sites);
        let snaps = self.heisenberg(&op, steps);
        let norm = snaps[0].hs_inner(&snaps[0]).re;
        snaps.iter().map(|a| snaps.iter().map(|b| a.hs_inner(b).re / norm).collect()).collect()
    }
}
