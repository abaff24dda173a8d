//! Discrete-time Krylov complexity.
//!
//! The Heisenberg snapshots `O_0, O_1, …, O_T` are orthogonalized in order.
//! All arithmetic runs on the `(T+1)`-dimensional Gram representation: a
//! Krylov vector is a coefficient vector `c_n` over the unit-normalized
//! snapshots, inner products are `xᵀ G y`, and the amplitude of snapshot `t`
//! on basis vector `n` is `φ_{n,t} = (G c_n)_t`.
//!
//! Working from G resolves ‖A_n‖² only down to roughly 1e-9. Walks with
//! θ close to π/2 barely move, their snapshots become dependent faster than
//! that, and the default tolerance then reports [`WalkError::Degenerate`];
//! a looser `epsilon` such as 1e-8 truncates the basis instead.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensemble::{run_realizations, EnsembleSpec};
use crate::error::{Result, WalkError};
use crate::operator::{frobenius_inner, heisenberg_snapshots, initial_local_operator};
use crate::spin::Axis;
use crate::walk::WalkConfig;

/// Default rank tolerance on ‖A_n‖².
pub const DEFAULT_RANK_EPSILON: f64 = 1e-12;

/// A squared norm below `-NEGATIVE_TOLERANCE` means G is not positive semidefinite.
pub const NEGATIVE_TOLERANCE: f64 = 1e-10;

/// Symmetric matrix of normalized snapshot overlaps, `G_{s,t} = (O_s|O_t)/(O_0|O_0)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramMatrix {
    size: usize,
    entries: Vec<f64>,
}

impl GramMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 {
            return Err(WalkError::invalid("gram", "empty matrix"));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != size) {
            return Err(WalkError::DimensionMismatch { expected: size, found: bad.len() });
        }
        Ok(GramMatrix { size, entries: rows.into_iter().flatten().collect() })
    }

    pub fn identity(size: usize) -> Self {
        let mut entries = vec![0.0; size * size];
        for i in 0..size {
            entries[i * size + i] = 1.0;
        }
        GramMatrix { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, s: usize, t: usize) -> f64 {
        self.entries[s * self.size + t]
    }

    pub fn row(&self, s: usize) -> &[f64] {
        &self.entries[s * self.size..(s + 1) * self.size]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    /// Largest |G_{s,t}| over odd s − t.
    pub fn odd_parity_max(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for s in 0..self.size {
            for t in 0..self.size {
                if (s + t) % 2 == 1 {
                    worst = worst.max(self.get(s, t).abs());
                }
            }
        }
        worst
    }

    /// Largest deviation from constant values along each even off-diagonal.
    pub fn even_toeplitz_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for d in (2..self.size).step_by(2) {
            let first = self.get(d, 0);
            for t in d + 1..self.size {
                worst = worst.max((self.get(t, t - d) - first).abs());
            }
        }
        worst
    }

    pub fn symmetry_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for s in 0..self.size {
            for t in 0..s {
                worst = worst.max((self.get(s, t) - self.get(t, s)).abs());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &[Vec<f64>]) -> f64 {
        let mut worst: f64 = 0.0;
        for (s, row) in other.iter().enumerate() {
            for (t, &v) in row.iter().enumerate() {
                worst = worst.max((self.get(s, t) - v).abs());
            }
        }
        worst
    }
}

/// Gram matrix of the Heisenberg snapshots of `σ^μ ⊗ |site⟩⟨site|` for t = 0..=steps.
pub fn gram_matrix(config: &WalkConfig, mu: Axis, site: usize, steps: usize) -> Result<GramMatrix> {
    config.validate()?;
    let schedule = config.schedule()?;
    let op = initial_local_operator(mu, site, config.sites)?;
    let snaps = heisenberg_snapshots(&op, &schedule, steps)?;
    let dim = config.dim();
    let reference = frobenius_inner(&snaps[0], &snaps[0], dim)?;
    let rows: Vec<Vec<f64>> = (0..=steps)
        .into_par_iter()
        .map(|s| snaps.iter().map(|b| frobenius_inner(&snaps[s], b, dim).map(|v| v / reference)).collect())
        .collect::<Result<_>>()?;
    GramMatrix::from_rows(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KrylovDecomposition {
    /// `coeffs[n]` expresses `|O_n)` over the normalized snapshots `0..=n`.
    /// Entries grow quickly once the snapshots become nearly dependent.
    pub coeffs: Vec<Vec<f64>>,
    /// ‖A_n‖ before normalization.
    pub norms: Vec<f64>,
    /// Number of retained Krylov vectors.
    pub rank: usize,
    /// `amplitudes[n][t] = φ_{n,t}`, zero for n > t.
    pub amplitudes: Vec<Vec<f64>>,
    /// K(t) = Σ_n n |φ_{n,t}|² for t = 0..=T.
    pub complexity: Vec<f64>,
}

impl KrylovDecomposition {
    /// Σ_n |φ_{n,t}|² for each t.
    pub fn completeness(&self) -> Vec<f64> {
        let steps = self.complexity.len();
        (0..steps).map(|t| self.amplitudes.iter().map(|row| row[t] * row[t]).sum()).collect()
    }
}

/// Rank-revealing Gram–Schmidt of the snapshots in the order 0..=T.
///
/// Carried out as the up-looking Cholesky factorization `G = Rᵀ R`: row `n`
/// of `R` is the projection of every later snapshot onto `|O_n)`, so
/// `φ_{n,t} = R_{n,t}` and `‖A_n‖ = R_{n,n}`. This avoids forming the
/// (possibly huge) snapshot coefficients before projecting, which loses
/// accuracy once the snapshots become nearly dependent.
///
/// A squared norm below `epsilon` ends the basis; one below
/// `-NEGATIVE_TOLERANCE` means G is not PSD and is reported as an error.
pub fn krylov_decompose(gram: &GramMatrix, epsilon: f64) -> Result<KrylovDecomposition> {
    let size = gram.size();
    // amplitudes[n][t] = R_{n,t}, zero below the diagonal
    let mut amplitudes: Vec<Vec<f64>> = Vec::new();
    let mut norms = Vec::new();

    for n in 0..size {
        let norm_sq = gram.get(n, n) - amplitudes.iter().map(|row| row[n] * row[n]).sum::<f64>();
        if norm_sq < -NEGATIVE_TOLERANCE {
            return Err(WalkError::Degenerate { index: n, norm_sq });
        }
        if norm_sq < epsilon {
            break;
        }
        let norm = norm_sq.sqrt();
        let mut row = vec![0.0; size];
        row[n] = norm;
        for t in n + 1..size {
            let overlap = gram.get(n, t) - amplitudes.iter().map(|r| r[n] * r[t]).sum::<f64>();
            row[t] = overlap / norm;
        }
        norms.push(norm);
        amplitudes.push(row);
    }

    let rank = amplitudes.len();
    // |O_n) = Σ_s c_{n,s} |Ô_s) with C = R⁻ᵀ restricted to the retained block
    let mut coeffs: Vec<Vec<f64>> = Vec::with_capacity(rank);
    for n in 0..rank {
        let mut c = vec![0.0; size];
        c[n] = 1.0 / amplitudes[n][n];
        for s in 0..n {
            let acc: f64 = (s..n).map(|k| amplitudes[k][n] * coeffs[k][s]).sum();
            c[s] = -acc / amplitudes[n][n];
        }
        coeffs.push(c);
    }
    let complexity = (0..size)
        .map(|t| amplitudes.iter().enumerate().map(|(n, row)| n as f64 * row[t] * row[t]).sum())
        .collect();
    Ok(KrylovDecomposition { coeffs, norms, rank, amplitudes, complexity })
}

/// Mean K(t) with standard error across disorder realizations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexityEnsemble {
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub realizations: usize,
}

/// Decompose one Gram matrix per realization and average K(t) cell-wise.
pub fn k_complexity_ensemble(
    config: &WalkConfig,
    mu: Axis,
    site: usize,
    epsilon: f64,
    spec: &EnsembleSpec,
    workers: usize,
) -> Result<ComplexityEnsemble> {
    let curves = run_realizations(spec, workers, |_, seed| {
        let gram = gram_matrix(&config.with_seed(seed), mu, site, config.steps)?;
        Ok(krylov_decompose(&gram, epsilon)?.complexity)
    })?;
    let stats = crate::ensemble::reduce(&curves)?;
    Ok(ComplexityEnsemble { mean: stats.mean, stderr: stats.stderr, realizations: stats.realizations })
}
