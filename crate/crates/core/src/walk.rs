//! Walk configuration, coin matrices, disorder sampling and the single-step unitary.
//!
//! Amplitudes live on a periodic ring of `L` sites (L even) and are stored
//! interleaved as `[up_0, down_0, up_1, down_1, ...]`. One step applies the
//! coin `C(θ) = [[cos θ, sin θ], [−sin θ, cos θ]]` on every site and then
//! shifts the down component by +1 and the up component by −1.

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;
use rand::distributions::{Distribution as _, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::spin::Mat2;

/// The one-parameter coin angle.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoinParams {
    pub theta: f64,
}

impl CoinParams {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(WalkError::invalid("theta", format!("must be finite, got {theta}")));
        }
        Ok(CoinParams { theta })
    }
}

pub fn coin_matrix(params: CoinParams) -> Mat2 {
    let (s, c) = params.theta.sin_cos();
    let c = Complex64::new(c, 0.0);
    let s = Complex64::new(s, 0.0);
    [[c, s], [-s, c]]
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DisorderKind {
    Clean,
    Spatial,
    Temporal,
}

/// How disordered angles are drawn around θ0.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleDistribution {
    /// Uniform over the closed interval [θ0 − W/2, θ0 + W/2].
    #[default]
    UniformInterval,
    /// Equiprobable two-point set {θ0 − W/2, θ0 + W/2}.
    Binary,
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisorderSpec {
    pub kind: DisorderKind,
    pub theta0: f64,
    pub strength: f64,
    pub distribution: AngleDistribution,
}

impl DisorderSpec {
    pub fn clean(theta: f64) -> Self {
        DisorderSpec {
            kind: DisorderKind::Clean,
            theta0: theta,
            strength: 0.0,
            distribution: AngleDistribution::UniformInterval,
        }
    }

    pub fn spatial(theta0: f64, strength: f64) -> Self {
        DisorderSpec { kind: DisorderKind::Spatial, theta0, strength, distribution: Default::default() }
    }

    pub fn temporal(theta0: f64, strength: f64) -> Self {
        DisorderSpec { kind: DisorderKind::Temporal, theta0, strength, distribution: Default::default() }
    }

    pub fn with_distribution(mut self, distribution: AngleDistribution) -> Self {
        self.distribution = distribution;
        self
    }

    pub fn validate(&self) -> Result<()> {
        CoinParams::new(self.theta0)?;
        if !(0.0..=PI).contains(&self.strength) {
            return Err(WalkError::invalid(
                "strength",
                format!("disorder strength W must lie in [0, pi], got {}", self.strength),
            ));
        }
        Ok(())
    }

    /// Closed interval the sampled angles fall in.
    pub fn bounds(&self) -> (f64, f64) {
        match self.kind {
            DisorderKind::Clean => (self.theta0, self.theta0),
            _ => (self.theta0 - 0.5 * self.strength, self.theta0 + 0.5 * self.strength),
        }
    }
}

/// Everything needed to reproduce one walk realization.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub sites: usize,
    pub steps: usize,
    pub disorder: DisorderSpec,
    pub seed: u64,
}

impl WalkConfig {
    pub fn new(sites: usize, steps: usize, disorder: DisorderSpec, seed: u64) -> Result<Self> {
        let config = WalkConfig { sites, steps, disorder, seed };
        config.validate()?;
        Ok(config)
    }

    pub fn clean(sites: usize, steps: usize, theta: f64) -> Result<Self> {
        Self::new(sites, steps, DisorderSpec::clean(theta), 0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sites < 2 || self.sites % 2 != 0 {
            return Err(WalkError::invalid(
                "sites",
                format!("lattice size must be a positive even integer, got {}", self.sites),
            ));
        }
        if self.steps == 0 {
            return Err(WalkError::invalid("steps", "must be at least 1"));
        }
        self.disorder.validate()?;
        if self.steps > self.sites / 2 {
            warn!(
                "steps = {} exceeds L/2 = {}; the light cone wraps around the ring",
                self.steps,
                self.sites / 2
            );
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Hilbert-space dimension 2L.
    pub fn dim(&self) -> usize {
        2 * self.sites
    }

    pub fn schedule(&self) -> Result<CoinSchedule> {
        sample_schedule(&self.disorder, self.sites, self.steps, self.seed)
    }
}

/// Coin angles for every step of one realization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum CoinSchedule {
    Clean(f64),
    /// One angle per site, reused at every step.
    Spatial(Vec<f64>),
    /// One angle per step, shared by every site.
    Temporal(Vec<f64>),
}

/// The coin angles active during a single step.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum CoinRow<'a> {
    Uniform(f64),
    PerSite(&'a [f64]),
}

impl CoinRow<'_> {
    /// Cosine/sine pair for every site.
    fn rotations(&self, sites: usize) -> Result<Vec<(f64, f64)>> {
        match *self {
            CoinRow::Uniform(theta) => {
                let (s, c) = theta.sin_cos();
                Ok(vec![(c, s); sites])
            }
            CoinRow::PerSite(angles) => {
                if angles.len() != sites {
                    return Err(WalkError::DimensionMismatch { expected: sites, found: angles.len() });
                }
                Ok(angles
                    .iter()
                    .map(|t| {
                        let (s, c) = t.sin_cos();
                        (c, s)
                    })
                    .collect())
            }
        }
    }
}

impl CoinSchedule {
    /// Coin row for the step taking time `step` to `step + 1`. Temporal
    /// schedules repeat cyclically past their drawn length.
    pub fn row(&self, step: usize) -> CoinRow<'_> {
        match self {
            CoinSchedule::Clean(theta) => CoinRow::Uniform(*theta),
            CoinSchedule::Spatial(angles) => CoinRow::PerSite(angles),
            CoinSchedule::Temporal(angles) => CoinRow::Uniform(angles[step % angles.len()]),
        }
    }

    /// Same unitary at every step.
    pub fn is_time_independent(&self) -> bool {
        !matches!(self, CoinSchedule::Temporal(_))
    }

    pub fn angles(&self) -> &[f64] {
        match self {
            CoinSchedule::Clean(theta) => std::slice::from_ref(theta),
            CoinSchedule::Spatial(a) | CoinSchedule::Temporal(a) => a,
        }
    }

    /// Precomputed rotations for one step, reusable across many applications.
    pub fn rotations(&self, step: usize, sites: usize) -> Result<Rotations> {
        Ok(Rotations(self.row(step).rotations(sites)?))
    }
}

/// Per-site (cos θ, sin θ) for one step.
#[derive(Clone, Debug)]
pub struct Rotations(Vec<(f64, f64)>);

impl Rotations {
    pub fn from_row(row: CoinRow<'_>, sites: usize) -> Result<Self> {
        Ok(Rotations(row.rotations(sites)?))
    }

    pub fn sites(&self) -> usize {
        self.0.len()
    }
}

pub fn sample_schedule(spec: &DisorderSpec, sites: usize, steps: usize, seed: u64) -> Result<CoinSchedule> {
    spec.validate()?;
    let count = match spec.kind {
        DisorderKind::Clean => return Ok(CoinSchedule::Clean(spec.theta0)),
        DisorderKind::Spatial => sites,
        DisorderKind::Temporal => steps,
    };
    let angles = if spec.strength == 0.0 {
        vec![spec.theta0; count]
    } else {
        let (lo, hi) = spec.bounds();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match spec.distribution {
            AngleDistribution::UniformInterval => {
                let dist = Uniform::new_inclusive(lo, hi);
                (0..count).map(|_| dist.sample(&mut rng)).collect()
            }
            AngleDistribution::Binary => {
                (0..count).map(|_| if rng.gen_bool(0.5) { hi } else { lo }).collect()
            }
        }
    };
    Ok(match spec.kind {
        DisorderKind::Spatial => CoinSchedule::Spatial(angles),
        _ => CoinSchedule::Temporal(angles),
    })
}

/// Centered label in −L/2..L/2−1 for internal site index `site` (origin at index 0).
pub fn site_label(site: usize, sites: usize) -> i64 {
    let half = sites / 2;
    if site < half {
        site as i64
    } else {
        site as i64 - sites as i64
    }
}

/// Internal index for a centered label, wrapping modulo L.
pub fn label_site(label: i64, sites: usize) -> usize {
    label.rem_euclid(sites as i64) as usize
}

/// Ring distance between two sites.
pub fn ring_distance(a: usize, b: usize, sites: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(sites - d)
}

/// `dst = S (⊕ C) src` on interleaved amplitudes.
pub fn step_forward(src: &[Complex64], dst: &mut [Complex64], rot: &Rotations) -> Result<()> {
    let sites = rot.sites();
    check_len(src.len(), sites)?;
    check_len(dst.len(), sites)?;
    for (x, &(c, s)) in rot.0.iter().enumerate() {
        let up = src[2 * x];
        let down = src[2 * x + 1];
        dst[2 * ((x + sites - 1) % sites)] = up * c + down * s;
        dst[2 * ((x + 1) % sites) + 1] = down * c - up * s;
    }
    Ok(())
}

/// `dst = (⊕ C)ᵀ S† src`, the exact inverse of [`step_forward`].
pub fn step_backward(src: &[Complex64], dst: &mut [Complex64], rot: &Rotations) -> Result<()> {
    let sites = rot.sites();
    check_len(src.len(), sites)?;
    check_len(dst.len(), sites)?;
    for (x, &(c, s)) in rot.0.iter().enumerate() {
        let up = src[2 * ((x + sites - 1) % sites)];
        let down = src[2 * ((x + 1) % sites) + 1];
        dst[2 * x] = up * c - down * s;
        dst[2 * x + 1] = up * s + down * c;
    }
    Ok(())
}

fn check_len(len: usize, sites: usize) -> Result<()> {
    if len != 2 * sites {
        return Err(WalkError::DimensionMismatch { expected: 2 * sites, found: len });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{adjoint, matmul, max_abs_diff, ONE, ZERO};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn coin_matrix_special_angles() {
        let id = [[ONE, ZERO], [ZERO, ONE]];
        assert!(max_abs_diff(&coin_matrix(CoinParams { theta: 0.0 }), &id) == 0.0);

        let quarter = coin_matrix(CoinParams { theta: FRAC_PI_2 });
        let expected = [[ZERO, ONE], [-ONE, ZERO]];
        assert!(max_abs_diff(&quarter, &expected) < 1e-16);

        let m = coin_matrix(CoinParams { theta: FRAC_PI_4 });
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((m[0][0].re - h).abs() < 1e-15 && (m[0][1].re - h).abs() < 1e-15);
        assert!((m[1][0].re + h).abs() < 1e-15 && (m[1][1].re - h).abs() < 1e-15);
    }

    #[test]
    fn coin_matrix_is_special_orthogonal() {
        for k in 0..64 {
            let theta = 2.0 * PI * k as f64 / 64.0;
            let c = coin_matrix(CoinParams { theta });
            let prod = matmul(&adjoint(&c), &c);
            assert!(max_abs_diff(&prod, &[[ONE, ZERO], [ZERO, ONE]]) < 1e-14);
            let det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
            assert!((det - ONE).norm() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(CoinParams::new(f64::NAN).is_err());
        assert!(sample_schedule(&DisorderSpec::spatial(0.3, 3.5), 10, 5, 0).is_err());
        assert!(sample_schedule(&DisorderSpec::spatial(0.3, -0.1), 10, 5, 0).is_err());
        assert!(WalkConfig::clean(7, 3, 0.1).is_err());
        assert!(WalkConfig::clean(0, 3, 0.1).is_err());
        assert!(WalkConfig::clean(8, 0, 0.1).is_err());
    }

    #[test]
    fn zero_strength_gives_constant_schedule() {
        for spec in [DisorderSpec::spatial(0.7, 0.0), DisorderSpec::temporal(0.7, 0.0)] {
            let sched = sample_schedule(&spec, 12, 6, 99).unwrap();
            assert!(sched.angles().iter().all(|&a| a == 0.7));
        }
        let binary = DisorderSpec::spatial(0.7, 0.0).with_distribution(AngleDistribution::Binary);
        let sched = sample_schedule(&binary, 12, 6, 3).unwrap();
        assert!(sched.angles().iter().all(|&a| a == 0.7));
    }

    #[test]
    fn clean_ignores_seed() {
        let spec = DisorderSpec::clean(0.4);
        for seed in [0, 1, u64::MAX] {
            assert_eq!(sample_schedule(&spec, 10, 5, seed).unwrap(), CoinSchedule::Clean(0.4));
        }
    }

    #[test]
    fn spatial_samples_are_bounded_and_reproducible() {
        let spec = DisorderSpec::spatial(FRAC_PI_4, FRAC_PI_2);
        let a = sample_schedule(&spec, 200, 10, 42).unwrap();
        let b = sample_schedule(&spec, 200, 10, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.angles().len(), 200);
        assert!(a.angles().iter().all(|&t| (0.0..=FRAC_PI_2).contains(&t)));
        let c = sample_schedule(&spec, 200, 10, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn temporal_and_binary_shapes() {
        let spec = DisorderSpec::temporal(1.0, 0.5).with_distribution(AngleDistribution::Binary);
        let sched = sample_schedule(&spec, 30, 17, 5).unwrap();
        assert_eq!(sched.angles().len(), 17);
        assert!(sched.angles().iter().all(|&t| t == 0.75 || t == 1.25));
        assert!(sched.angles().iter().any(|&t| t == 0.75));
        assert!(sched.angles().iter().any(|&t| t == 1.25));
        assert!(!sched.is_time_independent());
    }

    #[test]
    fn labels_round_trip() {
        let l = 10;
        let labels: Vec<i64> = (0..l).map(|i| site_label(i, l)).collect();
        assert_eq!(labels, vec![0, 1, 2, 3, 4, -5, -4, -3, -2, -1]);
        for i in 0..l {
            assert_eq!(label_site(site_label(i, l), l), i);
        }
        assert_eq!(ring_distance(1, 9, 10), 2);
    }

    #[test]
    fn identity_coin_is_conditional_shift() {
        let sites = 6;
        let rot = Rotations::from_row(CoinRow::Uniform(0.0), sites).unwrap();
        let mut src = vec![ZERO; 2 * sites];
        src[0] = ONE; // up at site 0
        let mut dst = vec![ZERO; 2 * sites];
        step_forward(&src, &mut dst, &rot).unwrap();
        assert_eq!(dst[2 * (sites - 1)], ONE);
        assert_eq!(dst.iter().filter(|a| a.norm() > 0.0).count(), 1);

        let mut src = vec![ZERO; 2 * sites];
        src[1] = ONE; // down at site 0
        step_forward(&src, &mut dst, &rot).unwrap();
        assert_eq!(dst[2 + 1], ONE);
        assert_eq!(dst.iter().filter(|a| a.norm() > 0.0).count(), 1);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let rot = Rotations::from_row(CoinRow::Uniform(0.3), 4).unwrap();
        let src = vec![ZERO; 6];
        let mut dst = vec![ZERO; 8];
        assert!(matches!(
            step_forward(&src, &mut dst, &rot),
            Err(WalkError::DimensionMismatch { expected: 8, found: 6 })
        ));
        let angles = [0.1, 0.2, 0.3];
        assert!(Rotations::from_row(CoinRow::PerSite(&angles), 4).is_err());
    }
}
