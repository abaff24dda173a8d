//! Continuum-limit dispersion, group velocity, butterfly velocity and
//! localization length for the one-parameter coin.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};

fn radicand(k: f64, theta: f64) -> f64 {
    let c = theta.cos();
    k * k * c + 2.0 * (1.0 - c)
}

/// Positive branch of ω(k, θ) = √(k² cos θ + 2(1 − cos θ)).
pub fn dispersion(k: f64, theta: f64) -> Result<f64> {
    let r = radicand(k, theta);
    if !(r >= 0.0) {
        return Err(WalkError::Domain { k, theta, radicand: r });
    }
    Ok(r.sqrt())
}

/// dω/dk = k cos θ / ω on the positive branch.
///
/// The removable singularity at (k, θ) = (0, 0) returns +1, the limit along θ = 0.
pub fn group_velocity(k: f64, theta: f64) -> Result<f64> {
    let r = radicand(k, theta);
    if !(r >= 0.0) {
        return Err(WalkError::Domain { k, theta, radicand: r });
    }
    if r == 0.0 {
        if theta.cos() == 1.0 {
            return Ok(1.0);
        }
        return Err(WalkError::Domain { k, theta, radicand: r });
    }
    Ok(k * theta.cos() / r.sqrt())
}

/// `max_k |v_g(k, θ)|` over `k_points` evenly spaced wavenumbers on [−π, π].
pub fn butterfly_velocity(theta: f64, k_points: usize) -> Result<f64> {
    if k_points < 64 {
        return Err(WalkError::invalid("k_points", format!("need at least 64 grid points, got {k_points}")));
    }
    k_grid(k_points).try_fold(0.0_f64, |best, k| Ok(best.max(group_velocity(k, theta)?.abs())))
}

/// Evenly spaced wavenumbers on [−π, π], endpoints included.
pub fn k_grid(points: usize) -> impl Iterator<Item = f64> {
    let step = 2.0 * PI / (points.max(2) - 1) as f64;
    (0..points).map(move |i| if i + 1 == points { PI } else { -PI + step * i as f64 })
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocalizationLength {
    Finite(f64),
    /// θ = 0: the clean identity-coin walk never localizes.
    Unbounded,
}

impl LocalizationLength {
    pub fn value(self) -> f64 {
        match self {
            LocalizationLength::Finite(v) => v,
            LocalizationLength::Unbounded => f64::INFINITY,
        }
    }
}

/// ζ(θ) = 1/|ln cos θ| for θ ∈ [0, π/2].
pub fn localization_length(theta: f64) -> Result<LocalizationLength> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(WalkError::invalid("theta", format!("localization length needs theta in [0, pi/2], got {theta}")));
    }
    let log_cos = theta.cos().ln();
    if log_cos == 0.0 {
        return Ok(LocalizationLength::Unbounded);
    }
    // ln(cos(π/2)) is about −37.4 in floating point, not −∞
    if theta == FRAC_PI_2 {
        return Ok(LocalizationLength::Finite(0.0));
    }
    Ok(LocalizationLength::Finite(1.0 / log_cos.abs()))
}
