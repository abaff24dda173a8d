//! Physical behaviour at desk-scale lattice sizes.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

use qwalk_core::analytics::butterfly_velocity;
use qwalk_core::dynamics::{evolve, evolve_ensemble, window_mean};
use qwalk_core::ensemble::{run_realizations, EnsembleSpec};
use qwalk_core::krylov::{gram_matrix, k_complexity_ensemble, krylov_decompose, DEFAULT_RANK_EPSILON};
use qwalk_core::otoc::{linear_fit, otoc_grid, relative_front_extent, Normalization};
use qwalk_core::{Axis, AxisPair, DisorderSpec, InitialSpinor, WalkConfig, WalkerState};

const BASE_SEED: u64 = 12345;
const XX: AxisPair = AxisPair { mu: Axis::X, nu: Axis::X };

fn origin(sites: usize) -> WalkerState {
    WalkerState::localized(sites, 0, InitialSpinor::Symmetric.spinor()).unwrap()
}

fn specs(theta0: f64) -> [DisorderSpec; 3] {
    [DisorderSpec::clean(theta0), DisorderSpec::temporal(theta0, FRAC_PI_2), DisorderSpec::spatial(theta0, FRAC_PI_2)]
}

fn realizations(spec: &DisorderSpec) -> EnsembleSpec {
    let n = if spec.kind == qwalk_core::DisorderKind::Clean { 1 } else { 100 };
    EnsembleSpec::new(n, BASE_SEED).unwrap()
}

/// (mean, stderr) of a per-realization scalar.
fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (m, 0.0);
    }
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

fn separated(hi: (f64, f64), lo: (f64, f64)) -> bool {
    hi.0 - lo.0 > 3.0 * (hi.1 * hi.1 + lo.1 * lo.1).sqrt()
}

#[test]
fn otoc_vanishes_outside_the_light_cone() {
    for theta in [0.0, FRAC_PI_6, FRAC_PI_4] {
        let config = WalkConfig::clean(100, 50, theta).unwrap();
        let grid = otoc_grid(&config, &AxisPair::all(), Normalization::InverseDim).unwrap();
        for p in 0..9 {
            for t in 0..=50usize {
                for label in grid.labels() {
                    if label.unsigned_abs() as usize > t {
                        assert_eq!(grid.value(p, t, label), 0.0, "theta {theta} t={t} l={label}");
                    }
                }
            }
        }
    }
}

#[test]
fn clean_otoc_leaves_the_origin_behind() {
    let config = WalkConfig::clean(100, 50, FRAC_PI_4).unwrap();
    let grid = otoc_grid(&config, &[XX], Normalization::InverseDim).unwrap();
    let peak = (0..=50).map(|t| grid.value(0, t, 0)).fold(0.0, f64::max);
    assert!(peak > 0.0);
    assert!(grid.value(0, 50, 0) / peak < 0.05);
}

#[test]
fn clean_front_speeds() {
    let free = WalkConfig::clean(100, 50, 0.0).unwrap();
    let grid = otoc_grid(&free, &[AxisPair::new(Axis::X, Axis::Z)], Normalization::InverseDim).unwrap();
    assert!((grid.front_velocity(0, 0.1).unwrap().slope().unwrap() - 1.0).abs() < 0.02);

    let config = WalkConfig::clean(100, 50, FRAC_PI_4).unwrap();
    let grid = otoc_grid(&config, &[XX], Normalization::InverseDim).unwrap();
    let slope = grid.front_velocity(0, 0.01).unwrap().slope().unwrap();
    let vb = butterfly_velocity(FRAC_PI_4, 4001).unwrap();
    assert!((slope - vb).abs() < 0.1, "slope {slope} vs {vb}");
    // the lattice front never outruns cos θ by more than the discretization
    assert!(slope < FRAC_PI_4.cos() + 0.02);
}

#[test]
fn clean_complexity_grows_linearly_with_saturating_norms() {
    let config = WalkConfig::clean(200, 60, FRAC_PI_6).unwrap();
    let dec = krylov_decompose(&gram_matrix(&config, Axis::X, 0, 60).unwrap(), DEFAULT_RANK_EPSILON).unwrap();
    let (slope, _, r2) = linear_fit((15..=60).map(|t| (t as f64, dec.complexity[t])));
    assert!((slope - 1.0).abs() < 0.1 && r2 > 0.99, "slope {slope} r2 {r2}");
    assert!(dec.norms.iter().all(|&n| n <= 1.0 + 1e-12));
    assert!(dec.norms[1..].iter().any(|&n| n < 0.999));
    assert!(dec.norms[20..].iter().all(|&n| n > 0.5));
}

#[test]
fn disorder_slows_the_otoc_front() {
    for theta0 in [FRAC_PI_6, FRAC_PI_4] {
        let extents: Vec<(f64, f64)> = specs(theta0)
            .iter()
            .map(|d| {
                let config = WalkConfig::new(100, 50, *d, 0).unwrap();
                let xs = run_realizations(&realizations(d), 1, |_, seed| {
                    let grid = otoc_grid(&config.with_seed(seed), &[XX], Normalization::InverseDim)?;
                    Ok(relative_front_extent(&grid.values[0], 50, 0.1).unwrap_or(0) as f64)
                })
                .unwrap();
                mean_stderr(&xs)
            })
            .collect();
        assert!(separated(extents[0], extents[1]), "clean vs temporal {extents:?}");
        assert!(separated(extents[1], extents[2]), "temporal vs spatial {extents:?}");
    }
}

#[test]
fn disorder_suppresses_complexity() {
    for theta0 in [FRAC_PI_6, FRAC_PI_4] {
        let k: Vec<(f64, f64)> = specs(theta0)
            .iter()
            .map(|d| {
                let config = WalkConfig::new(100, 50, *d, 0).unwrap();
                let e = k_complexity_ensemble(&config, Axis::X, 0, DEFAULT_RANK_EPSILON, &realizations(d), 1).unwrap();
                (e.mean[50], e.stderr[50])
            })
            .collect();
        assert!(separated(k[0], k[1]), "clean vs temporal {k:?}");
        assert!(separated(k[1], k[2]), "temporal vs spatial {k:?}");
        assert!(k[2].0 < 0.9 * 50.0);
    }
}

#[test]
fn clean_ipr_falls_while_spreading() {
    let config = WalkConfig::clean(200, 100, FRAC_PI_4).unwrap();
    let traj = evolve(&config, &origin(200)).unwrap();
    assert!(window_mean(&traj.ipr, 50..=100) < window_mean(&traj.ipr, 0..=10));
}

#[test]
fn disorder_raises_late_ipr() {
    for theta0 in [FRAC_PI_6, FRAC_PI_4] {
        let late: Vec<(f64, f64)> = specs(theta0)
            .iter()
            .map(|d| {
                let config = WalkConfig::new(200, 100, *d, 0).unwrap();
                let xs = run_realizations(&realizations(d), 1, |_, seed| {
                    let traj = evolve(&config.with_seed(seed), &origin(200))?;
                    Ok(window_mean(&traj.ipr, 50..=100))
                })
                .unwrap();
                mean_stderr(&xs)
            })
            .collect();
        assert!(separated(late[1], late[0]), "temporal vs clean {late:?}");
        assert!(separated(late[2], late[1]), "spatial vs temporal {late:?}");
    }
}

#[test]
fn spatial_ipr_saturates() {
    let spec = EnsembleSpec::new(100, BASE_SEED).unwrap();
    let init = origin(200);
    let config = WalkConfig::new(200, 200, DisorderSpec::spatial(FRAC_PI_4, FRAC_PI_2), 0).unwrap();
    let ens = evolve_ensemble(&config, &init, &spec, 1).unwrap();
    let at100 = ens.ipr_mean[100];
    let at200 = ens.ipr_mean[200];
    assert!(((at200 - at100) / at100).abs() < 0.1, "{at100} → {at200}");
}
