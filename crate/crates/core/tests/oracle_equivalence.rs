//! Rank-2 fast paths against dense 2L × 2L matrices.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

use num_complex::Complex64;
use qwalk_core::dynamics::evolve;
use qwalk_core::krylov::gram_matrix;
use qwalk_core::operator::{frobenius_inner, heisenberg_snapshots, initial_local_operator, Direction, Rank2Operator};
use qwalk_core::oracle::{dense_local, DenseOperator, DenseOracle};
use qwalk_core::otoc::{otoc_grid, Normalization};
use qwalk_core::walk::{label_site, ring_distance, Rotations};
use qwalk_core::{Axis, AxisPair, DisorderSpec, InitialSpinor, WalkConfig, WalkerState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn schedules(sites: usize, steps: usize) -> Vec<WalkConfig> {
    [
        DisorderSpec::clean(FRAC_PI_4),
        DisorderSpec::spatial(FRAC_PI_4, FRAC_PI_2),
        DisorderSpec::temporal(FRAC_PI_4, FRAC_PI_2),
    ]
    .into_iter()
    .map(|d| WalkConfig::new(sites, steps, d, 2024).unwrap())
    .collect()
}

fn random_state(sites: usize, rng: &mut ChaCha8Rng) -> WalkerState {
    let amps: Vec<Complex64> = (0..2 * sites).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    WalkerState::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

/// Random orthonormal pair via Gram–Schmidt.
fn random_rank2(sites: usize, rng: &mut ChaCha8Rng) -> Rank2Operator {
    let a = random_state(sites, rng);
    let b = random_state(sites, rng);
    let ov = a.inner(&b);
    let amps: Vec<Complex64> = b.amplitudes().iter().zip(a.amplitudes()).map(|(y, x)| y - ov * x).collect();
    let n = amps.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let b = WalkerState::from_amplitudes(amps.into_iter().map(|v| v / n).collect()).unwrap();
    Rank2Operator::new(a, b).unwrap()
}

#[test]
fn initial_operator_reconstructs_dense_local() {
    for axis in Axis::ALL {
        for site in 0..8 {
            let op = initial_local_operator(axis, site, 8).unwrap();
            let dense = DenseOperator::from_rank2(&op);
            assert!(dense.max_abs_diff(&dense_local(axis, site, 8)) < 1e-14, "{axis} at {site}");
        }
    }
}

#[test]
fn heisenberg_snapshots_match_dense_conjugation() {
    for config in schedules(12, 10) {
        let oracle = DenseOracle::new(&config).unwrap();
        let schedule = config.schedule().unwrap();
        for axis in Axis::ALL {
            let op = initial_local_operator(axis, 0, 12).unwrap();
            let fast = heisenberg_snapshots(&op, &schedule, 10).unwrap();
            let dense = oracle.heisenberg(&dense_local(axis, 0, 12), 10);
            for (t, (f, d)) in fast.iter().zip(&dense).enumerate() {
                let err = DenseOperator::from_rank2(f).max_abs_diff(d);
                assert!(err < 1e-10, "{:?} {axis} t={t}: {err:e}", config.disorder.kind);
                assert!(d.hermiticity_error() < 1e-12);
            }
        }
    }
}

#[test]
fn forward_conjugation_matches_dense() {
    for config in schedules(12, 10) {
        let oracle = DenseOracle::new(&config).unwrap();
        let schedule = config.schedule().unwrap();
        let props = oracle.propagators(10);
        let mut op = initial_local_operator(Axis::Y, 3, 12).unwrap();
        let v = dense_local(Axis::Y, 3, 12);
        for t in 0..10 {
            op = op.conjugate_with(&schedule.rotations(t, 12).unwrap(), Direction::Forward).unwrap();
            let expected = props[t + 1].matmul(&v).matmul(&props[t + 1].adjoint());
            assert!(DenseOperator::from_rank2(&op).max_abs_diff(&expected) < 1e-10);
        }
    }
}

#[test]
fn frobenius_inner_matches_dense_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let a = random_rank2(10, &mut rng);
        let b = random_rank2(10, &mut rng);
        let fast = frobenius_inner(&a, &b, 20).unwrap();
        let dense = DenseOperator::from_rank2(&a).hs_inner(&DenseOperator::from_rank2(&b));
        assert!(dense.im.abs() < 1e-12);
        assert!((fast - dense.re / 20.0).abs() < 1e-12);
        assert!((frobenius_inner(&a, &a, 20).unwrap() - 0.1).abs() < 1e-12);
    }
}

#[test]
fn otoc_grid_matches_dense_for_all_pairs() {
    let pairs = AxisPair::all();
    for config in schedules(12, 10) {
        let oracle = DenseOracle::new(&config).unwrap();
        let fast = otoc_grid(&config, &pairs, Normalization::InverseDim).unwrap();
        for (p, &pair) in pairs.iter().enumerate() {
            let dense = oracle.dense_commutator_otoc(pair, Normalization::InverseDim, 10);
            for t in 0..=10 {
                for x in 0..12 {
                    let label = qwalk_core::walk::site_label(x, 12);
                    let err = (fast.value(p, t, label) - dense[t][x]).abs();
                    assert!(err < 1e-10, "{:?} {pair} t={t} l={label}: {err:e}", config.disorder.kind);
                }
            }
        }
    }
}

#[test]
fn gram_matrix_matches_dense_traces() {
    for config in schedules(12, 10) {
        let oracle = DenseOracle::new(&config).unwrap();
        for axis in Axis::ALL {
            let fast = gram_matrix(&config, axis, 0, 10).unwrap();
            let dense = oracle.dense_gram(axis, 0, 10);
            assert!(fast.max_abs_diff(&dense) < 1e-10);
        }
    }
}

#[test]
fn clean_neighbour_overlap_vanishes_in_dense_oracle() {
    for theta in [FRAC_PI_6, FRAC_PI_4, 1.0] {
        let config = WalkConfig::clean(16, 6, theta).unwrap();
        let g = DenseOracle::new(&config).unwrap().dense_gram(Axis::X, 0, 6);
        assert!(g[0][1].abs() < 1e-14);
    }
}

#[test]
fn state_evolution_matches_dense_at_l16() {
    let init = WalkerState::localized(16, 0, InitialSpinor::Symmetric.spinor()).unwrap();
    for config in schedules(16, 8) {
        let traj = evolve(&config, &init).unwrap();
        let dense = DenseOracle::new(&config).unwrap().dense_evolve(init.amplitudes(), 8);
        for t in 0..=8 {
            for x in 0..16 {
                let p = dense[t][2 * x].norm_sqr() + dense[t][2 * x + 1].norm_sqr();
                assert!((traj.rows[t][x] - p).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn clean_quarter_angle_spreads_inside_cone_with_two_peaks() {
    let sites = 100;
    let steps = 40;
    let config = WalkConfig::clean(sites, steps, FRAC_PI_4).unwrap();
    let init = WalkerState::localized(sites, 0, InitialSpinor::Symmetric.spinor()).unwrap();
    let traj = evolve(&config, &init).unwrap();
    let last = &traj.rows[steps];
    for x in 0..sites {
        if ring_distance(x, 0, sites) > steps {
            assert_eq!(last[x], 0.0);
        }
    }
    // ballistic peaks sit near ±t·cos θ, well away from the origin
    let right = (0..=steps as i64).max_by(|&a, &b| last[label_site(a, sites)].total_cmp(&last[label_site(b, sites)])).unwrap();
    let left = (0..=steps as i64).max_by(|&a, &b| last[label_site(-a, sites)].total_cmp(&last[label_site(-b, sites)])).unwrap();
    for peak in [right, left] {
        assert!(peak as f64 > 0.5 * steps as f64 && peak as f64 <= 0.8 * steps as f64, "peak at {peak}");
    }
}

#[test]
fn oracle_refuses_large_lattice() {
    let config = WalkConfig::clean(34, 4, 0.2).unwrap();
    assert!(DenseOracle::new(&config).is_err());
}

#[test]
fn per_site_rotation_dimension_is_checked() {
    let angles = vec![0.2; 5];
    assert!(Rotations::from_row(qwalk_core::walk::CoinRow::PerSite(&angles), 6).is_err());
}

fn frob(a: &DenseOperator, b: &DenseOperator) -> f64 {
    a.hs_inner(b).re / a.dim() as f64
}

fn axpy(y: &mut DenseOperator, alpha: f64, x: &DenseOperator) {
    for i in 0..y.dim() {
        for j in 0..y.dim() {
            y.set(i, j, y.get(i, j) + x.get(i, j) * alpha);
        }
    }
}

/// Gram–Schmidt directly on dense snapshot matrices, reorthogonalized twice.
fn dense_krylov_amplitudes(snaps: &[DenseOperator]) -> Vec<Vec<f64>> {
    let norm0 = frob(&snaps[0], &snaps[0]).sqrt();
    let unit: Vec<DenseOperator> = snaps
        .iter()
        .map(|s| {
            let mut u = DenseOperator::zeros(s.dim());
            axpy(&mut u, 1.0 / norm0, s);
            u
        })
        .collect();
    let mut basis: Vec<DenseOperator> = Vec::new();
    for s in &unit {
        let mut a = s.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = frob(b, &a);
                axpy(&mut a, -c, b);
            }
        }
        let n = frob(&a, &a).sqrt();
        if n * n < 1e-12 {
            break;
        }
        let mut e = DenseOperator::zeros(a.dim());
        axpy(&mut e, 1.0 / n, &a);
        basis.push(e);
    }
    basis.iter().map(|b| unit.iter().map(|u| frob(b, u)).collect()).collect()
}

#[test]
fn krylov_amplitudes_match_dense_gram_schmidt() {
    use qwalk_core::krylov::{krylov_decompose, DEFAULT_RANK_EPSILON};
    for config in schedules(12, 10) {
        let oracle = DenseOracle::new(&config).unwrap();
        for axis in Axis::ALL {
            let snaps = oracle.heisenberg(&dense_local(axis, 0, 12), 10);
            let expected = dense_krylov_amplitudes(&snaps);
            let dec = krylov_decompose(&gram_matrix(&config, axis, 0, 10).unwrap(), DEFAULT_RANK_EPSILON).unwrap();
            assert_eq!(dec.rank, expected.len(), "{:?} {axis}", config.disorder.kind);
            for (n, row) in expected.iter().enumerate() {
                for (t, &v) in row.iter().enumerate() {
                    let err = (dec.amplitudes[n][t] - v).abs();
                    assert!(err < 1e-9, "{:?} {axis} n={n} t={t}: {err:e}", config.disorder.kind);
                }
            }
        }
    }
}
