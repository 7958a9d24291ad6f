//! Cross-module checks of the quantum path: the split-operator propagator
//! against a dense matrix exponential, phase-estimation success mass, and
//! the amplitude-estimation error law.

use std::sync::Arc;

use approx::assert_relative_eq;
use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use speeduplab::eigensolver::dense_smallest_eigenvalue;
use speeduplab::grid::{GridHamiltonian, GridSpec};
use speeduplab::potential::{PotentialOracle, PotentialSpec};
use speeduplab::qsim::{
    amplitude_estimate_mean, expected_absolute_error, mass_within, phase_estimation,
    BooleanOracle, GridStateVector, OutcomeMode, PhaseEstimationConfig, QueryLedger,
    SplitOperator,
};
use speeduplab::speedup::log_log_slope;

fn hamiltonian(dsl: &str, d: usize, m: usize) -> GridHamiltonian {
    let spec = PotentialSpec::parse(dsl, d).unwrap();
    let oracle = Arc::new(PotentialOracle::new(spec));
    GridHamiltonian::new(GridSpec::new(d, m).unwrap(), oracle).unwrap()
}

fn random_state(grid: &GridSpec, seed: u64) -> GridStateVector {
    let n = grid.num_points();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut amps: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in amps.iter_mut() {
        *a /= norm;
    }
    GridStateVector::from_amplitudes(grid, amps).unwrap()
}

/// Dense `exp(-i H t) psi` through an eigendecomposition, the independent
/// reference for the split-operator path.
fn dense_propagate(h: &GridHamiltonian, psi: &[Complex64], t: f64) -> Vec<Complex64> {
    let dense = h.to_dense().unwrap();
    let n = dense.nrows();
    let eig = SymmetricEigen::new(dense);
    // coeffs = Q^T psi, phased, then back: Q diag(e^{-i l t}) Q^T psi.
    let q = &eig.eigenvectors;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    for (j, c) in coeffs.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            acc += psi[i] * q[(i, j)];
        }
        *c = acc * Complex64::new(0.0, -eig.eigenvalues[j] * t).exp();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in coeffs.iter().enumerate() {
            acc += c * q[(i, j)];
        }
        *o = acc;
    }
    out
}

fn propagation_error(h: &GridHamiltonian, steps: u32, seed: u64) -> f64 {
    let grid = h.grid();
    let t = 2.0 * std::f64::consts::PI * 0.9 / grid.spectral_upper_bound();
    let op = SplitOperator::new(h).unwrap();
    let ledger = QueryLedger::new();
    let mut state = random_state(grid, seed);
    let reference = dense_propagate(h, state.amplitudes(), t);
    op.evolve(&mut state, t, steps, &ledger);
    state
        .amplitudes()
        .iter()
        .zip(&reference)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[test]
fn strang_error_is_second_order_in_the_step() {
    for (d, m) in [(1usize, 3usize), (2, 7), (3, 7)] {
        let h = hamiltonian("sep-sin", d, m);
        let errors: Vec<f64> = [2u32, 4, 8, 16].iter().map(|&k| propagation_error(&h, k, 5)).collect();
        for pair in errors.windows(2) {
            let ratio = pair[0] / pair[1];
            assert!(
                (3.5..=4.5).contains(&ratio),
                "d={d} m={m}: halving ratio {ratio} outside [3.5, 4.5] ({errors:?})"
            );
        }
    }
}

#[test]
fn constant_potential_splitting_is_exact() {
    // T and a constant V commute, so one Strang step equals the dense
    // propagator up to machine precision.
    let h = hamiltonian("const:1.0", 1, 7);
    let err = propagation_error(&h, 1, 9);
    assert!(err < 1e-12, "splitting error {err} for commuting split");
}

#[test]
fn phase_estimation_eigenstate_mass_v0() {
    // V = 0: the initial state is the exact eigenstate, so the two bins
    // adjacent to the true eigenphase carry at least 8/pi^2 of the mass.
    let h = hamiltonian("zero", 2, 7);
    let cfg = PhaseEstimationConfig {
        phase_bits: 8,
        trotter_steps_per_w: 1,
        ..Default::default()
    };
    let ledger = QueryLedger::new();
    let res = phase_estimation(&h, &cfg, &ledger).unwrap();
    let lambda = h.grid().laplacian_mode_energy(&[1, 1]).unwrap();
    let phi = lambda * res.evolution_time / (2.0 * std::f64::consts::PI);
    let dist = res.distribution.unwrap();
    assert!(mass_within(&dist, phi, 1.0) >= 8.0 / std::f64::consts::PI.powi(2));
    assert!((res.lambda_hat - lambda).abs() <= res.bin_width_lambda);
}

#[test]
fn phase_estimation_success_for_builtins() {
    for dsl in ["const:1.0", "sep-sin", "cos-mix:0.8"] {
        for (d, m) in [(1usize, 7usize), (2, 7)] {
            let h = hamiltonian(dsl, d, m);
            let cfg = PhaseEstimationConfig::default();
            let ledger = QueryLedger::new();
            let res = phase_estimation(&h, &cfg, &ledger).unwrap();
            let lambda_true = dense_smallest_eigenvalue(&h).unwrap();
            let phi = lambda_true * res.evolution_time / (2.0 * std::f64::consts::PI);
            let dist = res.distribution.unwrap();
            let mass = mass_within(&dist, phi, 1.0);
            assert!(
                mass >= 0.5,
                "{dsl} d={d} m={m}: success mass {mass} below 1/2"
            );
            assert_eq!(ledger.v_queries(), 255 * 16);
        }
    }
}

#[test]
fn phase_estimation_deep_trotter_d2() {
    // Deeper splitting (64 steps per W) still lands within one bin plus the
    // Trotter bias and keeps the success mass above 1/2.
    let h = hamiltonian("sep-sin", 2, 7);
    let cfg = PhaseEstimationConfig {
        phase_bits: 8,
        trotter_steps_per_w: 64,
        ..Default::default()
    };
    let ledger = QueryLedger::new();
    let res = phase_estimation(&h, &cfg, &ledger).unwrap();
    assert_eq!(ledger.v_queries(), 255 * 64);
    let lambda_true = dense_smallest_eigenvalue(&h).unwrap();
    let phi = lambda_true * res.evolution_time / (2.0 * std::f64::consts::PI);
    let dist = res.distribution.unwrap();
    assert!(mass_within(&dist, phi, 1.0) >= 0.5);
    assert!((res.lambda_hat - lambda_true).abs() <= res.bin_width_lambda + 1e-3);
}

#[test]
fn phase_estimation_query_accounting() {
    let h = hamiltonian("sep-sin", 1, 3);
    for (bits, steps) in [(4u32, 2u32), (6, 8), (8, 16)] {
        let cfg = PhaseEstimationConfig {
            phase_bits: bits,
            trotter_steps_per_w: steps,
            ..Default::default()
        };
        let ledger = QueryLedger::new();
        phase_estimation(&h, &cfg, &ledger).unwrap();
        assert_eq!(ledger.v_queries(), ((1u64 << bits) - 1) * steps as u64);
    }
}

#[test]
fn amplitude_estimation_error_law() {
    // Exact-mode expected error of the mean estimate scales as 1/M for a
    // mean that never sits exactly on the phase grid.
    let oracle = BooleanOracle::first_inputs(8, 64).unwrap(); // mean 1/4
    let ms = [8usize, 16, 32, 64, 128, 256, 512, 1024];
    let mut errors = Vec::new();
    for &m in &ms {
        let ledger = QueryLedger::new();
        let est =
            amplitude_estimate_mean(&oracle, m, &ledger, OutcomeMode::ExactDistribution).unwrap();
        assert_eq!(ledger.f_queries(), m as u64 - 1);
        errors.push(expected_absolute_error(est.distribution.as_ref().unwrap(), 0.25));
    }
    let xs: Vec<f64> = ms.iter().map(|&m| m as f64).collect();
    let slope = log_log_slope(&xs, &errors);
    assert!(
        (-1.25..=-0.75).contains(&slope),
        "slope {slope} outside window ({errors:?})"
    );
}

#[test]
fn parity_sits_exactly_on_the_phase_grid() {
    // Mean 1/2 has eigenphase M/4, a grid point for every power-of-two M:
    // the estimate is exact and the expected error is machine zero.
    let oracle = BooleanOracle::parity(8);
    for m in [8usize, 64, 1024] {
        let ledger = QueryLedger::new();
        let est =
            amplitude_estimate_mean(&oracle, m, &ledger, OutcomeMode::ExactDistribution).unwrap();
        let err = expected_absolute_error(est.distribution.as_ref().unwrap(), 0.5);
        assert!(err <= 1e-12, "M={m}: expected error {err}");
        assert_relative_eq!(est.a_hat, 0.5, epsilon = 1e-12);
    }
}

#[test]
fn quantum_count_beats_classical_bound_at_measured_accuracy() {
    // Smallest power-of-two M whose measured expected error meets eps=0.05,
    // compared against the classical worst-case count 2^(n-1)(1-eps).
    let eps = 0.05;
    let oracle = BooleanOracle::first_inputs(8, 64).unwrap();
    let mut chosen = None;
    for m in [8usize, 16, 32, 64, 128, 256] {
        let ledger = QueryLedger::new();
        let est =
            amplitude_estimate_mean(&oracle, m, &ledger, OutcomeMode::ExactDistribution).unwrap();
        let err = expected_absolute_error(est.distribution.as_ref().unwrap(), 0.25);
        if err <= eps {
            chosen = Some((m, ledger.f_queries()));
            break;
        }
    }
    let (m, queries) = chosen.expect("no M met the target");
    assert!(m <= 64, "needed M={m}");
    for n in 8..=12u32 {
        let classical = speeduplab::speedup::boolean_mean_classical_lb(n, eps).unwrap();
        assert!(
            (queries as f64) < classical,
            "n={n}: {queries} queries vs classical bound {classical}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // Every propagator application preserves the norm.
    #[test]
    fn propagators_preserve_norm(
        seed in any::<u64>(),
        dsl_idx in 0usize..3,
        steps in 1u32..6,
        frac in 0.05f64..0.95,
    ) {
        let dsl = ["const:0.7", "sep-sin", "cos-mix:0.5"][dsl_idx];
        let h = hamiltonian(dsl, 2, 4);
        let op = SplitOperator::new(&h).unwrap();
        let ledger = QueryLedger::new();
        let mut state = random_state(h.grid(), seed);
        let t = frac * 2.0 * std::f64::consts::PI / h.grid().spectral_upper_bound();
        op.evolve(&mut state, t, steps, &ledger);
        prop_assert!((state.norm() - 1.0).abs() < 1e-10);
        prop_assert_eq!(ledger.v_queries(), steps as u64);
    }

    // The estimate decoded from any outcome bin stays in [0, 1] and the
    // distribution normalizes.
    #[test]
    fn amplitude_estimates_are_well_formed(
        n in 2u32..6,
        accept in 0usize..16,
        bits in 2u32..7,
    ) {
        let count = accept.min(1 << n);
        let oracle = BooleanOracle::first_inputs(n, count).unwrap();
        let ledger = QueryLedger::new();
        let est = amplitude_estimate_mean(
            &oracle,
            1usize << bits,
            &ledger,
            OutcomeMode::ExactDistribution,
        ).unwrap();
        prop_assert!((0.0..=1.0).contains(&est.a_hat));
        let dist = est.distribution.unwrap();
        let total: f64 = dist.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }
}
