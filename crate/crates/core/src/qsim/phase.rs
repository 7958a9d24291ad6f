//! Phase estimation over the split-operator propagator.
//!
//! With the phase register prepared in the uniform superposition, the
//! controlled-`W^(2^j)` ladder leaves phase-basis slice `x` carrying
//! `W^x` applied to the grid register. The slices are built incrementally
//! (`W` applied once per slice), which reproduces the ladder state exactly:
//! either way slice `x` is the same left-to-right composition of `x` copies
//! of `W`. The ledger is charged with the circuit cost, `(2^b - 1)` times
//! the Trotter steps per `W`.
//!
//! Reading the phase register after the Fourier transform yields an outcome
//! `y` whose phase `y / 2^b` estimates `lambda t / (2 pi)`, so the
//! eigenvalue estimate is `2 pi phi / t`.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::GridHamiltonian;

use super::propagator::{GridStateVector, SplitOperator};
use super::{report_qubits, OutcomeMode, QueryLedger, SIM_AMPLITUDE_CAP};

#[derive(Debug, Clone, Copy)]
pub struct PhaseEstimationConfig {
    pub phase_bits: u32,
    pub trotter_steps_per_w: u32,
    /// Evolution time per `W`; `None` selects `0.9 * 2 pi / Lambda_max` with
    /// the certified spectral bound `Lambda_max = kappa 4d/h^2 + 1`, keeping
    /// every admissible eigenphase inside `(0, 0.9)`.
    pub evolution_time: Option<f64>,
    pub mode: OutcomeMode,
}

impl Default for PhaseEstimationConfig {
    fn default() -> Self {
        PhaseEstimationConfig {
            phase_bits: 8,
            trotter_steps_per_w: 16,
            evolution_time: None,
            mode: OutcomeMode::ExactDistribution,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PhaseEstimationResult {
    /// `2 pi (outcome / 2^b) / t`.
    pub lambda_hat: f64,
    pub outcome: usize,
    /// Full outcome distribution; present in exact-distribution mode.
    pub distribution: Option<Vec<f64>>,
    pub evolution_time: f64,
    pub phase_bits: u32,
    /// Eigenvalue width of one phase bin, `2 pi / (t 2^b)`.
    pub bin_width_lambda: f64,
    pub qubits: u32,
}

/// Joint state over grid register tensor phase register, stored phase-major:
/// amplitude index = `x * num_grid_points + g`.
#[derive(Debug, Clone)]
pub struct StateVector {
    amps: Vec<Complex64>,
    grid_points: usize,
    phase_outcomes: usize,
}

impl StateVector {
    fn from_slices(slices: Vec<GridStateVector>, grid_points: usize) -> Self {
        let phase_outcomes = slices.len();
        let mut amps = Vec::with_capacity(grid_points * phase_outcomes);
        for s in &slices {
            amps.extend_from_slice(s.amplitudes());
        }
        StateVector {
            amps,
            grid_points,
            phase_outcomes,
        }
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Fourier transform on the phase register with kernel
    /// `exp(+2 pi i x y / M) / sqrt(M)` (the inverse of the transform that
    /// loaded the phases), column by column over grid indices.
    fn inverse_qft_phase_register(&mut self) {
        let m_out = self.phase_outcomes;
        let n = self.grid_points;
        let fft = FftPlanner::<f64>::new().plan_fft_inverse(m_out);
        let scale = 1.0 / (m_out as f64).sqrt();
        let mut column = vec![Complex64::new(0.0, 0.0); m_out];
        for g in 0..n {
            for (x, slot) in column.iter_mut().enumerate() {
                *slot = self.amps[x * n + g];
            }
            fft.process(&mut column);
            for (x, value) in column.iter().enumerate() {
                self.amps[x * n + g] = value * scale;
            }
        }
    }

    /// Marginal probability of each phase outcome.
    pub fn outcome_distribution(&self) -> Vec<f64> {
        let n = self.grid_points;
        (0..self.phase_outcomes)
            .map(|y| self.amps[y * n..(y + 1) * n].iter().map(|a| a.norm_sqr()).sum())
            .collect()
    }
}

pub fn phase_estimation(
    h: &GridHamiltonian,
    cfg: &PhaseEstimationConfig,
    ledger: &QueryLedger,
) -> Result<PhaseEstimationResult> {
    if cfg.phase_bits == 0 || cfg.phase_bits > 24 {
        return Err(Error::invalid("phase_bits", "must be in [1, 24]"));
    }
    if cfg.trotter_steps_per_w == 0 {
        return Err(Error::invalid("trotter_steps_per_w", "must be at least 1"));
    }
    let grid = h.grid();
    let lambda_max = grid.spectral_upper_bound();
    let t = cfg
        .evolution_time
        .unwrap_or(2.0 * std::f64::consts::PI * 0.9 / lambda_max);
    if !(t > 0.0) || t * lambda_max >= 2.0 * std::f64::consts::PI {
        return Err(Error::invalid(
            "evolution_time",
            format!("t = {t} violates t * Lambda_max < 2 pi (Lambda_max = {lambda_max})"),
        ));
    }
    let m_outcomes = 1usize << cfg.phase_bits;
    let n = grid.num_points();
    let total = (m_outcomes as u128) * (n as u128);
    if total > SIM_AMPLITUDE_CAP as u128 {
        return Err(Error::CapacityExceeded {
            requested: total,
            cap: SIM_AMPLITUDE_CAP,
        });
    }

    let op = SplitOperator::new(h)?;
    let scale = Complex64::new(1.0 / (m_outcomes as f64).sqrt(), 0.0);
    let mut slices = Vec::with_capacity(m_outcomes);
    let mut current = GridStateVector::ground_mode(grid);
    for x in 0..m_outcomes {
        let scaled: Vec<Complex64> = current.amplitudes().iter().map(|a| a * scale).collect();
        slices.push(GridStateVector::from_amplitudes(grid, scaled)?);
        if x + 1 < m_outcomes {
            op.evolve(&mut current, t, cfg.trotter_steps_per_w, ledger);
        }
    }

    let mut state = StateVector::from_slices(slices, n);
    debug_assert!((state.norm() - 1.0).abs() < 1e-10);
    state.inverse_qft_phase_register();
    debug_assert!((state.norm() - 1.0).abs() < 1e-10);
    let distribution = state.outcome_distribution();

    let outcome = match cfg.mode {
        OutcomeMode::ExactDistribution => argmax(&distribution),
        OutcomeMode::Sampled { seed, repetitions } => {
            sample_median(&distribution, seed, repetitions.max(1))
        }
    };
    let phi = outcome as f64 / m_outcomes as f64;
    Ok(PhaseEstimationResult {
        lambda_hat: 2.0 * std::f64::consts::PI * phi / t,
        outcome,
        distribution: match cfg.mode {
            OutcomeMode::ExactDistribution => Some(distribution),
            OutcomeMode::Sampled { .. } => None,
        },
        evolution_time: t,
        phase_bits: cfg.phase_bits,
        bin_width_lambda: 2.0 * std::f64::consts::PI / (t * m_outcomes as f64),
        qubits: report_qubits(grid.dim(), grid.points_per_dim(), cfg.phase_bits),
    })
}

/// Probability mass within `window` bins of the true phase `phi` (circular).
pub fn mass_within(distribution: &[f64], phi: f64, window: f64) -> f64 {
    let m = distribution.len() as f64;
    let center = phi * m;
    distribution
        .iter()
        .enumerate()
        .filter(|(y, _)| {
            let raw = (*y as f64 - center).abs();
            raw.min(m - raw) <= window
        })
        .map(|(_, p)| p)
        .sum()
}

pub(super) fn argmax(dist: &[f64]) -> usize {
    let mut best = 0usize;
    for (i, &p) in dist.iter().enumerate() {
        if p > dist[best] {
            best = i;
        }
    }
    best
}

pub(super) fn sample_median(dist: &[f64], seed: u64, repetitions: u32) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws: Vec<usize> = (0..repetitions)
        .map(|_| {
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            for (i, &p) in dist.iter().enumerate() {
                acc += p;
                if u < acc {
                    return i;
                }
            }
            dist.len() - 1
        })
        .collect();
    draws.sort_unstable();
    draws[draws.len() / 2]
}
