//! State-vector simulation of the quantum path: phase estimation over a
//! split-operator propagator of the grid Hamiltonian, and amplitude
//! estimation over a Grover operator for Boolean means.
//!
//! Query costs follow the quantum circuit model: one application of the
//! potential phase touches every grid point in superposition and counts as a
//! single `v` query; a controlled power `W^(2^j)` of the propagator costs
//! `2^j` times the Trotter steps per `W`. The simulators are exact at desk
//! scale, so outcome distributions can be read off instead of sampled.

mod dst;
mod grover;
mod phase;
mod propagator;

pub use dst::{dst_apply, DstPlan};
pub use grover::{
    amplitude_estimate_mean, amplitude_estimate_weighted, expected_absolute_error, grover_iterate,
    AmplitudeEstimate, BooleanOracle, GroverSim,
};
pub use phase::{
    mass_within, phase_estimation, PhaseEstimationConfig, PhaseEstimationResult, StateVector,
};
pub use propagator::{GridStateVector, SplitOperator};

use std::sync::atomic::{AtomicU64, Ordering};

/// Cap on the total amplitude count of a joint register simulation.
pub const SIM_AMPLITUDE_CAP: u64 = 1 << 22;

/// Monotone query counters. `v_queries` counts potential-phase oracle
/// applications (weighted by controlled repetitions), `f_queries` counts
/// Boolean-oracle applications. Increments are atomic.
#[derive(Debug, Default)]
pub struct QueryLedger {
    v_queries: AtomicU64,
    f_queries: AtomicU64,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_v_queries(&self, n: u64) {
        self.v_queries.fetch_add(n, Ordering::Relaxed);
    }

    pub fn add_f_queries(&self, n: u64) {
        self.f_queries.fetch_add(n, Ordering::Relaxed);
    }

    pub fn v_queries(&self) -> u64 {
        self.v_queries.load(Ordering::Relaxed)
    }

    pub fn f_queries(&self) -> u64 {
        self.f_queries.load(Ordering::Relaxed)
    }
}

/// How measurement outcomes are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeMode {
    /// Read the full outcome distribution off the simulated state; the
    /// reported outcome is the most probable bin.
    ExactDistribution,
    /// Draw outcomes from the exact distribution with a seeded generator and
    /// report the median of `repetitions` draws.
    Sampled { seed: u64, repetitions: u32 },
}

/// Total qubit count of the ground-energy simulation: `d * ceil(log2(m+1))`
/// grid qubits plus `b` phase qubits.
pub fn report_qubits(d: usize, m: usize, phase_bits: u32) -> u32 {
    let grid_bits = u64::BITS - (m as u64).leading_zeros();
    d as u32 * grid_bits + phase_bits
}
