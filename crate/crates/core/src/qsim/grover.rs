//! Grover iteration and amplitude estimation for Boolean means.
//!
//! A Boolean oracle over `n` bits is simulated in the `2^(n+1)`-dimensional
//! preparation space: `n` input qubits prepared uniformly plus one query
//! ancilla prepared in the `|-⟩` state, so one bit-flip oracle application
//! realizes the sign flip on accepting inputs and costs exactly one
//! `f` query. The Grover operator composes that flip with the reflection
//! about the prepared state and rotates the good-state amplitude by
//! `2 theta` per iterate, `sin^2 theta = mean(f)`.
//!
//! Amplitude estimation runs phase estimation over the Grover operator with
//! `M` outcomes and reads the mean back as `sin^2(pi k / M)`. The `2^j`
//! ladder costs `M - 1` oracle queries in total.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

use super::phase::{argmax, sample_median};
use super::{OutcomeMode, QueryLedger, SIM_AMPLITUDE_CAP};

/// Deterministic Boolean function given by a truth table over `2^n` inputs.
#[derive(Debug, Clone)]
pub struct BooleanOracle {
    n: u32,
    table: Vec<bool>,
}

impl BooleanOracle {
    pub fn from_table(table: Vec<bool>) -> Result<Self> {
        let len = table.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::invalid(
                "truth table",
                format!("length {len} is not a power of two >= 2"),
            ));
        }
        Ok(BooleanOracle {
            n: len.trailing_zeros(),
            table,
        })
    }

    pub fn constant(n: u32, value: bool) -> Self {
        BooleanOracle {
            n,
            table: vec![value; 1 << n],
        }
    }

    /// Odd-parity indicator; mean exactly 1/2.
    pub fn parity(n: u32) -> Self {
        BooleanOracle {
            n,
            table: (0..1usize << n).map(|x| x.count_ones() % 2 == 1).collect(),
        }
    }

    /// Strict majority of set bits.
    pub fn majority(n: u32) -> Self {
        BooleanOracle {
            n,
            table: (0..1usize << n).map(|x| 2 * x.count_ones() > n).collect(),
        }
    }

    /// Accepts the first `count` inputs; mean exactly `count / 2^n`.
    pub fn first_inputs(n: u32, count: usize) -> Result<Self> {
        if count > 1usize << n {
            return Err(Error::invalid(
                "count",
                format!("{count} exceeds 2^{n} inputs"),
            ));
        }
        Ok(BooleanOracle {
            n,
            table: (0..1usize << n).map(|x| x < count).collect(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn evaluate(&self, x: usize) -> bool {
        self.table[x]
    }

    pub fn mean(&self) -> f64 {
        self.table.iter().filter(|&&b| b).count() as f64 / self.table.len() as f64
    }
}

#[derive(Debug, Clone)]
enum Marking {
    /// `U_f |x⟩|b⟩ = |x⟩|b xor f(x)⟩` on the space `anc * 2^n + x`.
    BitFlipAncilla { n: u32, table: Vec<bool> },
    /// Sign flip on the good basis states (phase-oracle convention, used by
    /// weighted preparations where the good set is written directly).
    PhaseFlip,
}

/// The Grover operator `Q = R_prep * S_f` on an explicit simulation space.
#[derive(Debug, Clone)]
pub struct GroverSim {
    prep: Vec<Complex64>,
    good: Vec<bool>,
    marking: Marking,
}

impl GroverSim {
    /// Standard mean-estimation setup for a Boolean oracle: uniform
    /// preparation on the input register, `|-⟩` on the query ancilla.
    pub fn for_boolean(oracle: &BooleanOracle) -> Self {
        let n = oracle.n;
        let half = 1usize << n;
        let amp = 1.0 / ((half as f64).sqrt() * 2.0f64.sqrt());
        let mut prep = vec![Complex64::new(amp, 0.0); 2 * half];
        for a in prep.iter_mut().skip(half) {
            *a = -*a;
        }
        let mut good = vec![false; 2 * half];
        for x in 0..half {
            if oracle.table[x] {
                good[x] = true;
                good[half + x] = true;
            }
        }
        GroverSim {
            prep,
            good,
            marking: Marking::BitFlipAncilla {
                n,
                table: oracle.table.clone(),
            },
        }
    }

    /// Weighted preparation: arbitrary unit state and good set. The good
    /// amplitude `a = sum_{good} |prep|^2` is what estimation recovers.
    pub fn from_weighted(prep: Vec<Complex64>, good: Vec<bool>) -> Result<Self> {
        if prep.len() != good.len() {
            return Err(Error::DimensionMismatch {
                expected: prep.len(),
                actual: good.len(),
            });
        }
        if prep.is_empty() {
            return Err(Error::invalid("prep", "empty preparation"));
        }
        let norm: f64 = prep.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::invalid(
                "prep",
                format!("preparation norm^2 = {norm} is not 1"),
            ));
        }
        Ok(GroverSim {
            prep,
            good,
            marking: Marking::PhaseFlip,
        })
    }

    pub fn dim(&self) -> usize {
        self.prep.len()
    }

    pub fn initial_state(&self) -> Vec<Complex64> {
        self.prep.clone()
    }

    /// True good-state probability of the prepared state.
    pub fn prepared_amplitude(&self) -> f64 {
        self.good_probability(&self.prep)
    }

    pub fn good_probability(&self, state: &[Complex64]) -> f64 {
        state
            .iter()
            .zip(&self.good)
            .filter(|(_, &g)| g)
            .map(|(a, _)| a.norm_sqr())
            .sum()
    }

    fn mark(&self, state: &mut [Complex64]) {
        match &self.marking {
            Marking::BitFlipAncilla { n, table } => {
                let half = 1usize << n;
                for (x, &accept) in table.iter().enumerate() {
                    if accept {
                        state.swap(x, half + x);
                    }
                }
            }
            Marking::PhaseFlip => {
                for (a, &g) in state.iter_mut().zip(&self.good) {
                    if g {
                        *a = -*a;
                    }
                }
            }
        }
    }

    fn reflect_about_prep(&self, state: &mut [Complex64]) {
        let overlap: Complex64 = self
            .prep
            .iter()
            .zip(state.iter())
            .map(|(p, s)| p.conj() * s)
            .sum();
        let two_overlap = overlap * 2.0;
        for (s, p) in state.iter_mut().zip(&self.prep) {
            *s = p * two_overlap - *s;
        }
    }
}

/// One Grover iterate: oracle marking (one `f` query), then reflection about
/// the prepared state.
pub fn grover_iterate(state: &mut [Complex64], sim: &GroverSim, ledger: &QueryLedger) {
    debug_assert_eq!(state.len(), sim.dim());
    sim.mark(state);
    ledger.add_f_queries(1);
    sim.reflect_about_prep(state);
}

#[derive(Debug, Clone)]
pub struct AmplitudeEstimate {
    /// `sin^2(pi outcome / M)`.
    pub a_hat: f64,
    pub outcome: usize,
    /// Full outcome distribution; present in exact-distribution mode.
    pub distribution: Option<Vec<f64>>,
    pub m_outcomes: usize,
}

/// Phase estimation over the Grover operator with `M` outcomes; consumes
/// exactly `M - 1` `f` queries.
pub fn amplitude_estimate_weighted(
    sim: &GroverSim,
    m_outcomes: usize,
    ledger: &QueryLedger,
    mode: OutcomeMode,
) -> Result<AmplitudeEstimate> {
    if m_outcomes < 2 || !m_outcomes.is_power_of_two() {
        return Err(Error::invalid(
            "M",
            format!("{m_outcomes} is not a power of two >= 2"),
        ));
    }
    let dim = sim.dim();
    let total = (m_outcomes as u128) * (dim as u128);
    if total > SIM_AMPLITUDE_CAP as u128 {
        return Err(Error::CapacityExceeded {
            requested: total,
            cap: SIM_AMPLITUDE_CAP,
        });
    }

    // Slice x of the joint state carries Q^x applied to the preparation.
    let scale = 1.0 / (m_outcomes as f64).sqrt();
    let mut joint = vec![Complex64::new(0.0, 0.0); m_outcomes * dim];
    let mut current = sim.initial_state();
    for x in 0..m_outcomes {
        for (slot, amp) in joint[x * dim..(x + 1) * dim].iter_mut().zip(&current) {
            *slot = amp * scale;
        }
        if x + 1 < m_outcomes {
            grover_iterate(&mut current, sim, ledger);
        }
    }

    // Fourier transform over the slice index, one grid column at a time.
    let fft = FftPlanner::<f64>::new().plan_fft_inverse(m_outcomes);
    let fft_scale = 1.0 / (m_outcomes as f64).sqrt();
    let mut column = vec![Complex64::new(0.0, 0.0); m_outcomes];
    let mut distribution = vec![0.0f64; m_outcomes];
    for g in 0..dim {
        for x in 0..m_outcomes {
            column[x] = joint[x * dim + g];
        }
        fft.process(&mut column);
        for (x, c) in column.iter().enumerate() {
            distribution[x] += (c * fft_scale).norm_sqr();
        }
    }
    debug_assert!((distribution.iter().sum::<f64>() - 1.0).abs() < 1e-9);

    let outcome = match mode {
        OutcomeMode::ExactDistribution => argmax(&distribution),
        OutcomeMode::Sampled { seed, repetitions } => {
            sample_median(&distribution, seed, repetitions.max(1))
        }
    };
    let a_hat = (std::f64::consts::PI * outcome as f64 / m_outcomes as f64)
        .sin()
        .powi(2);
    Ok(AmplitudeEstimate {
        a_hat,
        outcome,
        distribution: match mode {
            OutcomeMode::ExactDistribution => Some(distribution),
            OutcomeMode::Sampled { .. } => None,
        },
        m_outcomes,
    })
}

/// Mean of a Boolean function via amplitude estimation.
pub fn amplitude_estimate_mean(
    oracle: &BooleanOracle,
    m_outcomes: usize,
    ledger: &QueryLedger,
    mode: OutcomeMode,
) -> Result<AmplitudeEstimate> {
    amplitude_estimate_weighted(&GroverSim::for_boolean(oracle), m_outcomes, ledger, mode)
}

/// Exact-mode expected error `E |sin^2(pi y / M) - a|` of an estimate
/// distribution against the true amplitude.
pub fn expected_absolute_error(distribution: &[f64], a_true: f64) -> f64 {
    let m = distribution.len() as f64;
    distribution
        .iter()
        .enumerate()
        .map(|(y, p)| {
            let a_hat = (std::f64::consts::PI * y as f64 / m).sin().powi(2);
            p * (a_hat - a_true).abs()
        })
        .sum()
}
