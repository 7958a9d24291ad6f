//! Complexity formulas, speedup ratios, and the integration demonstrations
//! that make oracle-call growth measurable.
//!
//! Closed forms are evaluated in log space first so reports stay total for
//! extreme parameters; linear values are exponentiated from the logs and may
//! round to infinity where f64 runs out.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{
    amplitude_estimate_weighted, AmplitudeEstimate, GroverSim, OutcomeMode, QueryLedger,
};

/// Cap on product-rule evaluation counts.
pub const INTEGRATION_CALL_CAP: u64 = 1 << 24;

/// Parameters of the cost model: the lower-bound constant `c > 1`, the
/// quantum exponent slack `delta > 0`, dimension and accuracy.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ComplexityModel {
    pub c: f64,
    pub delta: f64,
    pub d: u32,
    pub eps: f64,
}

impl ComplexityModel {
    pub fn new(c: f64, delta: f64, d: u32, eps: f64) -> Result<Self> {
        if !(c > 1.0) || !c.is_finite() {
            return Err(Error::invalid("c", format!("{c} must be > 1")));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::invalid("delta", format!("{delta} must be > 0")));
        }
        if d < 1 {
            return Err(Error::invalid("d", "must be at least 1"));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::invalid("eps", format!("{eps} outside (0, 1)")));
        }
        Ok(ComplexityModel { c, delta, d, eps })
    }

    /// The closed forms are stated for the regime `d * eps -> 0`; outside it
    /// they are still evaluated verbatim, flagged by this returning false.
    pub fn regime_ok(&self) -> bool {
        self.d as f64 * self.eps < 1.0
    }

    /// `ln (c d eps)^-d = -d ln(c d eps)`.
    pub fn ln_classical_lb(&self) -> f64 {
        let d = self.d as f64;
        -d * (self.c * d * self.eps).ln()
    }

    /// Worst-case classical oracle lower bound `(c d eps)^-d`.
    pub fn classical_lb(&self) -> f64 {
        self.ln_classical_lb().exp()
    }

    /// `ln (d eps)^-1/2`.
    pub fn ln_quantum_lb(&self) -> f64 {
        -0.5 * (self.d as f64 * self.eps).ln()
    }

    /// `ln d eps^-(3+delta)`.
    pub fn ln_quantum_ub(&self) -> f64 {
        (self.d as f64).ln() - (3.0 + self.delta) * self.eps.ln()
    }

    /// Quantum complexity bounds `((d eps)^-1/2, d eps^-(3+delta))`.
    pub fn quantum_bounds(&self) -> (f64, f64) {
        (self.ln_quantum_lb().exp(), self.ln_quantum_ub().exp())
    }

    /// Strong-speedup range: lower ratio against the quantum upper bound,
    /// upper ratio against the quantum lower bound.
    pub fn s2_range(&self) -> (f64, f64) {
        let ln_c = self.ln_classical_lb();
        (
            (ln_c - self.ln_quantum_ub()).exp(),
            (ln_c - self.ln_quantum_lb()).exp(),
        )
    }

    /// Full evaluated report.
    pub fn report(&self) -> SpeedupReport {
        let (quantum_lb, quantum_ub) = self.quantum_bounds();
        let (s2_lower, s2_upper) = self.s2_range();
        SpeedupReport {
            model: *self,
            classical_lb: self.classical_lb(),
            quantum_lb,
            quantum_ub,
            s2_lower,
            s2_upper,
            log10_classical_lb: self.ln_classical_lb() / std::f64::consts::LN_10,
            log10_s2_lower: (self.ln_classical_lb() - self.ln_quantum_ub())
                / std::f64::consts::LN_10,
            log10_s2_upper: (self.ln_classical_lb() - self.ln_quantum_lb())
                / std::f64::consts::LN_10,
            regime_ok: self.regime_ok(),
            trivial_algorithm_applicable: self.eps >= 1.0 / self.d as f64,
            s1_empirical: None,
            ledgers: Vec::new(),
        }
    }
}

/// Cost counters attached to one measured run.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
pub struct CostLedger {
    pub label: String,
    pub oracle_calls: u64,
    pub quantum_queries: u64,
    /// Optional combinatory-cost estimates; zero when only information cost
    /// is tracked (the default, since the lower bounds are query bounds).
    pub arithmetic_ops: u64,
    pub quantum_ops: u64,
    pub qubits: u32,
}

/// Ratio of measured classical cost to measured quantum cost. Counts oracle
/// calls plus any recorded arithmetic estimate on the classical side, and
/// queries plus any recorded operation estimate on the quantum side.
pub fn s1_empirical(classical: &CostLedger, quantum: &CostLedger) -> Result<f64> {
    let num = classical.oracle_calls + classical.arithmetic_ops;
    let den = quantum.quantum_queries + quantum.quantum_ops;
    if den == 0 {
        return Err(Error::ZeroQuantumCost);
    }
    Ok(num as f64 / den as f64)
}

/// Worst-case classical evaluation count `2^(n-1) (1 - eps)` for estimating
/// a Boolean mean over `n` bits to within `eps`.
pub fn boolean_mean_classical_lb(n: u32, eps: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::invalid("n", "must be at least 1"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid("eps", format!("{eps} outside (0, 1)")));
    }
    Ok(2f64.powi(n as i32 - 1) * (1.0 - eps))
}

/// Evaluated speedup report; serializes to the CLI's JSON schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpeedupReport {
    pub model: ComplexityModel,
    pub classical_lb: f64,
    pub quantum_lb: f64,
    pub quantum_ub: f64,
    pub s2_lower: f64,
    pub s2_upper: f64,
    pub log10_classical_lb: f64,
    pub log10_s2_lower: f64,
    pub log10_s2_upper: f64,
    pub regime_ok: bool,
    /// Set when `eps >= 1/d`: at that accuracy the constant-cost estimate
    /// already meets the target and no oracle calls are needed at all.
    pub trivial_algorithm_applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s1_empirical: Option<f64>,
    #[serde(default)]
    pub ledgers: Vec<CostLedger>,
}

/// A counted scalar integrand oracle over `[0, 1]`.
pub struct Integrand1d<F: Fn(f64) -> f64> {
    f: F,
    calls: AtomicU64,
}

impl<F: Fn(f64) -> f64> Integrand1d<F> {
    pub fn new(f: F) -> Self {
        Integrand1d {
            f,
            calls: AtomicU64::new(0),
        }
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        (self.f)(x)
    }

    pub fn call_count(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }
}

/// A counted integrand oracle over `[0, 1]^d`.
pub struct IntegrandNd<F: Fn(&[f64]) -> f64> {
    f: F,
    calls: AtomicU64,
}

impl<F: Fn(&[f64]) -> f64> IntegrandNd<F> {
    pub fn new(f: F) -> Self {
        IntegrandNd {
            f,
            calls: AtomicU64::new(0),
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        (self.f)(x)
    }

    pub fn call_count(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IntegrationRun {
    pub estimate: f64,
    pub calls: u64,
}

/// Composite midpoint rule on `n` points; exactly `n` oracle calls.
pub fn integrate_classical_1d<F: Fn(f64) -> f64>(
    oracle: &Integrand1d<F>,
    n_points: usize,
) -> Result<IntegrationRun> {
    if n_points == 0 {
        return Err(Error::invalid("n_points", "must be at least 1"));
    }
    let before = oracle.call_count();
    let n = n_points as f64;
    let sum: f64 = (0..n_points)
        .map(|i| oracle.evaluate((i as f64 + 0.5) / n))
        .sum();
    Ok(IntegrationRun {
        estimate: sum / n,
        calls: oracle.call_count() - before,
    })
}

/// Product midpoint rule; exactly `m_per_dim^d` oracle calls: the curse of
/// dimensionality as a measured quantity.
pub fn integrate_classical_product<F: Fn(&[f64]) -> f64>(
    d: usize,
    oracle: &IntegrandNd<F>,
    m_per_dim: usize,
) -> Result<IntegrationRun> {
    if d == 0 {
        return Err(Error::invalid("d", "must be at least 1"));
    }
    if m_per_dim == 0 {
        return Err(Error::invalid("m_per_dim", "must be at least 1"));
    }
    let total = (m_per_dim as u128).checked_pow(d as u32);
    let total = match total {
        Some(t) if t <= INTEGRATION_CALL_CAP as u128 => t as u64,
        _ => {
            return Err(Error::CapacityExceeded {
                requested: (m_per_dim as u128).saturating_pow(d as u32),
                cap: INTEGRATION_CALL_CAP,
            })
        }
    };
    let before = oracle.call_count();
    let m = m_per_dim as f64;
    let mut x = vec![0.0f64; d];
    let mut sum = 0.0;
    for flat in 0..total {
        let mut rest = flat;
        for xj in x.iter_mut() {
            let i = (rest % m_per_dim as u64) as f64;
            rest /= m_per_dim as u64;
            *xj = (i + 0.5) / m;
        }
        sum += oracle.evaluate(&x);
    }
    Ok(IntegrationRun {
        estimate: sum / total as f64,
        calls: oracle.call_count() - before,
    })
}

#[derive(Debug, Clone)]
pub struct QuantumIntegrationRun {
    pub estimate: AmplitudeEstimate,
    /// Discretized mean actually encoded in the preparation.
    pub discretized_mean: f64,
    pub n_points: usize,
}

/// Quantum estimate of a 1D integral: discretize to `n_points` midpoint
/// samples (values must already lie in `[0, 1]`), encode the sample mean as
/// the good-state amplitude of a weighted preparation, and run amplitude
/// estimation with `M` outcomes (`M - 1` queries on the ledger). The total
/// error splits into the midpoint discretization term plus the estimation
/// term.
pub fn integrate_quantum_1d<F: Fn(f64) -> f64>(
    oracle: &Integrand1d<F>,
    m_outcomes: usize,
    n_points: usize,
    ledger: &QueryLedger,
    mode: OutcomeMode,
) -> Result<QuantumIntegrationRun> {
    if n_points == 0 {
        return Err(Error::invalid("n_points", "must be at least 1"));
    }
    let n = n_points as f64;
    let mut samples = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let v = oracle.evaluate((i as f64 + 0.5) / n);
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::invalid(
                "integrand",
                format!("value {v} outside [0, 1]; rescale before encoding"),
            ));
        }
        samples.push(v);
    }
    let mean = samples.iter().sum::<f64>() / n;

    // Preparation over (sample index, indicator): amplitude sqrt(f_i / n) on
    // the good branch, sqrt((1 - f_i) / n) on the bad branch.
    use num_complex::Complex64;
    let mut prep = Vec::with_capacity(2 * n_points);
    let mut good = Vec::with_capacity(2 * n_points);
    for &v in &samples {
        prep.push(Complex64::new(((1.0 - v) / n).sqrt(), 0.0));
        good.push(false);
    }
    for &v in &samples {
        prep.push(Complex64::new((v / n).sqrt(), 0.0));
        good.push(true);
    }
    let sim = GroverSim::from_weighted(prep, good)?;
    let estimate = amplitude_estimate_weighted(&sim, m_outcomes, ledger, mode)?;
    Ok(QuantumIntegrationRun {
        estimate,
        discretized_mean: mean,
        n_points,
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "need at least two points for a slope");
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

/// Worst-case integrand for the midpoint rule on `n` points under the
/// `|f'| <= 1` promise: distance to the nearest sample point. The rule reads
/// zero everywhere while the true integral is `1/(4n)`.
pub fn sawtooth_worst_case(n_points: usize) -> impl Fn(f64) -> f64 {
    move |x: f64| {
        let n = n_points as f64;
        (0..n_points)
            .map(|i| (x - (i as f64 + 0.5) / n).abs())
            .fold(f64::INFINITY, f64::min)
    }
}
