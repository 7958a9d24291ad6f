//! Potential oracles over the open unit cube.
//!
//! The admissible class consists of potentials `V: (0,1)^d -> [0,1]` with
//! `|dV/dx_j| <= 1` on every axis. Built-in families are verified against
//! those bounds analytically at construction; tabulated grids carry no
//! analytic certificate and are checked by sampling via [`validate_class`].
//!
//! Oracle evaluations are rounded to a configurable number of fractional
//! bits and counted, so a run's information cost can be read back exactly.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Finite-difference step used by [`validate_class`] gradient probes.
const GRADIENT_PROBE_STEP: f64 = 1e-4;

/// Slack added to the gradient bound so admissible analytic families are not
/// rejected due to finite-difference truncation error.
const GRADIENT_CHECK_SLACK: f64 = 1e-6;

/// Hard cap on class-validation sample grids.
const VALIDATION_SAMPLE_CAP: u128 = 1 << 22;

/// Rounding beyond 52 fractional bits is not exactly representable in f64,
/// so the accuracy contract `|r - V(x)| <= 2^-b` would silently break.
pub const MAX_TRUNCATION_BITS: u32 = 52;

/// Built-in potential families.
#[derive(Debug, Clone)]
pub enum PotentialFamily {
    /// V = 0.
    Zero,
    /// V = c with c in [0,1].
    Const { value: f64 },
    /// V(x) = (1/d) * sum_j sin(x_j); range (0, sin 1), |dV/dx_j| = |cos x_j|/d.
    SepSin,
    /// V(x) = a * (1 - cos(x_1 * ... * x_d)) with a in [0,1];
    /// |dV/dx_j| = a |sin(prod x)| * prod_{i != j} x_i <= a.
    CosMix { amplitude: f64 },
    /// Values on the interior grid, evaluated by multilinear interpolation.
    Tabulated(TabulatedGrid),
}

impl PotentialFamily {
    fn name(&self) -> &'static str {
        match self {
            PotentialFamily::Zero => "zero",
            PotentialFamily::Const { .. } => "const",
            PotentialFamily::SepSin => "sep-sin",
            PotentialFamily::CosMix { .. } => "cos-mix",
            PotentialFamily::Tabulated(_) => "tab",
        }
    }
}

/// Potential values tabulated on the interior grid of `(0,1)^d` with `m`
/// points per dimension, stored row-major with dimension 1 fastest (the same
/// order used by grid vectors).
#[derive(Debug, Clone)]
pub struct TabulatedGrid {
    d: usize,
    m: usize,
    values: Vec<f64>,
}

impl TabulatedGrid {
    pub fn new(d: usize, m: usize, values: Vec<f64>) -> Result<Self> {
        if d == 0 {
            return Err(Error::TabulatedData("dimension must be positive".into()));
        }
        if m == 0 {
            return Err(Error::TabulatedData(
                "points per dimension must be positive".into(),
            ));
        }
        let expected = (m as u128).checked_pow(d as u32).ok_or_else(|| {
            Error::TabulatedData(format!("grid size {m}^{d} overflows"))
        })?;
        if expected != values.len() as u128 {
            return Err(Error::TabulatedData(format!(
                "expected {expected} values for d={d}, m={m}, got {}",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::TabulatedData(format!("non-finite value {bad}")));
        }
        Ok(TabulatedGrid { d, m, values })
    }

    /// Parses the CSV format: a header line `d,m` followed by one value per
    /// line in row-major interior-grid order.
    pub fn from_reader(reader: impl BufRead) -> Result<Self> {
        let mut lines = reader.lines();
        let header = loop {
            match lines.next() {
                Some(line) => {
                    let line = line.map_err(|e| Error::TabulatedData(e.to_string()))?;
                    let t = line.trim().to_string();
                    if !t.is_empty() {
                        break t;
                    }
                }
                None => return Err(Error::TabulatedData("empty file".into())),
            }
        };
        let mut parts = header.split(',');
        let d: usize = parts
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::TabulatedData(format!("bad header `{header}`")))?;
        let m: usize = parts
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::TabulatedData(format!("bad header `{header}`")))?;
        let mut values = Vec::new();
        for line in lines {
            let line = line.map_err(|e| Error::TabulatedData(e.to_string()))?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let v: f64 = t
                .parse()
                .map_err(|_| Error::TabulatedData(format!("bad value `{t}`")))?;
            values.push(v);
        }
        TabulatedGrid::new(d, m, values)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| {
            Error::TabulatedData(format!("cannot open {}: {e}", path.display()))
        })?;
        Self::from_reader(BufReader::new(file))
    }

    pub fn points_per_dim(&self) -> usize {
        self.m
    }

    /// Multilinear interpolation between interior grid nodes, with constant
    /// extension outside the node hull `[h, 1-h]^d`.
    fn interpolate(&self, x: &[f64]) -> f64 {
        let m = self.m;
        if m == 1 {
            return self.values[0];
        }
        let h = 1.0 / (m as f64 + 1.0);
        // Node i (0-based) sits at coordinate (i+1)*h.
        let mut base = vec![0usize; self.d];
        let mut frac = vec![0.0f64; self.d];
        for (j, &xj) in x.iter().enumerate() {
            let u = (xj / h - 1.0).clamp(0.0, (m - 1) as f64);
            let i0 = (u.floor() as usize).min(m - 2);
            base[j] = i0;
            frac[j] = u - i0 as f64;
        }
        let mut acc = 0.0;
        for corner in 0..(1usize << self.d) {
            let mut weight = 1.0;
            let mut index = 0usize;
            let mut stride = 1usize;
            for j in 0..self.d {
                let hi = (corner >> j) & 1 == 1;
                weight *= if hi { frac[j] } else { 1.0 - frac[j] };
                index += (base[j] + hi as usize) * stride;
                stride *= m;
            }
            if weight != 0.0 {
                acc += weight * self.values[index];
            }
        }
        acc
    }
}

/// An immutable description of a potential: family plus dimension.
#[derive(Debug, Clone)]
pub struct PotentialSpec {
    family: PotentialFamily,
    dimension: usize,
}

impl PotentialSpec {
    /// Validates family parameters (the analytic class certificate for the
    /// built-in families) and the dimension.
    pub fn new(family: PotentialFamily, dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("dimension", "must be at least 1"));
        }
        match &family {
            PotentialFamily::Zero | PotentialFamily::SepSin => {}
            PotentialFamily::Const { value } => {
                if !(*value >= 0.0 && *value <= 1.0) {
                    return Err(Error::invalid(
                        "const",
                        format!("c = {value} outside [0, 1]"),
                    ));
                }
            }
            PotentialFamily::CosMix { amplitude } => {
                if !(*amplitude >= 0.0 && *amplitude <= 1.0) {
                    return Err(Error::invalid(
                        "cos-mix",
                        format!("amplitude = {amplitude} outside [0, 1]"),
                    ));
                }
            }
            PotentialFamily::Tabulated(grid) => {
                if grid.d != dimension {
                    return Err(Error::DimensionMismatch {
                        expected: dimension,
                        actual: grid.d,
                    });
                }
            }
        }
        Ok(PotentialSpec { family, dimension })
    }

    /// Parses the CLI DSL: `zero`, `const:<c>`, `sep-sin`, `cos-mix:<a>`,
    /// `tab:<path>`.
    pub fn parse(dsl: &str, dimension: usize) -> Result<Self> {
        let family = if dsl == "zero" {
            PotentialFamily::Zero
        } else if dsl == "sep-sin" {
            PotentialFamily::SepSin
        } else if let Some(c) = dsl.strip_prefix("const:") {
            let value: f64 = c
                .parse()
                .map_err(|_| Error::invalid("potential", format!("bad constant `{c}`")))?;
            PotentialFamily::Const { value }
        } else if let Some(a) = dsl.strip_prefix("cos-mix:") {
            let amplitude: f64 = a
                .parse()
                .map_err(|_| Error::invalid("potential", format!("bad amplitude `{a}`")))?;
            PotentialFamily::CosMix { amplitude }
        } else if let Some(path) = dsl.strip_prefix("tab:") {
            PotentialFamily::Tabulated(TabulatedGrid::from_path(Path::new(path))?)
        } else {
            return Err(Error::invalid(
                "potential",
                format!("unknown potential `{dsl}`"),
            ));
        };
        PotentialSpec::new(family, dimension)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn family(&self) -> &PotentialFamily {
        &self.family
    }

    pub fn family_name(&self) -> &'static str {
        self.family.name()
    }

    /// Exact (unrounded, uncounted) value of V at an interior point.
    ///
    /// This is the mathematical function behind the oracle; use
    /// [`PotentialOracle::evaluate`] for counted, rounded access.
    pub fn value(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        Ok(self.value_unchecked(x))
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                actual: x.len(),
            });
        }
        for (axis, &v) in x.iter().enumerate() {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::OutsideDomain { axis, value: v });
            }
        }
        Ok(())
    }

    fn value_unchecked(&self, x: &[f64]) -> f64 {
        match &self.family {
            PotentialFamily::Zero => 0.0,
            PotentialFamily::Const { value } => *value,
            PotentialFamily::SepSin => {
                x.iter().map(|&v| v.sin()).sum::<f64>() / self.dimension as f64
            }
            PotentialFamily::CosMix { amplitude } => {
                amplitude * (1.0 - x.iter().product::<f64>().cos())
            }
            PotentialFamily::Tabulated(grid) => grid.interpolate(x),
        }
    }
}

/// Counted, rounded oracle access to a potential.
///
/// Returned values are rounded to `truncation_bits` fractional bits, so every
/// value is an integer multiple of `2^-bits` and `|r - V(x)| <= 2^-bits`.
/// The call counter is atomic; concurrent evaluation loses no counts.
#[derive(Debug)]
pub struct PotentialOracle {
    spec: PotentialSpec,
    truncation_bits: u32,
    calls: AtomicU64,
}

impl PotentialOracle {
    /// Oracle with the standalone default of 52 fractional bits.
    pub fn new(spec: PotentialSpec) -> Self {
        PotentialOracle {
            spec,
            truncation_bits: MAX_TRUNCATION_BITS,
            calls: AtomicU64::new(0),
        }
    }

    pub fn with_truncation(spec: PotentialSpec, bits: u32) -> Result<Self> {
        if bits == 0 || bits > MAX_TRUNCATION_BITS {
            return Err(Error::invalid(
                "truncation_bits",
                format!("{bits} outside [1, {MAX_TRUNCATION_BITS}]"),
            ));
        }
        Ok(PotentialOracle {
            spec,
            truncation_bits: bits,
            calls: AtomicU64::new(0),
        })
    }

    /// Evaluates V at `x`, rounded to the oracle's bit budget; bumps the call
    /// counter by exactly one.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.spec.check_point(x)?;
        self.calls.fetch_add(1, Ordering::Relaxed);
        let v = self.spec.value_unchecked(x);
        let scale = (1u64 << self.truncation_bits) as f64;
        Ok((v * scale).round() / scale)
    }

    pub fn call_count(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn truncation_bits(&self) -> u32 {
        self.truncation_bits
    }

    pub fn spec(&self) -> &PotentialSpec {
        &self.spec
    }
}

/// Bit budget for a run targeting relative accuracy `eps`:
/// `ceil(log2(1/eps)) + 10`, clamped to the representable range.
pub fn truncation_bits_for_accuracy(eps: f64) -> u32 {
    if !(eps > 0.0 && eps < 1.0) {
        return MAX_TRUNCATION_BITS;
    }
    let bits = (1.0 / eps).log2().ceil() as i64 + 10;
    bits.clamp(1, MAX_TRUNCATION_BITS as i64) as u32
}

/// Result of sampling-based class validation.
#[derive(Debug, Clone, Copy)]
pub struct ClassReport {
    pub bounds_ok: bool,
    pub worst_abs_value: f64,
    pub worst_gradient: f64,
}

/// Samples V and a central-difference gradient estimate on a
/// `samples_per_dim^d` grid, reporting whether the observed values stay
/// inside the admissible class (with a small finite-difference slack on the
/// gradient bound).
pub fn validate_class(spec: &PotentialSpec, samples_per_dim: usize) -> Result<ClassReport> {
    if samples_per_dim < 2 {
        return Err(Error::invalid("samples_per_dim", "must be at least 2"));
    }
    if samples_per_dim > 4096 {
        return Err(Error::invalid("samples_per_dim", "must be at most 4096"));
    }
    let d = spec.dimension();
    let total = (samples_per_dim as u128)
        .checked_pow(d as u32)
        .filter(|&t| t <= VALIDATION_SAMPLE_CAP)
        .ok_or(Error::CapacityExceeded {
            requested: (samples_per_dim as u128).saturating_pow(d as u32),
            cap: VALIDATION_SAMPLE_CAP as u64,
        })?;

    let s = samples_per_dim as f64;
    let mut worst_abs_value: f64 = 0.0;
    let mut worst_gradient: f64 = 0.0;
    let mut x = vec![0.0f64; d];
    for flat in 0..total {
        let mut rest = flat;
        for xj in x.iter_mut() {
            let i = (rest % samples_per_dim as u128) as f64;
            rest /= samples_per_dim as u128;
            *xj = (i + 0.5) / s;
        }
        let v = spec.value_unchecked(&x);
        worst_abs_value = worst_abs_value.max(v.abs());
        for j in 0..d {
            let saved = x[j];
            x[j] = saved + GRADIENT_PROBE_STEP;
            let hi = spec.value_unchecked(&x);
            x[j] = saved - GRADIENT_PROBE_STEP;
            let lo = spec.value_unchecked(&x);
            x[j] = saved;
            let g = (hi - lo) / (2.0 * GRADIENT_PROBE_STEP);
            worst_gradient = worst_gradient.max(g.abs());
        }
    }
    Ok(ClassReport {
        bounds_ok: worst_abs_value <= 1.0 && worst_gradient <= 1.0 + GRADIENT_CHECK_SLACK,
        worst_abs_value,
        worst_gradient,
    })
}
