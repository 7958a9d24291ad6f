//! Matrix-free discretization of `kappa * (-Laplacian) + V` on the regular
//! interior grid of the unit cube with Dirichlet boundary.
//!
//! Grid points are `x_j = i_j * h`, `i_j in 1..=m`, `h = 1/(m+1)`; linear
//! indices are row-major with dimension 1 fastest, the same order as the
//! tabulated potential file format. The second-order stencil puts `2d/h^2`
//! on the diagonal and `-1/h^2` toward each of the `2d` neighbors, with zero
//! (Dirichlet) values outside the interior grid, so the operator is
//! symmetric positive definite for admissible potentials.

use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::potential::PotentialOracle;

/// Default cap on total grid size `m^d`.
pub const GRID_POINT_CAP: u64 = 1 << 24;

/// Grids at least this large use data-parallel stencil application. The
/// per-point work is a pure function of the input vector, so results are
/// identical for any worker count.
const PAR_THRESHOLD: usize = 1 << 14;

/// Geometry of the interior grid plus the kinetic prefactor `kappa`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    d: usize,
    m: usize,
    kappa: f64,
}

impl GridSpec {
    /// Grid with `kappa = 1`, matching the operator `-Laplacian + V`.
    pub fn new(d: usize, m: usize) -> Result<Self> {
        Self::with_kappa(d, m, 1.0)
    }

    /// `kappa = 1/2` selects the `-(1/2) Laplacian + V` form.
    pub fn with_kappa(d: usize, m: usize, kappa: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("d", "must be at least 1"));
        }
        if m == 0 {
            return Err(Error::invalid("m", "must be at least 1"));
        }
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::invalid("kappa", format!("{kappa} must be positive")));
        }
        let total = (m as u128).checked_pow(d as u32);
        match total {
            Some(t) if t <= GRID_POINT_CAP as u128 => Ok(GridSpec { d, m, kappa }),
            _ => Err(Error::CapacityExceeded {
                requested: (m as u128).saturating_pow(d as u32),
                cap: GRID_POINT_CAP,
            }),
        }
    }

    /// Mesh-from-accuracy mapping `m = max(1, ceil(1/eps) - 1)`, so the mesh
    /// width `h = 1/(m+1)` is at most `eps`.
    pub fn from_accuracy(d: usize, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::invalid("eps", format!("{eps} outside (0, 1)")));
        }
        let m = ((1.0 / eps).ceil() as usize).saturating_sub(1).max(1);
        Self::new(d, m)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn points_per_dim(&self) -> usize {
        self.m
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn mesh_width(&self) -> f64 {
        1.0 / (self.m as f64 + 1.0)
    }

    pub fn num_points(&self) -> usize {
        self.m.pow(self.d as u32)
    }

    /// Coordinates of the grid point with the given linear index.
    pub fn point(&self, linear: usize) -> Vec<f64> {
        let h = self.mesh_width();
        let mut rest = linear;
        (0..self.d)
            .map(|_| {
                let i = rest % self.m;
                rest /= self.m;
                (i as f64 + 1.0) * h
            })
            .collect()
    }

    /// Eigenvalue of the kinetic term on the product sine mode `k`:
    /// `kappa * sum_j (4/h^2) sin^2(k_j pi h / 2)`.
    pub fn laplacian_mode_energy(&self, k: &[usize]) -> Result<f64> {
        if k.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                actual: k.len(),
            });
        }
        let h = self.mesh_width();
        let mut sum = 0.0;
        for (axis, &kj) in k.iter().enumerate() {
            if kj < 1 || kj > self.m {
                return Err(Error::invalid(
                    "mode index",
                    format!("k[{axis}] = {kj} outside [1, {}]", self.m),
                ));
            }
            sum += (4.0 / (h * h)) * (kj as f64 * std::f64::consts::PI * h / 2.0).sin().powi(2);
        }
        Ok(self.kappa * sum)
    }

    /// Smallest kinetic eigenvalue (mode `k = (1, ..., 1)`). With `V >= 0`
    /// this is a certified lower bound on the full spectrum.
    pub fn min_kinetic_energy(&self) -> f64 {
        let h = self.mesh_width();
        let per_axis = (4.0 / (h * h)) * (std::f64::consts::PI * h / 2.0).sin().powi(2);
        self.kappa * self.d as f64 * per_axis
    }

    /// Upper bound `kappa * 4d/h^2 + 1` on the spectrum of the operator for
    /// any potential with `0 <= V <= 1`.
    pub fn spectral_upper_bound(&self) -> f64 {
        let h = self.mesh_width();
        self.kappa * 4.0 * self.d as f64 / (h * h) + 1.0
    }

    /// Ground energy `d * pi^2 * kappa` of the continuum kinetic operator.
    pub fn continuum_ground_energy_v0(&self) -> f64 {
        continuum_ground_energy_v0(self.d) * self.kappa
    }
}

/// Continuum ground energy `d * pi^2` of `-Laplacian` on the unit cube with
/// Dirichlet boundary (`kappa = 1` form).
pub fn continuum_ground_energy_v0(d: usize) -> f64 {
    d as f64 * std::f64::consts::PI * std::f64::consts::PI
}

/// Normalized product sine mode with multi-index `k`: the exact eigenvector
/// of the discrete Dirichlet Laplacian with energy
/// [`GridSpec::laplacian_mode_energy`].
pub fn sine_mode(grid: &GridSpec, k: &[usize]) -> Result<Vec<f64>> {
    // Validates the index range.
    grid.laplacian_mode_energy(k)?;
    let m = grid.points_per_dim();
    let h = grid.mesh_width();
    let norm_per_axis = (2.0 * h).sqrt(); // sqrt(2/(m+1))
    let n = grid.num_points();
    let mut v = vec![0.0f64; n];
    for (linear, slot) in v.iter_mut().enumerate() {
        let mut rest = linear;
        let mut val = 1.0;
        for &kj in k {
            let i = rest % m;
            rest /= m;
            val *= norm_per_axis * (kj as f64 * std::f64::consts::PI * (i as f64 + 1.0) * h).sin();
        }
        *slot = val;
    }
    Ok(v)
}

/// Scalars the stencil can act on.
pub trait StencilScalar:
    Copy + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    const ZERO: Self;
}

impl StencilScalar for f64 {
    const ZERO: f64 = 0.0;
}

impl StencilScalar for Complex64 {
    const ZERO: Complex64 = Complex64::new(0.0, 0.0);
}

/// The discretized operator, applied matrix-free. The potential diagonal is
/// cached at construction by default, so building plus any number of applies
/// costs exactly `m^d` oracle calls.
#[derive(Debug)]
pub struct GridHamiltonian {
    grid: GridSpec,
    oracle: Arc<PotentialOracle>,
    diagonal: Option<Vec<f64>>,
}

impl GridHamiltonian {
    /// Builds the operator and fills the diagonal cache (`m^d` oracle calls).
    pub fn new(grid: GridSpec, oracle: Arc<PotentialOracle>) -> Result<Self> {
        let mut h = Self::new_uncached(grid, oracle)?;
        h.diagonal = Some(h.evaluate_diagonal()?);
        Ok(h)
    }

    /// Defers oracle evaluation to application time; every `apply` then
    /// costs `m^d` fresh oracle calls.
    pub fn new_uncached(grid: GridSpec, oracle: Arc<PotentialOracle>) -> Result<Self> {
        if oracle.spec().dimension() != grid.dim() {
            return Err(Error::DimensionMismatch {
                expected: grid.dim(),
                actual: oracle.spec().dimension(),
            });
        }
        Ok(GridHamiltonian {
            grid,
            oracle,
            diagonal: None,
        })
    }

    fn evaluate_diagonal(&self) -> Result<Vec<f64>> {
        (0..self.grid.num_points())
            .map(|i| self.oracle.evaluate(&self.grid.point(i)))
            .collect()
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn oracle(&self) -> &PotentialOracle {
        &self.oracle
    }

    /// Cached truncated potential values at the grid points, in grid order.
    /// Computes them on demand for an uncached operator.
    pub fn diagonal(&self) -> Result<Vec<f64>> {
        match &self.diagonal {
            Some(d) => Ok(d.clone()),
            None => self.evaluate_diagonal(),
        }
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.apply_generic(v)
    }

    pub fn apply_complex(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        self.apply_generic(v)
    }

    fn apply_generic<T: StencilScalar>(&self, v: &[T]) -> Result<Vec<T>> {
        let n = self.grid.num_points();
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: v.len(),
            });
        }
        let owned;
        let diag: &[f64] = match &self.diagonal {
            Some(d) => d,
            None => {
                owned = self.evaluate_diagonal()?;
                &owned
            }
        };
        let grid = self.grid;
        let stencil = move |i: usize| stencil_at(&grid, diag, v, i);
        let out = if n >= PAR_THRESHOLD {
            (0..n).into_par_iter().map(stencil).collect()
        } else {
            (0..n).map(stencil).collect()
        };
        Ok(out)
    }

    /// Rayleigh quotient `<v, Hv> / <v, v>`.
    pub fn rayleigh_quotient(&self, v: &[f64]) -> Result<f64> {
        let hv = self.apply(v)?;
        let num: f64 = v.iter().zip(&hv).map(|(a, b)| a * b).sum();
        let den: f64 = v.iter().map(|a| a * a).sum();
        Ok(num / den)
    }

    /// Explicit dense assembly from the stencil formula, independent of the
    /// matrix-free path. Capped at 4096 points.
    pub fn to_dense(&self) -> Result<DMatrix<f64>> {
        let n = self.grid.num_points();
        if n > 4096 {
            return Err(Error::CapacityExceeded {
                requested: n as u128,
                cap: 4096,
            });
        }
        let diag = self.diagonal()?;
        let d = self.grid.dim();
        let m = self.grid.points_per_dim();
        let h = self.grid.mesh_width();
        let inv_h2 = self.grid.kappa() / (h * h);
        let mut mat = DMatrix::zeros(n, n);
        for i in 0..n {
            mat[(i, i)] = 2.0 * d as f64 * inv_h2 + diag[i];
            let mut rest = i;
            let mut stride = 1usize;
            for _ in 0..d {
                let coord = rest % m;
                rest /= m;
                if coord > 0 {
                    mat[(i, i - stride)] = -inv_h2;
                }
                if coord + 1 < m {
                    mat[(i, i + stride)] = -inv_h2;
                }
                stride *= m;
            }
        }
        Ok(mat)
    }
}

fn stencil_at<T: StencilScalar>(grid: &GridSpec, diag: &[f64], v: &[T], i: usize) -> T {
    let d = grid.dim();
    let m = grid.points_per_dim();
    let h = grid.mesh_width();
    let mut acc = v[i] * (2.0 * d as f64);
    let mut rest = i;
    let mut stride = 1usize;
    for _ in 0..d {
        let coord = rest % m;
        rest /= m;
        if coord > 0 {
            acc = acc - v[i - stride];
        }
        if coord + 1 < m {
            acc = acc - v[i + stride];
        }
        stride *= m;
    }
    acc * (grid.kappa() / (h * h)) + v[i] * diag[i]
}
