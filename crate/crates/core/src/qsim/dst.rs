//! Orthonormal type-I discrete sine transform.
//!
//! The DST-I basis vectors are the eigenvectors of the 1D discrete Dirichlet
//! Laplacian, so the transform diagonalizes the kinetic term exactly. The
//! orthonormal normalization makes the matrix symmetric and involutive:
//! applying it twice returns the input.
//!
//! Transforms are applied as a direct O(m^2) matrix product per line; grid
//! lines are short at desk scale and the plan caches the sine matrix.

use num_complex::Complex64;

/// Precomputed orthonormal DST-I matrix for lines of length `m`:
/// entries `sqrt(2/(m+1)) * sin(j k pi / (m+1))`.
#[derive(Debug, Clone)]
pub struct DstPlan {
    m: usize,
    matrix: Vec<f64>,
}

impl DstPlan {
    pub fn new(m: usize) -> Self {
        assert!(m >= 1, "transform length must be positive");
        let norm = (2.0 / (m as f64 + 1.0)).sqrt();
        let mut matrix = vec![0.0; m * m];
        for k in 1..=m {
            for j in 1..=m {
                matrix[(k - 1) * m + (j - 1)] =
                    norm * (j as f64 * k as f64 * std::f64::consts::PI / (m as f64 + 1.0)).sin();
            }
        }
        DstPlan { m, matrix }
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn apply_real(&self, line: &[f64]) -> Vec<f64> {
        assert_eq!(line.len(), self.m);
        (0..self.m)
            .map(|k| {
                let row = &self.matrix[k * self.m..(k + 1) * self.m];
                row.iter().zip(line).map(|(s, x)| s * x).sum()
            })
            .collect()
    }

    /// Transforms a gathered complex line from `src` into `dst`.
    pub fn apply_complex(&self, src: &[Complex64], dst: &mut [Complex64]) {
        debug_assert_eq!(src.len(), self.m);
        debug_assert_eq!(dst.len(), self.m);
        for (k, out) in dst.iter_mut().enumerate() {
            let row = &self.matrix[k * self.m..(k + 1) * self.m];
            let mut acc = Complex64::new(0.0, 0.0);
            for (s, x) in row.iter().zip(src) {
                acc += x * *s;
            }
            *out = acc;
        }
    }
}

/// One-shot orthonormal DST-I of a single line.
pub fn dst_apply(line: &[f64]) -> Vec<f64> {
    DstPlan::new(line.len()).apply_real(line)
}
