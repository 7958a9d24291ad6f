//! speeduplab: a numerical laboratory for measuring classical-versus-quantum
//! query costs on three problems with known complexity behavior.
//!
//! - Ground-state energy of `-kappa Laplacian + V` on the unit cube with
//!   Dirichlet boundary: classically by inverse iteration over a matrix-free
//!   finite-difference operator ([`eigensolver`], [`grid`]), quantumly by
//!   simulated phase estimation over a split-operator propagator
//!   ([`qsim`]). Potentials come from a bounded oracle class with exact call
//!   accounting ([`potential`]).
//! - Boolean mean estimation via simulated amplitude estimation over a
//!   Grover operator ([`qsim`]).
//! - Model integration problems whose oracle-call growth is measured
//!   directly ([`speedup`]).
//!
//! The [`speedup`] module also evaluates the closed-form cost bounds and the
//! speedup ratios they imply, in log space so reports stay finite.

pub mod error;
pub mod eigensolver;
pub mod grid;
pub mod potential;
pub mod qsim;
pub mod speedup;

pub use error::{Error, Result};
