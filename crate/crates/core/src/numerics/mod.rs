//! Shared numerical machinery: gamma functions, adaptive quadrature,
//! alternating-series summation, and bracketed root finding.
//!
//! Everything here is a pure function of its inputs and safe to call from any
//! number of threads.

mod gamma;
mod quad;
mod roots;
mod series;

pub use gamma::{gamma_fn, ln_gamma};
pub use quad::{integrate, integrate_semi_infinite, interference_tail_integral, QuadResult};
pub use roots::{find_root_bracketed, RootOutcome};
pub use series::sum_alternating_series;

use thiserror::Error;

/// Errors produced by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    /// Input outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Subdivision budget exhausted before reaching the requested tolerance.
    /// Carries the best estimate and its error bound.
    #[error("quadrature did not converge (best estimate {best:e}, error bound {error:e})")]
    Convergence { best: f64, error: f64 },
    /// Series summation ran out of terms without meeting the tolerance.
    #[error("series did not converge within {terms} terms (partial sum {partial:e})")]
    SeriesBudget { terms: usize, partial: f64 },
    /// Series term magnitudes kept growing; the sum cannot be represented.
    #[error("series numerically divergent at term {at}")]
    Divergent { at: usize },
}

/// Tolerances and budget for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Relative tolerance on the integral value.
    pub rel_tol: f64,
    /// Absolute tolerance floor.
    pub abs_tol: f64,
    /// Maximum number of interval subdivisions.
    pub max_subdivisions: usize,
}

impl QuadratureConfig {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self, NumericsError> {
        if !(rel_tol > 0.0) || !rel_tol.is_finite() {
            return Err(NumericsError::Domain(format!("rel_tol must be > 0, got {rel_tol}")));
        }
        if !(abs_tol >= 0.0) || !abs_tol.is_finite() {
            return Err(NumericsError::Domain(format!("abs_tol must be >= 0, got {abs_tol}")));
        }
        if max_subdivisions < 1 {
            return Err(NumericsError::Domain("max_subdivisions must be >= 1".into()));
        }
        Ok(Self { rel_tol, abs_tol, max_subdivisions })
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        // Tight enough that quadrature error is negligible against Monte Carlo error.
        Self { rel_tol: 1e-8, abs_tol: 1e-12, max_subdivisions: 2000 }
    }
}
