//! Dense complex linear algebra substrate.
//!
//! Everything here is sized for desk-scale operators (dimension ≤ a few
//! hundred): storage is dense row-major, algorithms favour robustness over
//! speed, and all operations are pure functions of their inputs.

mod eigen;
mod io;
mod matrix;
mod vector;

pub use eigen::{
    hermitian_eigendecompose, hermitian_exponential, random_orthonormal_basis, random_unitary,
    random_unitary_with_spectrum, unitary_eigendecompose, EigenSystem,
};
pub use io::MatrixJson;
pub use matrix::{kron, matrix_power, unitarity_check, ComplexMatrix};
pub use vector::{gram_schmidt, random_complex_vector, ComplexVector};

use thiserror::Error;

/// Errors raised by the linear algebra layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QmathError {
    /// A vector handed to Gram-Schmidt was (numerically) in the span of the
    /// previous ones: residual norm fell below the dependence threshold.
    #[error("linearly dependent input: residual norm {residual:.3e} below threshold")]
    DependentInput { residual: f64 },
    /// Input matrix is not Hermitian within the required tolerance.
    #[error("matrix is not Hermitian: max |H - H†| entry is {defect:.3e}")]
    NotHermitian { defect: f64 },
    /// Input matrix is not unitary within the required tolerance.
    #[error("matrix is not unitary: max |U†U - I| entry is {defect:.3e}")]
    NotUnitary { defect: f64 },
    /// The iterative eigensolver did not reach its convergence threshold
    /// within the sweep budget.
    #[error("eigensolver did not converge: off-diagonal norm {off_norm:.3e} after {sweeps} sweeps")]
    NoConvergence { off_norm: f64, sweeps: usize },
    /// Operand shapes are incompatible.
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    /// A matrix or vector contains non-finite entries.
    #[error("non-finite entry encountered in {context}")]
    NonFinite { context: String },
}

/// Residual norm below which Gram-Schmidt declares linear dependence.
pub const DEPENDENCE_THRESHOLD: f64 = 1e-12;

/// Hermiticity tolerance on `max |H - H†|` entries.
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;

/// Unitarity tolerance on `max |U†U - I|` entries.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;
