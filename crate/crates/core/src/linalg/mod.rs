//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Every matrix in scope is at most a few dozen rows, so storage is plain
//! row-major `Vec<Complex64>` and the Hermitian eigendecomposition is the one
//! primitive behind exponentials, square roots, logarithms and absolute values.

mod matrix;
mod state;

pub use matrix::{
    hermitian_eigen, matrix_function, partial_trace, pauli, sqrt_psd, tensor, tensor_all,
    unitary_evolution, ComplexMatrix, HermitianEigenSystem, HERMITIAN_INPUT_TOL,
};
pub use state::{trace_distance, trace_norm_half, von_neumann_entropy, DensityMatrix, TRACE_DRIFT_TOL};

/// Entrywise Hermiticity tolerance for density matrices.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues down to `-POSITIVITY_TOL` count as zero.
pub const POSITIVITY_TOL: f64 = 1e-10;
