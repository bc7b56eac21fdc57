use num_complex::Complex64 as C64;

use super::matrix::{hermitian_eigen, ComplexMatrix};
use super::{HERMITIAN_TOL, POSITIVITY_TOL, TRACE_TOL};
use crate::error::{Error, Result};

/// Largest trace drift [`DensityMatrix::from_computed`] renormalizes away.
pub const TRACE_DRIFT_TOL: f64 = 1e-9;

/// A Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let deviation = matrix.hermiticity_error();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotNormalized { trace });
        }
        let smallest = hermitian_eigen(&matrix)?.eigenvalues[0];
        if smallest < -POSITIVITY_TOL {
            return Err(Error::NotPositive {
                eigenvalue: smallest,
            });
        }
        Ok(Self(matrix))
    }

    /// Validates the Hermitian part of a computed state.
    ///
    /// Long products of unitaries leave anti-Hermitian residue and a trace
    /// drift that grows with the number of steps; both are removed when they
    /// stay below the input tolerances.
    pub fn from_computed(matrix: &ComplexMatrix) -> Result<Self> {
        let deviation = matrix.hermiticity_error();
        if deviation > super::matrix::HERMITIAN_INPUT_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let h = matrix.hermitian_part();
        let t = h.trace().re;
        if (t - 1.0).abs() > TRACE_DRIFT_TOL {
            return Err(Error::NotNormalized { trace: t });
        }
        Self::new(h.scale_real(1.0 / t))
    }

    /// Normalizes a positive operator by its trace.
    pub fn normalized(matrix: &ComplexMatrix) -> Result<Self> {
        let t = matrix.trace().re;
        if t.abs() < f64::MIN_POSITIVE {
            return Err(Error::NotNormalized { trace: t });
        }
        Self::from_computed(&matrix.scale_real(1.0 / t))
    }

    pub fn pure(ket: &[C64]) -> Result<Self> {
        let norm = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized { trace: 0.0 });
        }
        let unit: Vec<C64> = ket.iter().map(|z| z / norm).collect();
        Self::from_computed(&ComplexMatrix::projector(&unit))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// Eigenvalues ascending, clamped into `[0, 1]` when within tolerance of the boundary.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let eig = hermitian_eigen(&self.0)?;
        eig.eigenvalues
            .into_iter()
            .map(|l| {
                if l < -POSITIVITY_TOL {
                    Err(Error::NotPositive { eigenvalue: l })
                } else {
                    Ok(l.clamp(0.0, 1.0))
                }
            })
            .collect()
    }

    /// `⟨H⟩ = tr(ρ H)`
    pub fn expectation(&self, observable: &ComplexMatrix) -> f64 {
        (&self.0 * observable).trace().re
    }
}

/// `-Σ λ ln λ` in nats, with `0 ln 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(rho
        .spectrum()?
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.ln())
        .sum())
}

/// `½ Σ |eig(a - b)|`
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    trace_norm_half(a.matrix(), b.matrix())
}

/// Trace distance between two Hermitian operators that need not be states.
pub fn trace_norm_half(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(format!(
            "trace distance between {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let diff = (a - b).hermitian_part();
    let eig = hermitian_eigen(&diff)?;
    Ok(0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
}
