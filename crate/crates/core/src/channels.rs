//! CPTP maps in Kraus form and the specific channel families used by the switch.

use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::linalg::{pauli, sqrt_psd, ComplexMatrix, DensityMatrix};

/// Completeness tolerance `‖Σ K†K − 1‖_F`.
pub const CPTP_TOL: f64 = 1e-10;
/// Tolerance on projector algebra for observables.
pub const PROJECTOR_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct KrausChannel {
    dim: usize,
    operators: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| invalid("operators", "a channel needs at least one Kraus operator"))?;
        let dim = first.rows();
        if let Some(bad) = operators.iter().find(|k| k.rows() != dim || k.cols() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operators must all be {dim}x{dim}, found {}x{}",
                bad.rows(),
                bad.cols()
            )));
        }
        let channel = Self { dim, operators };
        let error = channel.completeness_error();
        if error > CPTP_TOL {
            return Err(Error::NotCptp { error });
        }
        Ok(channel)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            operators: vec![ComplexMatrix::identity(dim)],
        }
    }

    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    /// `‖Σ K†K − 1‖_F`
    pub fn completeness_error(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.operators {
            sum += &(&k.adjoint() * k);
        }
        (&sum - &ComplexMatrix::identity(self.dim)).frobenius_norm()
    }

    /// `Σ K ρ K†` on a bare operator.
    pub fn apply_operator(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.operators {
            out += &rho.conjugate_by(k);
        }
        out
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_dim(rho.dim())?;
        DensityMatrix::from_computed(&self.apply_operator(rho.matrix()))
    }

    /// The channel `next ∘ self`, Kraus operators `N_j M_i`.
    pub fn then(&self, next: &KrausChannel) -> Result<KrausChannel> {
        self.check_dim(next.dim)?;
        let operators = self
            .operators
            .iter()
            .flat_map(|m| next.operators.iter().map(move |n| n * m))
            .collect();
        Ok(Self {
            dim: self.dim,
            operators,
        })
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "channel acts on dimension {}, got {d}",
                self.dim
            )));
        }
        Ok(())
    }
}

/// A projective observable given by its spectral projectors.
#[derive(Clone, Debug)]
pub struct Observable {
    eigenvalues: Vec<f64>,
    projectors: Vec<ComplexMatrix>,
}

impl Observable {
    pub fn new(eigenvalues: Vec<f64>, projectors: Vec<ComplexMatrix>) -> Result<Self> {
        if projectors.is_empty() || eigenvalues.len() != projectors.len() {
            return Err(Error::InvalidObservable(format!(
                "{} eigenvalues for {} projectors",
                eigenvalues.len(),
                projectors.len()
            )));
        }
        let d = projectors[0].rows();
        let mut sum = ComplexMatrix::zeros(d, d);
        for (a, pa) in projectors.iter().enumerate() {
            if pa.rows() != d || !pa.is_square() {
                return Err(Error::InvalidObservable("projector shapes differ".into()));
            }
            if !pa.is_hermitian(PROJECTOR_TOL) {
                return Err(Error::InvalidObservable(format!("projector {a} is not Hermitian")));
            }
            for (b, pb) in projectors.iter().enumerate() {
                let expected = if a == b { pa.clone() } else { ComplexMatrix::zeros(d, d) };
                if (&(pa * pb) - &expected).max_abs() > PROJECTOR_TOL {
                    return Err(Error::InvalidObservable(format!(
                        "projectors {a} and {b} violate O_a O_b = δ_ab O_a"
                    )));
                }
            }
            sum += pa;
        }
        if (&sum - &ComplexMatrix::identity(d)).max_abs() > PROJECTOR_TOL {
            return Err(Error::InvalidObservable("projectors do not sum to identity".into()));
        }
        Ok(Self {
            eigenvalues,
            projectors,
        })
    }

    /// Rank-one projectors onto the (normalized) basis vectors.
    pub fn from_basis(eigenvalues: Vec<f64>, basis: &[Vec<C64>]) -> Result<Self> {
        let projectors = basis
            .iter()
            .map(|v| {
                let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let unit: Vec<C64> = v.iter().map(|z| z / n).collect();
                ComplexMatrix::projector(&unit)
            })
            .collect();
        Self::new(eigenvalues, projectors)
    }

    pub fn pauli_z() -> Self {
        Self::from_basis(vec![1.0, -1.0], &[pauli::ket_zero(), pauli::ket_one()]).unwrap()
    }

    pub fn pauli_x() -> Self {
        Self::from_basis(vec![1.0, -1.0], &[pauli::ket_plus(), pauli::ket_minus()]).unwrap()
    }

    pub fn pauli_y() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let up = vec![C64::new(h, 0.0), C64::new(0.0, h)];
        let down = vec![C64::new(h, 0.0), C64::new(0.0, -h)];
        Self::from_basis(vec![1.0, -1.0], &[up, down]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].rows()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    /// `Σ α O_α`
    pub fn matrix(&self) -> ComplexMatrix {
        let d = self.dim();
        self.eigenvalues
            .iter()
            .zip(&self.projectors)
            .fold(ComplexMatrix::zeros(d, d), |acc, (&a, p)| &acc + &p.scale_real(a))
    }

    /// Basis vectors of rank-one projectors, phase fixed so the largest component is real positive.
    pub fn basis_vectors(&self) -> Result<Vec<Vec<C64>>> {
        self.projectors
            .iter()
            .map(|p| {
                let rank = p.trace().re;
                if (rank - 1.0).abs() > PROJECTOR_TOL {
                    return Err(Error::InvalidObservable(format!(
                        "projector has rank {rank:.3}, expected a non-degenerate observable"
                    )));
                }
                let col = (0..p.cols())
                    .max_by(|&a, &b| p[(a, a)].re.total_cmp(&p[(b, b)].re))
                    .unwrap();
                let v = p.column(col);
                let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                Ok(v.into_iter().map(|z| z / n).collect())
            })
            .collect()
    }
}

/// Measurement strength ε ∈ [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct MonitoringStrength(f64);

impl MonitoringStrength {
    pub fn new(eps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(invalid("eps", format!("monitoring strength {eps} outside [0, 1]")));
        }
        Ok(Self(eps))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Strength of two consecutive monitorings of the same observable.
    pub fn compose(self, other: Self) -> Self {
        Self(self.0 + other.0 - self.0 * other.0)
    }
}

/// Non-selective projective measurement `Φ_O(ρ) = Σ O_α ρ O_α`.
pub fn dephasing_channel(obs: &Observable) -> KrausChannel {
    KrausChannel {
        dim: obs.dim(),
        operators: obs.projectors.clone(),
    }
}

/// `(1 − ε) ρ + ε Φ_O(ρ)` with Kraus set `{√(1−ε) 1, √ε O_j}`.
pub fn monitoring_channel(obs: &Observable, eps: MonitoringStrength) -> KrausChannel {
    let e = eps.value();
    let mut operators = vec![ComplexMatrix::identity(obs.dim()).scale_real((1.0 - e).sqrt())];
    operators.extend(obs.projectors.iter().map(|p| p.scale_real(e.sqrt())));
    KrausChannel {
        dim: obs.dim(),
        operators,
    }
}

/// Kraus set `√(Θ/2) U_i` for the switch-driven refrigerator.
pub fn fridge_kraus(theta_cold: &DensityMatrix, unitaries: &[ComplexMatrix]) -> Result<KrausChannel> {
    let root = sqrt_psd(&theta_cold.matrix().scale_real(0.5))?;
    KrausChannel::new(unitaries.iter().map(|u| &root * u).collect())
}

/// [`fridge_kraus`] with the Pauli set `{1, σx, σy, σz}`.
pub fn fridge_channel(theta_cold: &DensityMatrix) -> Result<KrausChannel> {
    if theta_cold.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "refrigerator Kraus set is defined for a qubit, got dimension {}",
            theta_cold.dim()
        )));
    }
    fridge_kraus(theta_cold, &pauli::all())
}
