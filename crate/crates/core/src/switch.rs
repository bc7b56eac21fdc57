//! The quantum switch of two channels and post-selection of its control.
//!
//! Tensor order throughout is system ⊗ control. The control is post-selected
//! in the σx eigenbasis `{|+⟩, |−⟩}`.

use std::fmt;

use num_complex::Complex64 as C64;

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::{partial_trace, pauli, tensor, ComplexMatrix, DensityMatrix};

/// Post-selection probabilities below this leave the conditional state undefined.
pub const PROBABILITY_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }

    pub fn ket(self) -> Vec<C64> {
        match self {
            Outcome::Plus => pauli::ket_plus(),
            Outcome::Minus => pauli::ket_minus(),
        }
    }

    pub fn projector(self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.ket())
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Plus => "plus",
            Outcome::Minus => "minus",
        })
    }
}

/// `|x⟩⟨y|` on the control in the `{|+⟩, |−⟩}` basis.
pub(crate) fn control_ketbra(x: Outcome, y: Outcome) -> ComplexMatrix {
    ComplexMatrix::outer(&x.ket(), &y.ket())
}

/// The operators `A_xy = ¼ Σ [M_i, N_j]_x ρ [M_i, N_j]_y†`, with `x = +` the
/// anticommutator and `x = −` the commutator, plus the definite-order mixture
/// `A_def = A_++ + A_−−` and the interference term `A_indef = A_++ − A_−−`.
#[derive(Clone, Debug)]
pub struct SwitchDecomposition {
    pub a_pp: ComplexMatrix,
    pub a_pm: ComplexMatrix,
    pub a_mp: ComplexMatrix,
    pub a_mm: ComplexMatrix,
    pub a_def: ComplexMatrix,
    pub a_indef: ComplexMatrix,
}

impl SwitchDecomposition {
    pub fn dim(&self) -> usize {
        self.a_def.rows()
    }

    pub fn block(&self, x: Outcome, y: Outcome) -> &ComplexMatrix {
        match (x, y) {
            (Outcome::Plus, Outcome::Plus) => &self.a_pp,
            (Outcome::Plus, Outcome::Minus) => &self.a_pm,
            (Outcome::Minus, Outcome::Plus) => &self.a_mp,
            (Outcome::Minus, Outcome::Minus) => &self.a_mm,
        }
    }

    /// `tr A_indef`, the weight of the interference term.
    pub fn indefinite_weight(&self) -> f64 {
        self.a_indef.trace().re
    }

    /// Joint state for an arbitrary control input,
    /// `A_++ ⊗ ρ_C + A_+− ⊗ ρ_C σz + A_−+ ⊗ σz ρ_C + A_−− ⊗ σz ρ_C σz`.
    pub fn assemble(&self, rho_c: &DensityMatrix) -> Result<DensityMatrix> {
        if rho_c.dim() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "control must be a qubit, got dimension {}",
                rho_c.dim()
            )));
        }
        let c = rho_c.matrix();
        let z = pauli::z();
        let mut joint = tensor(&self.a_pp, c);
        joint += &tensor(&self.a_pm, &(c * &z));
        joint += &tensor(&self.a_mp, &(&z * c));
        joint += &tensor(&self.a_mm, &(&(&z * c) * &z));
        DensityMatrix::from_computed(&joint)
    }

    /// Joint state for the control prepared in `|+⟩`, `Σ A_xy ⊗ |x⟩⟨y|`.
    pub fn assemble_plus(&self) -> Result<DensityMatrix> {
        let mut joint = ComplexMatrix::zeros(2 * self.dim(), 2 * self.dim());
        for x in Outcome::BOTH {
            for y in Outcome::BOTH {
                joint += &tensor(self.block(x, y), &control_ketbra(x, y));
            }
        }
        DensityMatrix::from_computed(&joint)
    }
}

/// Result of projecting the control onto `|±⟩`.
#[derive(Clone, Debug)]
pub struct PostSelection {
    pub outcome: Outcome,
    pub probability: f64,
    /// `None` when `probability` is below [`PROBABILITY_FLOOR`].
    pub conditional_state: Option<DensityMatrix>,
}

impl PostSelection {
    /// Normalizes an unnormalized conditional block.
    pub fn from_block(outcome: Outcome, block: &ComplexMatrix) -> Result<Self> {
        let probability = block.trace().re;
        let conditional_state = if probability >= PROBABILITY_FLOOR {
            Some(DensityMatrix::from_computed(&block.scale_real(1.0 / probability))?)
        } else {
            None
        };
        Ok(Self {
            outcome,
            probability,
            conditional_state,
        })
    }

    pub fn state(&self) -> Result<&DensityMatrix> {
        self.conditional_state
            .as_ref()
            .ok_or(Error::ProbabilityBelowFloor {
                probability: self.probability,
            })
    }
}

fn check_pair(m: &KrausChannel, n: &KrausChannel, rho_s: &DensityMatrix) -> Result<usize> {
    let d = m.dim();
    if n.dim() != d || rho_s.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "switch needs channels and state of one dimension, got {}, {} and {}",
            d,
            n.dim(),
            rho_s.dim()
        )));
    }
    Ok(d)
}

/// `Σ_ij W_ij (ρ_S ⊗ ρ_C) W_ij†` with `W_ij = M_i N_j ⊗ |0⟩⟨0| + N_j M_i ⊗ |1⟩⟨1|`.
pub fn switch_state(
    m: &KrausChannel,
    n: &KrausChannel,
    rho_s: &DensityMatrix,
    rho_c: &DensityMatrix,
) -> Result<DensityMatrix> {
    let d = check_pair(m, n, rho_s)?;
    if rho_c.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "control must be a qubit, got dimension {}",
            rho_c.dim()
        )));
    }
    let p0 = ComplexMatrix::projector(&pauli::ket_zero());
    let p1 = ComplexMatrix::projector(&pauli::ket_one());
    let input = tensor(rho_s.matrix(), rho_c.matrix());
    let mut out = ComplexMatrix::zeros(2 * d, 2 * d);
    for mi in m.operators() {
        for nj in n.operators() {
            let w = &tensor(&(mi * nj), &p0) + &tensor(&(nj * mi), &p1);
            out += &input.conjugate_by(&w);
        }
    }
    DensityMatrix::from_computed(&out)
}

/// Builds the `A_xy` operators directly from commutator and anticommutator sums.
pub fn decompose(
    m: &KrausChannel,
    n: &KrausChannel,
    rho_s: &DensityMatrix,
) -> Result<SwitchDecomposition> {
    let d = check_pair(m, n, rho_s)?;
    let rho = rho_s.matrix();
    let mut a_pp = ComplexMatrix::zeros(d, d);
    let mut a_pm = ComplexMatrix::zeros(d, d);
    let mut a_mp = ComplexMatrix::zeros(d, d);
    let mut a_mm = ComplexMatrix::zeros(d, d);
    for mi in m.operators() {
        for nj in n.operators() {
            let anti = mi.anticommutator(nj);
            let comm = mi.commutator(nj);
            let anti_rho = &anti * rho;
            let comm_rho = &comm * rho;
            let anti_dag = anti.adjoint();
            let comm_dag = comm.adjoint();
            a_pp += &(&anti_rho * &anti_dag);
            a_pm += &(&anti_rho * &comm_dag);
            a_mp += &(&comm_rho * &anti_dag);
            a_mm += &(&comm_rho * &comm_dag);
        }
    }
    let [a_pp, a_pm, a_mp, a_mm] = [a_pp, a_pm, a_mp, a_mm].map(|a| a.scale_real(0.25));
    Ok(SwitchDecomposition {
        a_def: &a_pp + &a_mm,
        a_indef: &a_pp - &a_mm,
        a_pp,
        a_pm,
        a_mp,
        a_mm,
    })
}

/// `p(±) = tr A_±±`, conditional state `A_±± / tr A_±±`.
pub fn post_select(dec: &SwitchDecomposition, outcome: Outcome) -> Result<PostSelection> {
    PostSelection::from_block(outcome, dec.block(outcome, outcome))
}

/// Projects the control of a system ⊗ control state onto `|±⟩`.
pub fn post_select_joint(joint: &DensityMatrix, outcome: Outcome) -> Result<PostSelection> {
    let d = joint.dim() / 2;
    if joint.dim() != 2 * d {
        return Err(Error::DimensionMismatch(format!(
            "joint state of dimension {} has no qubit control factor",
            joint.dim()
        )));
    }
    let projector = tensor(&ComplexMatrix::identity(d), &outcome.projector());
    let projected = &(&projector * joint.matrix()) * &projector;
    let block = partial_trace(&projected, &[d, 2], &[0])?;
    PostSelection::from_block(outcome, &block)
}
