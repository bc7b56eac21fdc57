//! Open control: the switch output's control qubit collides with a stream of
//! fresh thermal ancillas before post-selection.
//!
//! Two independent routes produce the joint system ⊗ control state after `n`
//! collisions:
//!
//! * [`Collider`] evolves system ⊗ control ⊗ ancilla with the exact unitary
//!   `exp(-iτ H_tot)` and traces the ancilla out, one collision at a time.
//! * [`analytic_state`] writes the state down directly from the switch
//!   decomposition and the damping coefficients in [`BCoefficients`].
//!
//! Control and ancillas share `H = -ω σx / 2` and couple through the
//! excitation-conserving `V = g/2 (σz σz + σy σy)`.

use std::fmt;

use log::warn;
use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::linalg::{
    partial_trace, pauli, tensor, tensor_all, unitary_evolution, ComplexMatrix, DensityMatrix,
};
use crate::switch::{control_ketbra, post_select_joint, Outcome, PostSelection, SwitchDecomposition};

/// Collisions must stay short: `gτ` above this is rejected.
pub const MAX_GTAU: f64 = 0.5;
/// `gτ` above this triggers a warning.
pub const WARN_GTAU: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Z,
}

impl Axis {
    fn pauli(self) -> ComplexMatrix {
        match self {
            Axis::X => pauli::x(),
            Axis::Z => pauli::z(),
        }
    }
}

/// `tanh(βω/2)`; an infinite β gives exactly 1.
pub fn thermal_bias(beta: f64, omega: f64) -> f64 {
    if beta.is_infinite() {
        if omega > 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (beta * omega / 2.0).tanh()
    }
}

/// Gibbs state of `H = -ω σ_axis / 2`, i.e. `(1 + tanh(βω/2) σ_axis) / 2`.
pub fn thermal_qubit(beta: f64, omega: f64, axis: Axis) -> Result<DensityMatrix> {
    if beta.is_nan() || beta < 0.0 {
        return Err(invalid("beta", format!("inverse temperature must be >= 0, got {beta}")));
    }
    let f = thermal_bias(beta, omega);
    let rho = &ComplexMatrix::identity(2) + &axis.pauli().scale_real(f);
    DensityMatrix::from_computed(&rho.scale_real(0.5))
}

/// `H_C = H_E = -ω σx / 2`
pub fn control_hamiltonian(omega: f64) -> ComplexMatrix {
    pauli::x().scale_real(-omega / 2.0)
}

/// `V_CE = g/2 (σz ⊗ σz + σy ⊗ σy)`
pub fn interaction(g: f64) -> ComplexMatrix {
    let zz = tensor(&pauli::z(), &pauli::z());
    let yy = tensor(&pauli::y(), &pauli::y());
    (&zz + &yy).scale_real(g / 2.0)
}

/// `‖[H_C + H_E, V_CE]‖_F`, zero for strict energy conservation.
pub fn energy_conservation_residual(omega: f64, g: f64) -> f64 {
    let id = ComplexMatrix::identity(2);
    let h = control_hamiltonian(omega);
    let local = &tensor(&h, &id) + &tensor(&id, &h);
    local.commutator(&interaction(g)).frobenius_norm()
}

#[derive(Clone, Debug)]
pub struct CollisionParams {
    /// Control and ancilla gap ω.
    pub omega: f64,
    /// Coupling strength g.
    pub g: f64,
    /// Collision duration τ.
    pub tau: f64,
    /// Ancilla inverse temperature; `f64::INFINITY` means ground-state ancillas.
    pub beta_e: f64,
    /// Number of collisions.
    pub n: u32,
    /// System Hamiltonian.
    pub h_s: ComplexMatrix,
}

impl CollisionParams {
    pub fn new(omega: f64, g: f64, tau: f64, beta_e: f64, n: u32, h_s: ComplexMatrix) -> Result<Self> {
        let p = Self {
            omega,
            g,
            tau,
            beta_e,
            n,
            h_s,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with a trivial system Hamiltonian of dimension `d_s`.
    pub fn free_system(omega: f64, g: f64, tau: f64, beta_e: f64, n: u32, d_s: usize) -> Result<Self> {
        Self::new(omega, g, tau, beta_e, n, ComplexMatrix::zeros(d_s, d_s))
    }

    pub fn with_n(&self, n: u32) -> Self {
        Self { n, ..self.clone() }
    }

    pub fn with_beta(&self, beta_e: f64) -> Self {
        Self {
            beta_e,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega.is_finite() && self.omega >= 0.0) {
            return Err(invalid("omega", format!("gap must be finite and >= 0, got {}", self.omega)));
        }
        if !(self.g.is_finite() && self.g >= 0.0) {
            return Err(invalid("g", format!("coupling must be finite and >= 0, got {}", self.g)));
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(invalid("tau", format!("collision time must be > 0, got {}", self.tau)));
        }
        let gtau = self.gtau();
        if gtau >= MAX_GTAU {
            return Err(invalid("g*tau", format!("{gtau} is not a short collision (limit {MAX_GTAU})")));
        }
        if gtau > WARN_GTAU {
            warn!("g*tau = {gtau} is large for a collisional model");
        }
        if self.beta_e.is_nan() || self.beta_e < 0.0 {
            return Err(invalid("beta_e", format!("must be >= 0, got {}", self.beta_e)));
        }
        if !self.h_s.is_square() {
            return Err(invalid("h_s", "system Hamiltonian must be square"));
        }
        let deviation = self.h_s.hermiticity_error();
        if deviation > crate::linalg::HERMITIAN_INPUT_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }

    pub fn gtau(&self) -> f64 {
        self.g * self.tau
    }

    pub fn f_e(&self) -> f64 {
        thermal_bias(self.beta_e, self.omega)
    }

    pub fn system_dim(&self) -> usize {
        self.h_s.rows()
    }

    /// `U_S^n = exp(-i n τ H_S)`
    pub fn system_propagator(&self) -> Result<ComplexMatrix> {
        unitary_evolution(&self.h_s, self.n as f64 * self.tau)
    }
}

/// Weights of the definite-order and interference parts of the post-selected blocks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BCoefficients {
    pub b_def_plus: f64,
    pub b_def_minus: f64,
    pub b_indef_plus: f64,
    pub b_indef_minus: f64,
    pub f_e: f64,
}

impl BCoefficients {
    /// `b_def^± = 1 ± f_E (1 − cos^{2n} gτ)`, `b_indef^± = ± cos^{2n} gτ`.
    pub fn compute(n: u32, f_e: f64, gtau: f64) -> Self {
        let decay = gtau.cos().powi(i32::try_from(2 * u64::from(n)).unwrap_or(i32::MAX));
        Self {
            b_def_plus: 1.0 + f_e * (1.0 - decay),
            b_def_minus: (1.0 - f_e) + f_e * decay,
            b_indef_plus: decay,
            b_indef_minus: -decay,
            f_e,
        }
    }

    pub fn def(&self, outcome: Outcome) -> f64 {
        match outcome {
            Outcome::Plus => self.b_def_plus,
            Outcome::Minus => self.b_def_minus,
        }
    }

    pub fn indef(&self, outcome: Outcome) -> f64 {
        match outcome {
            Outcome::Plus => self.b_indef_plus,
            Outcome::Minus => self.b_indef_minus,
        }
    }

    /// `½ [b_def^± + b_indef^± tr A_indef]`
    pub fn probability(&self, outcome: Outcome, indefinite_weight: f64) -> f64 {
        0.5 * (self.def(outcome) + self.indef(outcome) * indefinite_weight)
    }
}

/// `cos^n(gτ)`, the per-collision damping of control coherence, raised to `n`.
pub fn coherence_decay(n: u32, gtau: f64) -> f64 {
    gtau.cos().powi(n as i32)
}

pub fn b_coefficients(p: &CollisionParams) -> BCoefficients {
    BCoefficients::compute(p.n, p.f_e(), p.gtau())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    BruteForce,
    Analytic,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::BruteForce => "brute_force",
            Provenance::Analytic => "analytic",
        })
    }
}

/// Joint system ⊗ control state after `n` collisions.
#[derive(Clone, Debug)]
pub struct OpenSwitchState {
    pub joint: DensityMatrix,
    pub n: u32,
    pub provenance: Provenance,
}

impl OpenSwitchState {
    pub fn new(joint: DensityMatrix, n: u32, provenance: Provenance) -> Result<Self> {
        if !joint.dim().is_multiple_of(2) {
            return Err(Error::DimensionMismatch(format!(
                "joint state of dimension {} has no qubit control factor",
                joint.dim()
            )));
        }
        Ok(Self {
            joint,
            n,
            provenance,
        })
    }

    pub fn system_dim(&self) -> usize {
        self.joint.dim() / 2
    }

    pub fn control(&self) -> Result<DensityMatrix> {
        let d = self.system_dim();
        DensityMatrix::from_computed(&partial_trace(self.joint.matrix(), &[d, 2], &[1])?)
    }

    pub fn system(&self) -> Result<DensityMatrix> {
        let d = self.system_dim();
        DensityMatrix::from_computed(&partial_trace(self.joint.matrix(), &[d, 2], &[0])?)
    }

    /// `tr(ρ_C H_C)`
    pub fn control_energy(&self, omega: f64) -> Result<f64> {
        Ok(self.control()?.expectation(&control_hamiltonian(omega)))
    }

    pub fn post_select(&self, outcome: Outcome) -> Result<PostSelection> {
        post_select_joint(&self.joint, outcome)
    }
}

/// Energy bookkeeping for one collision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CollisionEnergetics {
    /// `ΔU_C = tr[(ρ_C' − ρ_C) H_C]`
    pub control: f64,
    /// `ΔU_E = tr[(ρ_E' − Θ_E) H_E]`
    pub environment: f64,
}

/// Exact per-collision propagator for system ⊗ control ⊗ ancilla.
#[derive(Clone, Debug)]
pub struct Collider {
    d_s: usize,
    omega: f64,
    propagator: ComplexMatrix,
    ancilla: DensityMatrix,
}

impl Collider {
    pub fn new(p: &CollisionParams) -> Result<Self> {
        p.validate()?;
        let d_s = p.system_dim();
        let id_s = ComplexMatrix::identity(d_s);
        let id2 = ComplexMatrix::identity(2);
        let h_c = control_hamiltonian(p.omega);
        let mut h_tot = tensor_all([&p.h_s, &id2, &id2]);
        h_tot += &tensor_all([&id_s, &h_c, &id2]);
        h_tot += &tensor_all([&id_s, &id2, &h_c]);
        h_tot += &tensor(&id_s, &interaction(p.g));
        Ok(Self {
            d_s,
            omega: p.omega,
            propagator: unitary_evolution(&h_tot, p.tau)?,
            ancilla: thermal_qubit(p.beta_e, p.omega, Axis::X)?,
        })
    }

    /// One collision: attach a fresh ancilla, evolve, trace it out.
    pub fn step(&self, state: &OpenSwitchState) -> Result<(OpenSwitchState, CollisionEnergetics)> {
        if state.system_dim() != self.d_s {
            return Err(Error::DimensionMismatch(format!(
                "collider built for system dimension {}, state has {}",
                self.d_s,
                state.system_dim()
            )));
        }
        let dims = [self.d_s, 2, 2];
        let full = tensor(state.joint.matrix(), self.ancilla.matrix()).conjugate_by(&self.propagator);
        let joint = DensityMatrix::from_computed(&partial_trace(&full, &dims, &[0, 1])?)?;
        let ancilla_out = partial_trace(&full, &dims, &[2])?;

        let h = control_hamiltonian(self.omega);
        let before = state.control_energy(self.omega)?;
        let next = OpenSwitchState::new(joint, state.n + 1, Provenance::BruteForce)?;
        let energetics = CollisionEnergetics {
            control: next.control_energy(self.omega)? - before,
            environment: (&(&ancilla_out - self.ancilla.matrix()) * &h).trace().re,
        };
        Ok((next, energetics))
    }

    /// Runs `n` collisions, calling `observe` after each.
    pub fn run(
        &self,
        initial: &OpenSwitchState,
        n: u32,
        mut observe: impl FnMut(&OpenSwitchState, &CollisionEnergetics),
    ) -> Result<OpenSwitchState> {
        let mut state = OpenSwitchState {
            provenance: Provenance::BruteForce,
            ..initial.clone()
        };
        for _ in 0..n {
            let (next, energetics) = self.step(&state)?;
            observe(&next, &energetics);
            state = next;
        }
        Ok(state)
    }
}

/// Single brute-force collision.
pub fn collide_once(state: &OpenSwitchState, p: &CollisionParams) -> Result<OpenSwitchState> {
    if state.provenance != Provenance::BruteForce {
        return Err(invalid(
            "provenance",
            "collide_once continues brute-force trajectories only",
        ));
    }
    Ok(Collider::new(p)?.step(state)?.0)
}

/// Brute-force joint state after `p.n` collisions from the `|+⟩`-control switch output.
pub fn brute_force_state(dec: &SwitchDecomposition, p: &CollisionParams) -> Result<OpenSwitchState> {
    let initial = OpenSwitchState::new(dec.assemble_plus()?, 0, Provenance::BruteForce)?;
    Collider::new(p)?.run(&initial, p.n, |_, _| {})
}

/// Every block of the decomposition conjugated by `U`.
pub fn evolve_decomposition(dec: &SwitchDecomposition, u: &ComplexMatrix) -> SwitchDecomposition {
    SwitchDecomposition {
        a_pp: dec.a_pp.conjugate_by(u),
        a_pm: dec.a_pm.conjugate_by(u),
        a_mp: dec.a_mp.conjugate_by(u),
        a_mm: dec.a_mm.conjugate_by(u),
        a_def: dec.a_def.conjugate_by(u),
        a_indef: dec.a_indef.conjugate_by(u),
    }
}

/// The damped blocks `B_xy(n)` of the joint state.
#[derive(Clone, Debug)]
pub struct DampedBlocks {
    pub b_pp: ComplexMatrix,
    pub b_pm: ComplexMatrix,
    pub b_mm: ComplexMatrix,
    /// Decomposition evolved by `U_S^n`.
    pub evolved: SwitchDecomposition,
    pub coefficients: BCoefficients,
}

impl DampedBlocks {
    pub fn diagonal(&self, outcome: Outcome) -> &ComplexMatrix {
        match outcome {
            Outcome::Plus => &self.b_pp,
            Outcome::Minus => &self.b_mm,
        }
    }
}

pub fn damped_blocks(dec: &SwitchDecomposition, p: &CollisionParams) -> Result<DampedBlocks> {
    p.validate()?;
    if p.system_dim() != dec.dim() {
        return Err(Error::DimensionMismatch(format!(
            "system Hamiltonian has dimension {}, decomposition {}",
            p.system_dim(),
            dec.dim()
        )));
    }
    let evolved = evolve_decomposition(dec, &p.system_propagator()?);
    let coefficients = b_coefficients(p);
    let diag = |o: Outcome| {
        &evolved.a_def.scale_real(coefficients.def(o) / 2.0)
            + &evolved.a_indef.scale_real(coefficients.indef(o) / 2.0)
    };
    let phase = C64::from_polar(coherence_decay(p.n, p.gtau()), p.n as f64 * p.tau * p.omega);
    Ok(DampedBlocks {
        b_pp: diag(Outcome::Plus),
        b_mm: diag(Outcome::Minus),
        b_pm: evolved.a_pm.scale(phase),
        evolved,
        coefficients,
    })
}

/// Closed-form joint state `Σ B_xy(n) ⊗ |x⟩⟨y|`.
pub fn analytic_state(dec: &SwitchDecomposition, p: &CollisionParams) -> Result<OpenSwitchState> {
    let blocks = damped_blocks(dec, p)?;
    let d = dec.dim();
    let mut joint = ComplexMatrix::zeros(2 * d, 2 * d);
    joint += &tensor(&blocks.b_pp, &control_ketbra(Outcome::Plus, Outcome::Plus));
    joint += &tensor(&blocks.b_pm, &control_ketbra(Outcome::Plus, Outcome::Minus));
    joint += &tensor(&blocks.b_pm.adjoint(), &control_ketbra(Outcome::Minus, Outcome::Plus));
    joint += &tensor(&blocks.b_mm, &control_ketbra(Outcome::Minus, Outcome::Minus));
    OpenSwitchState::new(DensityMatrix::from_computed(&joint)?, p.n, Provenance::Analytic)
}

/// Closed-form post-selection after `p.n` collisions.
pub fn post_select_open(
    dec: &SwitchDecomposition,
    p: &CollisionParams,
    outcome: Outcome,
) -> Result<PostSelection> {
    let blocks = damped_blocks(dec, p)?;
    PostSelection::from_block(outcome, blocks.diagonal(outcome))
}
