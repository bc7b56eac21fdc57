//! Refrigerator driven by the switch of two cold thermalizations, with the
//! control exposed to a collisional environment before it is measured.
//!
//! The working qubit has `H_S = -ω_S σz / 2` and starts in the cold Gibbs
//! state. A `|−⟩` outcome sends it through a hot then a cold thermalization;
//! a `|+⟩` outcome only re-thermalizes it with the cold bath. Measurement
//! records are erased at the hot temperature.

use crate::channels::fridge_channel;
use crate::collision::{
    control_hamiltonian, thermal_bias, thermal_qubit, Axis, BCoefficients, CollisionParams, Collider,
    OpenSwitchState, Provenance,
};
use crate::error::{invalid, Result};
use crate::linalg::{pauli, tensor, ComplexMatrix, DensityMatrix};
use crate::switch::{switch_state, Outcome, PostSelection, PROBABILITY_FLOOR};
use crate::thermo::heat_from_coefficients;

/// Erasure work below this leaves the COP undefined.
pub const ERASURE_FLOOR: f64 = 1e-15;

#[derive(Clone, Debug, PartialEq)]
pub struct FridgeParams {
    /// System gap ω_S.
    pub omega_s: f64,
    /// Control and environment gap ω.
    pub omega: f64,
    pub beta_hot: f64,
    pub beta_cold: f64,
    pub g: f64,
    pub tau: f64,
    pub n: u32,
    /// Environment inverse temperature.
    pub beta_e: f64,
}

impl FridgeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega_s.is_finite() && self.omega_s > 0.0) {
            return Err(invalid("omega_s", format!("must be > 0, got {}", self.omega_s)));
        }
        if !(self.beta_hot.is_finite() && self.beta_hot > 0.0) {
            return Err(invalid("beta_hot", format!("must be > 0, got {}", self.beta_hot)));
        }
        if !(self.beta_cold.is_finite() && self.beta_cold > self.beta_hot) {
            return Err(invalid(
                "beta_cold",
                format!("must exceed beta_hot = {}, got {}", self.beta_hot, self.beta_cold),
            ));
        }
        self.collision_params().map(|_| ())
    }

    pub fn with_n(&self, n: u32) -> Self {
        Self { n, ..self.clone() }
    }

    pub fn gtau(&self) -> f64 {
        self.g * self.tau
    }

    pub fn system_hamiltonian(&self) -> ComplexMatrix {
        pauli::z().scale_real(-self.omega_s / 2.0)
    }

    pub fn collision_params(&self) -> Result<CollisionParams> {
        CollisionParams::new(self.omega, self.g, self.tau, self.beta_e, self.n, self.system_hamiltonian())
    }

    pub fn cold_state(&self) -> Result<DensityMatrix> {
        thermal_qubit(self.beta_cold, self.omega_s, Axis::Z)
    }

    pub fn hot_state(&self) -> Result<DensityMatrix> {
        thermal_qubit(self.beta_hot, self.omega_s, Axis::Z)
    }

    pub fn coefficients(&self) -> BCoefficients {
        BCoefficients::compute(self.n, thermal_bias(self.beta_e, self.omega), self.gtau())
    }

    /// `tr Θ_cold³ = 1 − ¾ sech²(β_cold ω_S / 2)`, the interference weight of this switch.
    pub fn indefinite_weight(&self) -> f64 {
        indefinite_weight(self.beta_cold, self.omega_s)
    }

    pub fn probability(&self, outcome: Outcome) -> f64 {
        self.coefficients().probability(outcome, self.indefinite_weight())
    }
}

fn sech2_half(beta: f64, omega_s: f64) -> f64 {
    let t = (beta * omega_s / 2.0).tanh();
    1.0 - t * t
}

pub fn indefinite_weight(beta_cold: f64, omega_s: f64) -> f64 {
    1.0 - 0.75 * sech2_half(beta_cold, omega_s)
}

/// `½ Θ ⊗ [1 + (1 − b_def^−) σx] − ½ b_indef^− Θ³ ⊗ σx`
pub fn fridge_joint_state(fp: &FridgeParams) -> Result<OpenSwitchState> {
    fp.validate()?;
    let theta = fp.cold_state()?;
    let theta3 = &(theta.matrix() * theta.matrix()) * theta.matrix();
    let b = fp.coefficients();
    let control = &ComplexMatrix::identity(2) + &pauli::x().scale_real(1.0 - b.b_def_minus);
    let joint = &tensor(theta.matrix(), &control).scale_real(0.5)
        - &tensor(&theta3, &pauli::x()).scale_real(0.5 * b.b_indef_minus);
    OpenSwitchState::new(DensityMatrix::from_computed(&joint)?, fp.n, Provenance::Analytic)
}

/// The same joint state built from the Kraus set, the switch and brute-force collisions.
pub fn fridge_pipeline_state(fp: &FridgeParams) -> Result<OpenSwitchState> {
    fp.validate()?;
    let theta = fp.cold_state()?;
    let channel = fridge_channel(&theta)?;
    let plus = DensityMatrix::pure(&pauli::ket_plus())?;
    let joint = switch_state(&channel, &channel, &theta, &plus)?;
    let initial = OpenSwitchState::new(joint, 0, Provenance::BruteForce)?;
    Collider::new(&fp.collision_params()?)?.run(&initial, fp.n, |_, _| {})
}

/// `ρ_{S,±} = Θ [b_def^± + b_indef^± Θ²] / (2 p(±))`
pub fn conditional_state(fp: &FridgeParams, outcome: Outcome) -> Result<PostSelection> {
    fp.validate()?;
    let theta = fp.cold_state()?;
    let b = fp.coefficients();
    let theta2 = theta.matrix() * theta.matrix();
    let block = &(theta.matrix()
        * &(&ComplexMatrix::identity(2).scale_real(b.def(outcome)) + &theta2.scale_real(b.indef(outcome))))
        .scale_real(0.5);
    PostSelection::from_block(outcome, block)
}

/// `q_n = −⅜ω sech² + ½ω b_def^− + ½ω b_indef^− (1 − ¾ sech²)` at `f_cold = tanh(β_cold ω / 2)`.
pub fn control_heat_closed_form(omega: f64, omega_s: f64, beta_cold: f64, gtau: f64, n: u32) -> f64 {
    let b = BCoefficients::compute(n, thermal_bias(beta_cold, omega), gtau);
    heat_from_coefficients(&b, omega, indefinite_weight(beta_cold, omega_s))
}

/// Heat drawn by the control from the cold bath; needs `β_E = β_cold`.
pub fn control_heat(fp: &FridgeParams) -> Result<f64> {
    fp.validate()?;
    if fp.beta_e != fp.beta_cold {
        return Err(invalid(
            "beta_e",
            format!(
                "control heat assumes the control collides with the cold bath (beta_e = beta_cold = {}), got {}",
                fp.beta_cold, fp.beta_e
            ),
        ));
    }
    Ok(control_heat_closed_form(fp.omega, fp.omega_s, fp.beta_cold, fp.gtau(), fp.n))
}

/// Average cold-bath heat per cycle without collisions.
pub fn q_bar_zero(beta_hot: f64, beta_cold: f64, omega_s: f64) -> f64 {
    let tc = (beta_cold * omega_s / 2.0).tanh();
    let th = (beta_hot * omega_s / 2.0).tanh();
    -omega_s * (tc - 3.0 * th) / (8.0 * ((beta_cold * omega_s).cosh() + 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CycleReport {
    pub p_minus: f64,
    pub p_plus: f64,
    /// `Q_{n,−}`; `None` when the `|−⟩` branch is below the probability floor.
    pub q_minus: Option<f64>,
    /// `Q_{n,+}`, zero by construction.
    pub q_plus: f64,
    /// `Q̄_n = p(−) Q_{n,−}`
    pub avg_heat: f64,
    pub work_erasure: f64,
    pub work_measure_plus: f64,
    pub work_measure_minus: f64,
    pub cop: Option<f64>,
    pub control_heat: f64,
    pub cop_prime: Option<f64>,
}

impl CycleReport {
    /// `Σ p(±) W_{n,±}`
    pub fn average_measurement_work(&self) -> f64 {
        self.p_plus * self.work_measure_plus + self.p_minus * self.work_measure_minus
    }
}

fn shannon_nats(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum()
}

pub fn cycle_report(fp: &FridgeParams) -> Result<CycleReport> {
    fp.validate()?;
    let h_s = fp.system_hamiltonian();
    let b = fp.coefficients();
    let weight = fp.indefinite_weight();
    let p_plus = b.probability(Outcome::Plus, weight);
    let p_minus = b.probability(Outcome::Minus, weight);

    let tc = (fp.beta_cold * fp.omega_s / 2.0).tanh();
    let th = (fp.beta_hot * fp.omega_s / 2.0).tanh();
    let s = 1.0 - tc * tc;
    let shielded = -fp.omega_s * b.b_indef_minus * tc * s / 8.0;
    let reset = 0.5 * fp.omega_s * (th - tc);
    let q_minus = (p_minus >= PROBABILITY_FLOOR).then(|| shielded / p_minus + reset);
    let avg_heat = shielded + p_minus * reset;

    let cold = fp.cold_state()?;
    let q_plus = match conditional_state(fp, Outcome::Plus)?.conditional_state {
        Some(rho) => {
            let warm_up = rho.matrix() - cold.matrix();
            let cool_down = cold.matrix() - rho.matrix();
            (&warm_up * &h_s).trace().re + (&cool_down * &h_s).trace().re
        }
        None => 0.0,
    };

    let h_c = control_hamiltonian(fp.omega);
    let control = DensityMatrix::from_computed(
        &(&Outcome::Plus.projector().scale_real(p_plus) + &Outcome::Minus.projector().scale_real(p_minus)),
    )?;
    let measurement_work = |o: Outcome| (&(&o.projector() - control.matrix()) * &h_c).trace().re;

    let work_erasure = shannon_nats(&[p_plus, p_minus]) / fp.beta_hot;
    let control_heat = control_heat_closed_form(fp.omega, fp.omega_s, fp.beta_cold, fp.gtau(), fp.n);
    let defined = p_minus > PROBABILITY_FLOOR && work_erasure > ERASURE_FLOOR;
    let cop = defined.then(|| avg_heat / work_erasure);
    Ok(CycleReport {
        p_minus,
        p_plus,
        q_minus,
        q_plus,
        avg_heat,
        work_erasure,
        work_measure_plus: measurement_work(Outcome::Plus),
        work_measure_minus: measurement_work(Outcome::Minus),
        cop,
        control_heat,
        cop_prime: cop.map(|c| c + control_heat / work_erasure),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionCell {
    pub beta_hot: f64,
    pub beta_cold: f64,
    pub q_bar_zero: f64,
    /// `Q̄_0 > 0` and `β_cold > β_hot`.
    pub refrigerates: bool,
}

/// Closed-control refrigeration condition over a `β_hot × β_cold` grid, row-major in `beta_hot`.
pub fn refrigeration_region(beta_hot: &[f64], beta_cold: &[f64], omega_s: f64) -> Vec<RegionCell> {
    beta_hot
        .iter()
        .flat_map(|&bh| {
            beta_cold.iter().map(move |&bc| {
                let q = q_bar_zero(bh, bc, omega_s);
                RegionCell {
                    beta_hot: bh,
                    beta_cold: bc,
                    q_bar_zero: q,
                    refrigerates: q > 0.0 && bc > bh,
                }
            })
        })
        .collect()
}
