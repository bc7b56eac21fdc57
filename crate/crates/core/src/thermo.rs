//! Heat, entropy production and available information. All entropies in nats.

use log::warn;

use crate::channels::{dephasing_channel, Observable};
use crate::collision::{b_coefficients, BCoefficients, CollisionParams, OpenSwitchState};
use crate::error::{invalid, Error, Result};
use crate::linalg::{von_neumann_entropy, DensityMatrix};
use crate::switch::SwitchDecomposition;

/// Entropy production below `-ENTROPY_PRODUCTION_TOL` is reported as a violation.
pub const ENTROPY_PRODUCTION_TOL: f64 = 1e-9;

/// `Q = (ω/2) [(b_def^− − 1) + (b_indef^− + 1) tr A_indef]`, evaluated as
/// `(ω/2)(1 − cos^{2n} gτ)(tr A_indef − f_E)` so that it vanishes exactly at `n = 0`.
pub fn heat_from_coefficients(b: &BCoefficients, omega: f64, indefinite_weight: f64) -> f64 {
    0.5 * omega * (1.0 - b.b_indef_plus) * (indefinite_weight - b.f_e)
}

/// Total heat delivered to the control by `p.n` collisions.
pub fn heat_to_control(dec: &SwitchDecomposition, p: &CollisionParams) -> Result<f64> {
    p.validate()?;
    Ok(heat_from_coefficients(&b_coefficients(p), p.omega, dec.indefinite_weight()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermoReport {
    /// `Q_CE`, energy units.
    pub heat_to_control: f64,
    /// `S(ρ_SC^n) − S(ρ_SC^0)`
    pub entropy_change: f64,
    /// `β_E Q_CE`
    pub entropy_flux: f64,
    /// `ΔS − β_E Q`
    pub entropy_production: f64,
}

impl ThermoReport {
    pub fn is_second_law_consistent(&self) -> bool {
        self.entropy_production >= -ENTROPY_PRODUCTION_TOL
    }
}

/// Entropy balance between two joint states of the same trajectory.
pub fn entropy_production(
    initial: &OpenSwitchState,
    final_state: &OpenSwitchState,
    p: &CollisionParams,
) -> Result<ThermoReport> {
    if initial.system_dim() != final_state.system_dim() {
        return Err(Error::DimensionMismatch(format!(
            "states of system dimension {} and {}",
            initial.system_dim(),
            final_state.system_dim()
        )));
    }
    if final_state.n < initial.n {
        return Err(invalid("n", "final state precedes initial state"));
    }
    if !p.beta_e.is_finite() {
        return Err(invalid("beta_e", "entropy flux is undefined at zero temperature"));
    }
    let heat = final_state.control_energy(p.omega)? - initial.control_energy(p.omega)?;
    let entropy_change = von_neumann_entropy(&final_state.joint)? - von_neumann_entropy(&initial.joint)?;
    let entropy_flux = p.beta_e * heat;
    let report = ThermoReport {
        heat_to_control: heat,
        entropy_change,
        entropy_flux,
        entropy_production: entropy_change - entropy_flux,
    };
    if !report.is_second_law_consistent() {
        warn!(
            "negative entropy production {:.3e} after {} collisions",
            report.entropy_production, final_state.n
        );
    }
    Ok(report)
}

/// `ln d − S(ρ)`
pub fn available_information(rho: &DensityMatrix) -> Result<f64> {
    Ok((rho.dim() as f64).ln() - von_neumann_entropy(rho)?)
}

/// Relative entropy of coherence `S(Φ_O(ρ)) − S(ρ)`.
pub fn coherence(obs: &Observable, rho: &DensityMatrix) -> Result<f64> {
    let dephased = dephasing_channel(obs).apply(rho)?;
    Ok(von_neumann_entropy(&dephased)? - von_neumann_entropy(rho)?)
}
