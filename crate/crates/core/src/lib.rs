//! Quantum switch of two channels whose control qubit collides with a stream
//! of thermal qubits before being measured in the `|±⟩` basis.
//!
//! The crate provides both a brute-force collisional simulator and closed
//! forms for the joint state, post-selected states and heat, plus the two
//! applications built on them: a switch of weak measurements and a
//! switch-driven refrigerator.
//!
//! ```
//! use qswitch_core::{decompose, monitoring_channel, MonitoringStrength, Observable, DensityMatrix, pauli};
//!
//! let eps = MonitoringStrength::new(1.0).unwrap();
//! let m = monitoring_channel(&Observable::pauli_z(), eps);
//! let n = monitoring_channel(&Observable::pauli_x(), eps);
//! let dec = decompose(&m, &n, &DensityMatrix::pure(&pauli::ket_plus()).unwrap()).unwrap();
//! assert!((dec.indefinite_weight() - 0.5).abs() < 1e-12);
//! ```

pub mod channels;
pub mod collision;
pub mod error;
pub mod fridge;
pub mod linalg;
pub mod monitoring;
pub mod random;
#[cfg(test)]
mod properties;
pub mod switch;
pub mod thermo;
pub mod verify;

pub use channels::{
    dephasing_channel, fridge_channel, fridge_kraus, monitoring_channel, KrausChannel, MonitoringStrength,
    Observable,
};
pub use collision::{
    analytic_state, b_coefficients, brute_force_state, coherence_decay, collide_once, post_select_open,
    thermal_bias, thermal_qubit, Axis, BCoefficients, CollisionEnergetics, CollisionParams, Collider,
    OpenSwitchState, Provenance,
};
pub use error::{Error, Result};
pub use fridge::{cycle_report, refrigeration_region, CycleReport, FridgeParams, RegionCell};
pub use linalg::{
    hermitian_eigen, matrix_function, partial_trace, pauli, tensor, trace_distance, von_neumann_entropy,
    ComplexMatrix, DensityMatrix,
};
pub use monitoring::{chi, information_curve, ChiValue, InfoRow, MonitoringSwitchParams};
pub use num_complex::Complex64 as C64;
pub use switch::{decompose, post_select, switch_state, Outcome, PostSelection, SwitchDecomposition};
pub use thermo::{available_information, entropy_production, heat_to_control, ThermoReport};
