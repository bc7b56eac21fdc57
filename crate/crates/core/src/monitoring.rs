//! Switch of two equal-strength monitorings of mutually unbiased observables.
//!
//! With `M^ε_O = (1−ε) id + ε Φ_O` the definite and indefinite parts of the
//! switch are
//!
//! ```text
//! A_def   = (1−ε)² ρ + ε(1−ε)(Φ_O + Φ_O′)(ρ) + ε² 1/d
//! A_indef = (1−ε)² ρ + ε(1−ε)(Φ_O + Φ_O′)(ρ) + ε² Herm Σ_ij ⟨o_i|o′_j⟩² ⟨o′_j|ρ|o_i⟩ |o_i⟩⟨o′_j|
//! ```
//!
//! and `tr A_indef = Re χ`.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::channels::{dephasing_channel, monitoring_channel, MonitoringStrength, Observable};
use crate::collision::{post_select_open, BCoefficients, CollisionParams, b_coefficients};
use crate::error::{Error, Result};
use crate::linalg::{pauli, ComplexMatrix, DensityMatrix};
use crate::switch::{decompose, Outcome, PostSelection};
use crate::thermo::available_information;

/// Tolerance of the mutual-unbiasedness check.
pub const MUB_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct MonitoringSwitchParams {
    pub eps: MonitoringStrength,
    pub obs: Observable,
    pub obs_prime: Observable,
    pub rho_s: DensityMatrix,
    pub collision: CollisionParams,
}

impl MonitoringSwitchParams {
    pub fn new(
        eps: MonitoringStrength,
        obs: Observable,
        obs_prime: Observable,
        rho_s: DensityMatrix,
        collision: CollisionParams,
    ) -> Result<Self> {
        let p = Self {
            eps,
            obs,
            obs_prime,
            rho_s,
            collision,
        };
        p.validate()?;
        Ok(p)
    }

    /// `ρ_S = |+⟩⟨+|`, σz then σx monitorings, `H_S = −ω_S σx / 2`.
    #[allow(clippy::too_many_arguments)]
    pub fn qubit_example(
        eps: f64,
        omega_s: f64,
        omega: f64,
        g: f64,
        tau: f64,
        beta_e: f64,
        n: u32,
    ) -> Result<Self> {
        let h_s = pauli::x().scale_real(-omega_s / 2.0);
        Self::new(
            MonitoringStrength::new(eps)?,
            Observable::pauli_z(),
            Observable::pauli_x(),
            DensityMatrix::pure(&pauli::ket_plus())?,
            CollisionParams::new(omega, g, tau, beta_e, n, h_s)?,
        )
    }

    pub fn dim(&self) -> usize {
        self.rho_s.dim()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        if self.obs.dim() != d || self.obs_prime.dim() != d || self.collision.system_dim() != d {
            return Err(Error::DimensionMismatch(format!(
                "state has dimension {d}, observables {} and {}, system Hamiltonian {}",
                self.obs.dim(),
                self.obs_prime.dim(),
                self.collision.system_dim()
            )));
        }
        self.collision.validate()?;
        let err = mub_error(&self.obs, &self.obs_prime)?;
        if err > MUB_TOL {
            return Err(Error::NotMutuallyUnbiased { error: err });
        }
        Ok(())
    }

    pub fn with_n(&self, n: u32) -> Self {
        Self {
            collision: self.collision.with_n(n),
            ..self.clone()
        }
    }

    pub fn with_beta(&self, beta_e: f64) -> Self {
        Self {
            collision: self.collision.with_beta(beta_e),
            ..self.clone()
        }
    }

    pub fn with_eps(&self, eps: MonitoringStrength) -> Self {
        Self { eps, ..self.clone() }
    }

    fn is_qubit_example(&self) -> bool {
        let tol = 1e-12;
        let plus = ComplexMatrix::projector(&pauli::ket_plus());
        let h = self.collision.h_s.clone();
        let matches = |a: &Observable, b: &Observable| {
            a.projectors()
                .iter()
                .zip(b.projectors())
                .all(|(p, q)| (p - q).max_abs() < tol)
        };
        self.dim() == 2
            && matches(&self.obs, &Observable::pauli_z())
            && matches(&self.obs_prime, &Observable::pauli_x())
            && (self.rho_s.matrix() - &plus).max_abs() < tol
            && h[(0, 0)].norm() < tol
            && h[(1, 1)].norm() < tol
            && (h[(0, 1)] - h[(1, 0)]).norm() < tol
            && h[(0, 1)].im.abs() < tol
    }
}

/// `max_ij | |⟨o_i|o′_j⟩| − 1/√d |`
pub fn mub_error(obs: &Observable, obs_prime: &Observable) -> Result<f64> {
    let a = obs.basis_vectors()?;
    let b = obs_prime.basis_vectors()?;
    let target = 1.0 / (obs.dim() as f64).sqrt();
    Ok(a.iter()
        .flat_map(|u| b.iter().map(move |v| (inner(u, v).norm() - target).abs()))
        .fold(0.0, f64::max))
}

fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn sandwich(u: &[C64], m: &ComplexMatrix, v: &[C64]) -> C64 {
    let d = u.len();
    (0..d)
        .flat_map(|r| (0..d).map(move |c| (r, c)))
        .map(|(r, c)| u[r].conj() * m[(r, c)] * v[c])
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiValue {
    pub chi: C64,
    /// `tr A_indef` from the switch decomposition.
    pub trace_a_indef: f64,
}

impl ChiValue {
    pub fn consistency_error(&self) -> f64 {
        (self.chi.re - self.trace_a_indef).abs()
    }
}

/// `χ = (1−ε)² + 2ε(1−ε) + ε²/d^{3/2} Σ e^{iφ_ij} ⟨o′_j|ρ|o_i⟩` in the given basis gauge.
pub fn chi_from_bases(eps: f64, basis: &[Vec<C64>], basis_prime: &[Vec<C64>], rho: &ComplexMatrix) -> C64 {
    let d = basis.len() as f64;
    let interference: C64 = basis
        .iter()
        .flat_map(|o| {
            basis_prime.iter().map(move |op| {
                let phase = inner(o, op) * d.sqrt();
                phase * sandwich(op, rho, o)
            })
        })
        .sum();
    C64::from((1.0 - eps).powi(2) + 2.0 * eps * (1.0 - eps)) + interference * (eps * eps / d.powf(1.5))
}

pub fn chi(params: &MonitoringSwitchParams) -> Result<ChiValue> {
    params.validate()?;
    let value = chi_from_bases(
        params.eps.value(),
        &params.obs.basis_vectors()?,
        &params.obs_prime.basis_vectors()?,
        params.rho_s.matrix(),
    );
    let m = monitoring_channel(&params.obs, params.eps);
    let n = monitoring_channel(&params.obs_prime, params.eps);
    let dec = decompose(&m, &n, &params.rho_s)?;
    Ok(ChiValue {
        chi: value,
        trace_a_indef: dec.indefinite_weight(),
    })
}

/// Closed-form `(A_def, A_indef)` of the monitoring switch.
pub fn monitoring_blocks(params: &MonitoringSwitchParams) -> Result<(ComplexMatrix, ComplexMatrix)> {
    params.validate()?;
    let eps = params.eps.value();
    let d = params.dim();
    let rho = params.rho_s.matrix();
    let dephased = &dephasing_channel(&params.obs).apply_operator(rho)
        + &dephasing_channel(&params.obs_prime).apply_operator(rho);
    let common = &rho.scale_real((1.0 - eps).powi(2)) + &dephased.scale_real(eps * (1.0 - eps));

    let basis = params.obs.basis_vectors()?;
    let basis_prime = params.obs_prime.basis_vectors()?;
    let mut cross = ComplexMatrix::zeros(d, d);
    for o in &basis {
        for op in &basis_prime {
            let overlap = inner(o, op);
            let weight = overlap * overlap * sandwich(op, rho, o);
            cross += &ComplexMatrix::outer(o, op).scale(weight);
        }
    }
    let a_def = &common + &ComplexMatrix::identity(d).scale_real(eps * eps / d as f64);
    let a_indef = &common + &cross.hermitian_part().scale_real(eps * eps);
    Ok((a_def, a_indef))
}

/// `ρⁿ_{S,±} ∝ U_Sⁿ [b_def^± A_def + b_indef^± A_indef] U_Sⁿ†` for any dimension.
pub fn conditional_state(params: &MonitoringSwitchParams, outcome: Outcome) -> Result<PostSelection> {
    let (a_def, a_indef) = monitoring_blocks(params)?;
    let b = b_coefficients(&params.collision);
    let block = (&a_def.scale_real(b.def(outcome)) + &a_indef.scale_real(b.indef(outcome))).scale_real(0.5);
    let u = params.collision.system_propagator()?;
    PostSelection::from_block(outcome, &block.conjugate_by(&u))
}

/// `p(±) = ½ [b_def^± + b_indef^± (1 − ε²/2)]` for the qubit example.
pub fn qubit_probability(b: &BCoefficients, eps: f64, outcome: Outcome) -> f64 {
    0.5 * (b.def(outcome) + b.indef(outcome) * (1.0 - eps * eps / 2.0))
}

/// Qubit fast path, diagonal in the `|±⟩` basis. Requires the configuration of
/// [`MonitoringSwitchParams::qubit_example`].
pub fn conditional_qubit_state(params: &MonitoringSwitchParams, outcome: Outcome) -> Result<PostSelection> {
    params.validate()?;
    if !params.is_qubit_example() {
        return Err(Error::InvalidObservable(
            "qubit fast path needs rho_s = |+><+|, sigma_z then sigma_x monitorings and H_S along sigma_x".into(),
        ));
    }
    let eps = params.eps.value();
    let b = b_coefficients(&params.collision);
    let (bd, bi) = (b.def(outcome), b.indef(outcome));
    let block = &ComplexMatrix::projector(&pauli::ket_plus()).scale_real(0.5 * (1.0 - eps / 2.0) * (bd + bi))
        + &ComplexMatrix::projector(&pauli::ket_minus()).scale_real(0.25 * eps * (bd + bi * (1.0 - eps)));
    PostSelection::from_block(outcome, &block)
}

/// Monitoring channels, switch, collisions and post-selection, without closed forms for the channels.
pub fn pipeline_conditional_state(params: &MonitoringSwitchParams, outcome: Outcome) -> Result<PostSelection> {
    params.validate()?;
    let m = monitoring_channel(&params.obs, params.eps);
    let n = monitoring_channel(&params.obs_prime, params.eps);
    let dec = decompose(&m, &n, &params.rho_s)?;
    post_select_open(&dec, &params.collision, outcome)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InfoRow {
    pub eps: f64,
    pub n: u32,
    pub beta: f64,
    pub outcome: Outcome,
    pub p_post: f64,
    /// `None` when the outcome is below the probability floor.
    pub info_nats: Option<f64>,
}

/// Available information of both conditional states over `eps × n × beta`,
/// ordered by grid index (eps outermost, outcome innermost).
pub fn information_curve(
    base: &MonitoringSwitchParams,
    eps: &[f64],
    n: &[u32],
    beta: &[f64],
) -> Result<Vec<InfoRow>> {
    base.validate()?;
    let eps = eps
        .iter()
        .map(|&e| MonitoringStrength::new(e))
        .collect::<Result<Vec<_>>>()?;
    let cells: Vec<(MonitoringStrength, u32, f64, Outcome)> = eps
        .iter()
        .flat_map(|&e| {
            n.iter().flat_map(move |&k| {
                beta.iter()
                    .flat_map(move |&b| Outcome::BOTH.into_iter().map(move |o| (e, k, b, o)))
            })
        })
        .collect();
    cells
        .into_par_iter()
        .map(|(e, k, b, o)| {
            let p = base.with_eps(e).with_n(k).with_beta(b);
            let post = conditional_state(&p, o)?;
            let info_nats = match &post.conditional_state {
                Some(rho) => Some(available_information(rho)?),
                None => None,
            };
            Ok(InfoRow {
                eps: e.value(),
                n: k,
                beta: b,
                outcome: o,
                p_post: post.probability,
                info_nats,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::trace_distance;
    use std::f64::consts::LN_2;

    fn example(eps: f64, beta: f64, n: u32) -> MonitoringSwitchParams {
        MonitoringSwitchParams::qubit_example(eps, 1.0, 1.0, 0.2, 1.0, beta, n).unwrap()
    }

    #[test]
    fn chi_examples() {
        assert!((chi(&example(0.0, 1.0, 0)).unwrap().chi - C64::from(1.0)).norm() < 1e-15);
        let c = chi(&example(1.0, 1.0, 0)).unwrap();
        assert!((c.chi.re - 0.5).abs() < 1e-14);
        assert!(c.consistency_error() < 1e-12);
        let c = chi(&example(0.5, 1.0, 0)).unwrap();
        assert!((c.chi.re - 0.875).abs() < 1e-14);
        assert!(c.consistency_error() < 1e-12);
    }

    #[test]
    fn chi_is_gauge_invariant() {
        let p = example(0.7, 1.0, 0);
        let rho = DensityMatrix::new(ComplexMatrix::from_fn(2, 2, |r, c| match (r, c) {
            (0, 0) => C64::from(0.6),
            (1, 1) => C64::from(0.4),
            (0, 1) => C64::new(0.1, -0.2),
            _ => C64::new(0.1, 0.2),
        }))
        .unwrap();
        let a = p.obs.basis_vectors().unwrap();
        let b = p.obs_prime.basis_vectors().unwrap();
        let reference = chi_from_bases(0.7, &a, &b, rho.matrix());
        let rephase = |basis: &[Vec<C64>], angles: &[f64]| -> Vec<Vec<C64>> {
            basis
                .iter()
                .zip(angles)
                .map(|(v, &t)| v.iter().map(|z| z * C64::from_polar(1.0, t)).collect())
                .collect()
        };
        let shifted = chi_from_bases(0.7, &rephase(&a, &[0.3, 2.1]), &rephase(&b, &[-1.2, 0.8]), rho.matrix());
        assert!((reference - shifted).norm() < 1e-14);
    }

    #[test]
    fn mub_violation_rejected() {
        let tilted = Observable::from_basis(
            vec![1.0, -1.0],
            &[
                vec![C64::from(0.6), C64::from(0.8)],
                vec![C64::from(0.8), C64::from(-0.6)],
            ],
        )
        .unwrap();
        let base = example(0.5, 1.0, 0);
        let err = MonitoringSwitchParams::new(base.eps, Observable::pauli_z(), tilted, base.rho_s, base.collision);
        assert!(matches!(err, Err(Error::NotMutuallyUnbiased { .. })));
    }

    #[test]
    fn closed_form_blocks_match_decomposition() {
        let obs_y = Observable::pauli_y();
        let rho = DensityMatrix::new(ComplexMatrix::from_fn(2, 2, |r, c| match (r, c) {
            (0, 0) => C64::from(0.7),
            (1, 1) => C64::from(0.3),
            (0, 1) => C64::new(0.2, 0.1),
            _ => C64::new(0.2, -0.1),
        }))
        .unwrap();
        let base = example(0.4, 1.0, 0);
        for (o, op) in [(Observable::pauli_z(), obs_y.clone()), (obs_y, Observable::pauli_x())] {
            let p = MonitoringSwitchParams::new(base.eps, o, op, rho.clone(), base.collision.clone()).unwrap();
            let (a_def, a_indef) = monitoring_blocks(&p).unwrap();
            let dec = decompose(
                &monitoring_channel(&p.obs, p.eps),
                &monitoring_channel(&p.obs_prime, p.eps),
                &p.rho_s,
            )
            .unwrap();
            assert!((&a_def - &dec.a_def).max_abs() < 1e-13);
            assert!((&a_indef - &dec.a_indef).max_abs() < 1e-13);
        }
    }

    #[test]
    fn fast_path_matches_general_and_pipeline() {
        for eps in [0.0, 0.3, 1.0] {
            for beta in [0.0, 0.1, 10.0] {
                for n in [0, 3, 40] {
                    let p = example(eps, beta, n);
                    for o in Outcome::BOTH {
                        let fast = conditional_qubit_state(&p, o).unwrap();
                        let general = conditional_state(&p, o).unwrap();
                        let pipe = pipeline_conditional_state(&p, o).unwrap();
                        assert!((fast.probability - general.probability).abs() < 1e-12);
                        assert!((fast.probability - pipe.probability).abs() < 1e-12);
                        let b = b_coefficients(&p.collision);
                        assert!((fast.probability - qubit_probability(&b, eps, o)).abs() < 1e-14);
                        if let (Some(a), Some(g), Some(c)) =
                            (&fast.conditional_state, &general.conditional_state, &pipe.conditional_state)
                        {
                            assert!(trace_distance(a, g).unwrap() < 1e-10);
                            assert!(trace_distance(a, c).unwrap() < 1e-10);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn fast_path_rejects_other_configurations() {
        let base = example(0.5, 1.0, 0);
        let swapped = MonitoringSwitchParams::new(
            base.eps,
            Observable::pauli_x(),
            Observable::pauli_z(),
            base.rho_s.clone(),
            base.collision.clone(),
        )
        .unwrap();
        assert!(conditional_qubit_state(&swapped, Outcome::Plus).is_err());
    }

    #[test]
    fn conditional_state_examples() {
        let s = conditional_qubit_state(&example(0.0, 1.0, 5), Outcome::Plus).unwrap();
        let plus = DensityMatrix::pure(&pauli::ket_plus()).unwrap();
        let minus = DensityMatrix::pure(&pauli::ket_minus()).unwrap();
        assert!(trace_distance(s.state().unwrap(), &plus).unwrap() < 1e-14);
        for eps in [0.2, 0.9] {
            let s = conditional_qubit_state(&example(eps, 1.0, 0), Outcome::Minus).unwrap();
            assert!(trace_distance(s.state().unwrap(), &minus).unwrap() < 1e-14);
            for n in [1, 17, 200] {
                let s = conditional_qubit_state(&example(eps, f64::INFINITY, n), Outcome::Minus).unwrap();
                let d = trace_distance(s.state().unwrap(), &minus).unwrap();
                assert!(d < 1e-12, "eps {eps} n {n}: {d:e}");
            }
        }
    }

    #[test]
    fn information_curve_examples() {
        let base = example(0.0, 1.0, 0);
        let rows = information_curve(&base, &[0.0, 1.0], &[0, 400], &[0.1, 10.0]).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 2 * 2);
        assert_eq!((rows[0].eps, rows[0].n, rows[0].beta, rows[0].outcome), (0.0, 0, 0.1, Outcome::Plus));
        for r in rows.iter().filter(|r| r.eps == 0.0 && r.outcome == Outcome::Plus) {
            assert!((r.info_nats.unwrap() - LN_2).abs() < 1e-12);
        }
        let at = |n: u32| {
            rows.iter()
                .find(|r| r.eps == 1.0 && r.n == n && r.beta == 10.0 && r.outcome == Outcome::Plus)
                .unwrap()
                .info_nats
                .unwrap()
        };
        assert!(at(0) > 0.01);
        assert!(at(400) < 1e-6);
    }
}
