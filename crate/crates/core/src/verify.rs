//! Oracle checks: closed forms against brute-force evaluation on seeded random inputs.

use rand::Rng;
use rayon::prelude::*;

use crate::channels::{dephasing_channel, monitoring_channel, MonitoringStrength, Observable};
use crate::collision::{analytic_state, CollisionParams, Collider, OpenSwitchState, Provenance};
use crate::error::Result;
use crate::fridge::{self, FridgeParams};
use crate::linalg::{pauli, trace_distance, ComplexMatrix, DensityMatrix};
use crate::monitoring::{self, MonitoringSwitchParams};
use crate::random::{random_channel, random_density, rng};
use crate::switch::{decompose, Outcome, SwitchDecomposition};
use crate::thermo::{entropy_production, heat_to_control};

pub const GTAU_GRID: [f64; 3] = [0.05, 0.1, 0.2];
pub const BETA_GRID: [f64; 4] = [0.0, 0.5, 1.0, 10.0];
pub const OMEGA_GRID: [f64; 3] = [0.5, 1.0, 2.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SystemHamiltonian {
    Zero,
    AlongZ,
    AlongX,
}

impl SystemHamiltonian {
    pub const ALL: [SystemHamiltonian; 3] = [Self::Zero, Self::AlongZ, Self::AlongX];

    /// `0`, `−ω_S σz / 2` or `−ω_S σx / 2`.
    pub fn matrix(self, omega_s: f64) -> ComplexMatrix {
        match self {
            Self::Zero => ComplexMatrix::zeros(2, 2),
            Self::AlongZ => pauli::z().scale_real(-omega_s / 2.0),
            Self::AlongX => pauli::x().scale_real(-omega_s / 2.0),
        }
    }
}

/// A random qubit channel pair with its input state.
#[derive(Clone, Debug)]
pub struct OracleCase {
    pub index: usize,
    pub decomposition: SwitchDecomposition,
}

pub fn random_cases(seed: u64, count: usize) -> Result<Vec<OracleCase>> {
    let mut r = rng(seed);
    (0..count)
        .map(|index| {
            let m = random_channel(2, r.random_range(1..=4), &mut r)?;
            let n = random_channel(2, r.random_range(1..=4), &mut r)?;
            let rho = random_density(2, &mut r)?;
            Ok(OracleCase {
                index,
                decomposition: decompose(&m, &n, &rho)?,
            })
        })
        .collect()
}

/// Every `(gτ, β_E, ω, H_S)` combination, with `τ = 1` and `ω_S = 1`.
pub fn parameter_grid(n: u32) -> Result<Vec<CollisionParams>> {
    let mut grid = Vec::new();
    for &gtau in &GTAU_GRID {
        for &beta in &BETA_GRID {
            for &omega in &OMEGA_GRID {
                for h in SystemHamiltonian::ALL {
                    grid.push(CollisionParams::new(omega, gtau, 1.0, beta, n, h.matrix(1.0))?);
                }
            }
        }
    }
    Ok(grid)
}

/// Worst-case discrepancies along one brute-force trajectory.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TrajectoryErrors {
    /// Trace distance between brute-force and closed-form joint states.
    pub state: f64,
    /// Closed-form heat against accumulated control energy.
    pub heat: f64,
    /// `|ΔU_C + ΔU_E|` per collision.
    pub energy_balance: f64,
    /// Smallest entropy production seen.
    pub min_entropy_production: f64,
}

impl TrajectoryErrors {
    fn merge(self, other: Self) -> Self {
        Self {
            state: self.state.max(other.state),
            heat: self.heat.max(other.heat),
            energy_balance: self.energy_balance.max(other.energy_balance),
            min_entropy_production: self.min_entropy_production.min(other.min_entropy_production),
        }
    }
}

/// Runs `p.n` brute-force collisions, comparing against the closed forms after every one.
pub fn trajectory_errors(dec: &SwitchDecomposition, p: &CollisionParams) -> Result<TrajectoryErrors> {
    let s0 = OpenSwitchState::new(dec.assemble_plus()?, 0, Provenance::BruteForce)?;
    let collider = Collider::new(p)?;
    let mut errors = TrajectoryErrors::default();
    let mut accumulated = 0.0;
    let mut failure = None;
    collider.run(&s0, p.n, |s, e| {
        let mut step = || -> Result<()> {
            accumulated += e.control;
            let pk = p.with_n(s.n);
            let analytic = analytic_state(dec, &pk)?;
            errors.state = errors.state.max(trace_distance(&s.joint, &analytic.joint)?);
            errors.heat = errors.heat.max((heat_to_control(dec, &pk)? - accumulated).abs());
            errors.energy_balance = errors.energy_balance.max((e.control + e.environment).abs());
            let report = entropy_production(&s0, s, &pk)?;
            errors.min_entropy_production = errors.min_entropy_production.min(report.entropy_production);
            Ok(())
        };
        if failure.is_none() {
            if let Err(err) = step() {
                failure = Some(err);
            }
        }
    })?;
    failure.map_or(Ok(errors), Err)
}

/// Worst case of [`trajectory_errors`] over `cases × parameter_grid(n_max)`.
pub fn grid_errors(cases: &[OracleCase], n_max: u32) -> Result<TrajectoryErrors> {
    let grid = parameter_grid(n_max)?;
    let jobs: Vec<(&OracleCase, &CollisionParams)> =
        cases.iter().flat_map(|c| grid.iter().map(move |p| (c, p))).collect();
    jobs.into_par_iter()
        .map(|(c, p)| trajectory_errors(&c.decomposition, p))
        .try_reduce(TrajectoryErrors::default, |a, b| Ok(a.merge(b)))
}

/// One named comparison against its bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub error: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.error.is_finite() && self.error <= self.tolerance
    }
}

/// Largest `|Re χ − tr A_indef|` over random qubit states and an ε grid.
pub fn chi_consistency(seed: u64, states: usize) -> Result<f64> {
    let mut r = rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..states {
        let rho = random_density(2, &mut r)?;
        for k in 0..=10 {
            let base = MonitoringSwitchParams::qubit_example(k as f64 / 10.0, 1.0, 1.0, 0.2, 1.0, 1.0, 0)?;
            let p = MonitoringSwitchParams { rho_s: rho.clone(), ..base };
            worst = worst.max(monitoring::chi(&p)?.consistency_error());
        }
    }
    Ok(worst)
}

/// Qubit closed-form conditional states against the channel pipeline on an `(ε, n, β)` grid.
pub fn qubit_pipeline_error(eps: &[f64], n: &[u32], beta: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &e in eps {
        for &k in n {
            for &b in beta {
                let p = MonitoringSwitchParams::qubit_example(e, 1.0, 1.0, 0.2, 1.0, b, k)?;
                for o in Outcome::BOTH {
                    let fast = monitoring::conditional_qubit_state(&p, o)?;
                    let pipe = monitoring::pipeline_conditional_state(&p, o)?;
                    worst = worst.max((fast.probability - pipe.probability).abs());
                    if let (Some(a), Some(c)) = (&fast.conditional_state, &pipe.conditional_state) {
                        worst = worst.max(trace_distance(a, c)?);
                    }
                }
            }
        }
    }
    Ok(worst)
}

/// `M^{ε′} ∘ M^ε` against `M^{ε+ε′−εε′}` on an 11×11 grid of strengths.
pub fn composition_error(seed: u64) -> Result<f64> {
    let mut r = rng(seed);
    let rho = random_density(2, &mut r)?;
    let mut worst: f64 = 0.0;
    for obs in [Observable::pauli_z(), Observable::pauli_x(), Observable::pauli_y()] {
        for i in 0..=10 {
            for j in 0..=10 {
                let a = MonitoringStrength::new(i as f64 / 10.0)?;
                let b = MonitoringStrength::new(j as f64 / 10.0)?;
                let composed = monitoring_channel(&obs, a).then(&monitoring_channel(&obs, b))?;
                let single = monitoring_channel(&obs, a.compose(b));
                let diff = &composed.apply(&rho)?.into_matrix() - &single.apply(&rho)?.into_matrix();
                worst = worst.max(diff.max_abs());
            }
        }
    }
    Ok(worst)
}

/// `Φ_O ∘ Φ_O′ (ρ)` against `1/d` for the qubit MUB pairs.
pub fn double_dephasing_error(seed: u64, states: usize) -> Result<f64> {
    let mut r = rng(seed);
    let pairs = [
        (Observable::pauli_z(), Observable::pauli_x()),
        (Observable::pauli_x(), Observable::pauli_y()),
        (Observable::pauli_y(), Observable::pauli_z()),
    ];
    let mut worst: f64 = 0.0;
    for _ in 0..states {
        let rho = random_density(2, &mut r)?;
        for (a, b) in &pairs {
            let out = dephasing_channel(b).apply(&dephasing_channel(a).apply(&rho)?)?;
            worst = worst.max((out.matrix() - DensityMatrix::maximally_mixed(2).matrix()).max_abs());
        }
    }
    Ok(worst)
}

/// Fridge closed-form joint state against the Kraus-set pipeline.
pub fn fridge_pipeline_error() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for n in [0, 1, 10, 40] {
        for beta_e in [0.0, 1.0, 1.5] {
            let fp = FridgeParams {
                omega_s: 1.0,
                omega: 1.0,
                beta_hot: 1.0,
                beta_cold: 1.5,
                g: 0.1,
                tau: 1.0,
                n,
                beta_e,
            };
            let a = fridge::fridge_joint_state(&fp)?;
            let b = fridge::fridge_pipeline_state(&fp)?;
            worst = worst.max(trace_distance(&a.joint, &b.joint)?);
        }
    }
    Ok(worst)
}

/// A fast subset of the oracle comparisons.
pub fn quick_suite(seed: u64) -> Result<Vec<Check>> {
    let cases = random_cases(seed, 4)?;
    let trajectory = grid_errors(&cases, 12)?;
    Ok(vec![
        Check {
            name: "analytic_vs_brute_force_state",
            error: trajectory.state,
            tolerance: 1e-8,
        },
        Check {
            name: "closed_form_heat_vs_control_energy",
            error: trajectory.heat,
            tolerance: 1e-8,
        },
        Check {
            name: "per_collision_energy_balance",
            error: trajectory.energy_balance,
            tolerance: 1e-10,
        },
        Check {
            name: "entropy_production_nonnegative",
            error: (-trajectory.min_entropy_production).max(0.0),
            tolerance: 1e-9,
        },
        Check {
            name: "chi_vs_indefinite_trace",
            error: chi_consistency(seed, 10)?,
            tolerance: 1e-10,
        },
        Check {
            name: "qubit_closed_form_vs_pipeline",
            error: qubit_pipeline_error(&[0.0, 0.25, 0.5, 0.75, 1.0], &[0, 1, 10, 50], &[0.1, 10.0])?,
            tolerance: 1e-10,
        },
        Check {
            name: "monitoring_composition_law",
            error: composition_error(seed)?,
            tolerance: 1e-10,
        },
        Check {
            name: "mub_double_dephasing",
            error: double_dephasing_error(seed, 20)?,
            tolerance: 1e-12,
        },
        Check {
            name: "fridge_closed_form_vs_pipeline",
            error: fridge_pipeline_error()?,
            tolerance: 1e-10,
        },
    ])
}
