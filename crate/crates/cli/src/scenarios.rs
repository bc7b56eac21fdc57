//! One function per scenario, each producing a [`Table`] ordered by grid index.

use rayon::prelude::*;

use qswitch_core::collision::{b_coefficients, BCoefficients};
use qswitch_core::fridge::{self, FridgeParams};
use qswitch_core::monitoring::MonitoringSwitchParams;
use qswitch_core::switch::post_select_joint;
use qswitch_core::verify::quick_suite;
use qswitch_core::{
    available_information, brute_force_state, decompose, heat_to_control, information_curve, post_select_open,
    switch_state, trace_distance, von_neumann_entropy, CollisionParams, DensityMatrix, Outcome, PostSelection,
};

use crate::config::{invalid, Scenario, ScenarioConfig, Section};
use crate::csv::{Cell, Table};
use crate::error::CliError;
use crate::presets;

type Result<T> = std::result::Result<T, CliError>;

const UNITS: &str = "units: energies and frequencies in omega_s = 1, inverse temperatures in 1/omega_s, entropy and information in nats";

/// Result of a scenario: the table and, for `verify`, the failed checks.
pub struct Run {
    pub table: Table,
    pub failures: Vec<String>,
}

pub fn run(cfg: &ScenarioConfig, seed: u64) -> Result<Run> {
    let mut failures = Vec::new();
    let mut table = match cfg.scenario {
        Scenario::Switch => switch(cfg)?,
        Scenario::SweepB => sweep_b(cfg)?,
        Scenario::MonitoringInfo => monitoring_info(cfg)?,
        Scenario::FridgeCop => fridge_cop(cfg)?,
        Scenario::FridgeCopPrime => fridge_cop_prime(cfg)?,
        Scenario::RefrigerationRegion => refrigeration_region(cfg)?,
        Scenario::ControlHeat => control_heat(cfg)?,
        Scenario::Verify => verify(seed, &mut failures)?,
    };
    cfg.check_all_used()?;
    let mut header = vec![format!("qswitch scenario = {}", cfg.scenario), format!("seed = {seed}")];
    header.extend(cfg.parameters.echo());
    header.extend(cfg.grid.echo());
    header.push(UNITS.to_string());
    header.append(&mut table.comments);
    table.comments = header;
    Ok(Run { table, failures })
}

fn outcome_cell(o: Outcome) -> Cell {
    Cell::Text(match o {
        Outcome::Plus => "plus",
        Outcome::Minus => "minus",
    })
}

/// `g` from `g_tau` and `tau` (default 1).
fn coupling(p: &Section) -> Result<(f64, f64)> {
    let tau = p.f64_or("tau", 1.0)?;
    if !(tau.is_finite() && tau > 0.0) {
        return Err(invalid("parameters.tau", "must be positive").into());
    }
    Ok((p.f64("g_tau")? / tau, tau))
}

fn switch(cfg: &ScenarioConfig) -> Result<Table> {
    let p = &cfg.parameters;
    let required = |key: &str| {
        p.value(key)
            .cloned()
            .ok_or_else(|| CliError::from(crate::config::ConfigError::Missing(format!("parameters.{key}"))))
    };
    let m = presets::channel(&required("m")?, "parameters.m")?;
    let n_ch = presets::channel(&required("n")?, "parameters.n")?;
    let rho_s = presets::state(&required("rho_s")?, "parameters.rho_s")?;
    let rho_c = match p.value("rho_c") {
        Some(v) => presets::state(v, "parameters.rho_c")?,
        None => DensityMatrix::pure(&qswitch_core::pauli::ket_plus())?,
    };
    let h_s = match p.value("h_s") {
        Some(v) => presets::hamiltonian(v, "parameters.h_s")?,
        None => qswitch_core::ComplexMatrix::zeros(rho_s.dim(), rho_s.dim()),
    };
    let omega = p.f64_or("omega", 1.0)?;
    let (g, tau) = coupling(p)?;
    let beta_e = p.f64("beta_e")?;
    let brute = match p.str_opt("method")?.unwrap_or("analytic") {
        "analytic" => false,
        "brute_force" => true,
        other => {
            return Err(invalid("parameters.method", format!("`{other}` is neither analytic nor brute_force")).into())
        }
    };
    let ns = cfg.grid.u32_grid("n")?;

    let dec = decompose(&m, &n_ch, &rho_s)?;
    let plus = DensityMatrix::pure(&qswitch_core::pauli::ket_plus())?;
    let control_is_plus = trace_distance(&rho_c, &plus)? < 1e-12;
    if !control_is_plus && ns.iter().any(|&k| k > 0) {
        return Err(CliError::Invariant(
            "parameters.rho_c: collisions are modelled for a |+> control only; use n = 0 for other control states"
                .into(),
        ));
    }
    let base = CollisionParams::new(omega, g, tau, beta_e, 0, h_s)?;

    let d = rho_s.dim();
    let mut columns = vec!["n", "outcome", "p_post", "entropy (nats)", "info (nats)", "heat_to_control (omega_s)"];
    let names: Vec<String> = (0..d)
        .flat_map(|r| (0..d).flat_map(move |c| [format!("rho_{r}{c}_re"), format!("rho_{r}{c}_im")]))
        .collect();
    columns.extend(names.iter().map(String::as_str));
    let mut table = Table::new(&columns);
    table.comment(format!(
        "method = {}",
        if brute { "brute_force" } else { "analytic" }
    ));

    let rows: Vec<Vec<Vec<Cell>>> = ns
        .par_iter()
        .map(|&k| -> Result<Vec<Vec<Cell>>> {
            let pk = base.with_n(k);
            let posts: Vec<PostSelection> = if !control_is_plus {
                let joint = switch_state(&m, &n_ch, &rho_s, &rho_c)?;
                Outcome::BOTH
                    .iter()
                    .map(|&o| post_select_joint(&joint, o))
                    .collect::<qswitch_core::Result<_>>()?
            } else if brute {
                let state = brute_force_state(&dec, &pk)?;
                Outcome::BOTH
                    .iter()
                    .map(|&o| state.post_select(o))
                    .collect::<qswitch_core::Result<_>>()?
            } else {
                Outcome::BOTH
                    .iter()
                    .map(|&o| post_select_open(&dec, &pk, o))
                    .collect::<qswitch_core::Result<_>>()?
            };
            let heat = heat_to_control(&dec, &pk)?;
            posts
                .into_iter()
                .map(|post| {
                    let mut row = vec![k.into(), outcome_cell(post.outcome), post.probability.into()];
                    match &post.conditional_state {
                        Some(rho) => {
                            row.push(von_neumann_entropy(rho)?.into());
                            row.push(available_information(rho)?.into());
                            row.push(heat.into());
                            for r in 0..d {
                                for c in 0..d {
                                    let z = rho.matrix()[(r, c)];
                                    row.push(z.re.into());
                                    row.push(z.im.into());
                                }
                            }
                        }
                        None => {
                            row.extend([Cell::Missing, Cell::Missing, heat.into()]);
                            row.extend(std::iter::repeat_n(Cell::Missing, 2 * d * d));
                        }
                    }
                    Ok(row)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    for row in rows.into_iter().flatten() {
        table.push(row);
    }
    Ok(table)
}

fn sweep_b(cfg: &ScenarioConfig) -> Result<Table> {
    let p = &cfg.parameters;
    let (g, tau) = coupling(p)?;
    let omega = p.f64_or("omega", 1.0)?;
    let ns = cfg.grid.u32_grid("n")?;
    let betas = cfg.grid.f64_grid_or("beta_e", &[0.0, 1.0, 10.0])?;
    let mut table = Table::new(&[
        "n",
        "beta_e (1/omega_s)",
        "b_def_plus",
        "b_def_minus",
        "b_indef_plus",
        "b_indef_minus",
        "abs_b_indef",
    ]);
    for &beta in &betas {
        for &k in &ns {
            let b: BCoefficients = b_coefficients(&CollisionParams::free_system(omega, g, tau, beta, k, 2)?);
            table.push(vec![
                k.into(),
                beta.into(),
                b.b_def_plus.into(),
                b.b_def_minus.into(),
                b.b_indef_plus.into(),
                b.b_indef_minus.into(),
                b.b_indef_plus.abs().into(),
            ]);
        }
    }
    Ok(table)
}

fn monitoring_info(cfg: &ScenarioConfig) -> Result<Table> {
    let p = &cfg.parameters;
    let omega_s = p.f64_or("omega_s", 1.0)?;
    let omega = p.f64_or("omega", 1.0)?;
    let (g, tau) = coupling(p)?;
    let eps = cfg.grid.f64_grid("eps")?;
    let ns = cfg.grid.u32_grid("n")?;
    let betas = cfg.grid.f64_grid_or("beta", &[0.1, 10.0])?;
    let base = MonitoringSwitchParams::qubit_example(0.0, omega_s, omega, g, tau, betas[0], 0)?;
    let mut table = Table::new(&[
        "eps",
        "n",
        "beta (1/omega_s)",
        "outcome",
        "p_post",
        "info (nats)",
    ]);
    table.comment("rho_s = |+><+|, monitorings of sigma_z then sigma_x, H_S = -omega_s sigma_x / 2");
    for row in information_curve(&base, &eps, &ns, &betas)? {
        table.push(vec![
            row.eps.into(),
            row.n.into(),
            row.beta.into(),
            outcome_cell(row.outcome),
            row.p_post.into(),
            row.info_nats.into(),
        ]);
    }
    Ok(table)
}

struct FridgeBase {
    omega_s: f64,
    beta_hot: f64,
    beta_cold: f64,
    g: f64,
    tau: f64,
}

fn fridge_base(p: &Section) -> Result<FridgeBase> {
    let (g, tau) = coupling(p)?;
    Ok(FridgeBase {
        omega_s: p.f64_or("omega_s", 1.0)?,
        beta_hot: p.f64("beta_hot")?,
        beta_cold: p.f64("beta_cold")?,
        g,
        tau,
    })
}

impl FridgeBase {
    fn params(&self, n: u32, omega: f64, beta_e: f64) -> FridgeParams {
        FridgeParams {
            omega_s: self.omega_s,
            omega,
            beta_hot: self.beta_hot,
            beta_cold: self.beta_cold,
            g: self.g,
            tau: self.tau,
            n,
            beta_e,
        }
    }
}

fn ratio(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(a), Some(b)) if b != 0.0 => Some(a / b),
        _ => None,
    }
}

fn fridge_cop(cfg: &ScenarioConfig) -> Result<Table> {
    let base = fridge_base(&cfg.parameters)?;
    let omega = cfg.parameters.f64_or("omega", 1.0)?;
    let ns = cfg.grid.u32_grid("n")?;
    let betas = cfg.grid.f64_grid("beta_e")?;
    base.params(0, omega, betas[0]).validate()?;
    let mut table = Table::new(&[
        "n",
        "beta_e (1/omega_s)",
        "p_minus",
        "avg_heat (omega_s)",
        "work_erasure (omega_s)",
        "cop",
        "cop_ratio",
    ]);
    let cells: Vec<(f64, u32)> = betas.iter().flat_map(|&b| ns.iter().map(move |&k| (b, k))).collect();
    let rows = cells
        .par_iter()
        .map(|&(beta_e, k)| -> Result<Vec<Cell>> {
            let r = fridge::cycle_report(&base.params(k, omega, beta_e))?;
            let r0 = fridge::cycle_report(&base.params(0, omega, beta_e))?;
            Ok(vec![
                k.into(),
                beta_e.into(),
                r.p_minus.into(),
                r.avg_heat.into(),
                r.work_erasure.into(),
                r.cop.into(),
                ratio(r.cop, r0.cop).into(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

fn fridge_cop_prime(cfg: &ScenarioConfig) -> Result<Table> {
    let base = fridge_base(&cfg.parameters)?;
    let ns = cfg.grid.u32_grid("n")?;
    let omegas = cfg.grid.f64_grid("omega")?;
    let mut table = Table::new(&[
        "n",
        "omega (omega_s)",
        "control_heat (omega_s)",
        "cop",
        "cop_prime",
        "cop_prime_ratio",
    ]);
    table.comment("beta_e = beta_cold: the control collides with the cold bath");
    let beta_e = base.beta_cold;
    base.params(0, omegas[0], beta_e).validate()?;
    let cells: Vec<(f64, u32)> = omegas.iter().flat_map(|&w| ns.iter().map(move |&k| (w, k))).collect();
    let rows = cells
        .par_iter()
        .map(|&(omega, k)| -> Result<Vec<Cell>> {
            let r = fridge::cycle_report(&base.params(k, omega, beta_e))?;
            let r0 = fridge::cycle_report(&base.params(0, omega, beta_e))?;
            Ok(vec![
                k.into(),
                omega.into(),
                fridge::control_heat(&base.params(k, omega, beta_e))?.into(),
                r.cop.into(),
                r.cop_prime.into(),
                ratio(r.cop_prime, r0.cop_prime).into(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

fn refrigeration_region(cfg: &ScenarioConfig) -> Result<Table> {
    let omega_s = cfg.parameters.f64_or("omega_s", 1.0)?;
    if !(omega_s.is_finite() && omega_s > 0.0) {
        return Err(CliError::Invariant(format!("parameters.omega_s: must be > 0, got {omega_s}")));
    }
    let hot = cfg.grid.f64_grid("beta_hot")?;
    let cold = cfg.grid.f64_grid("beta_cold")?;
    if let Some(b) = hot.iter().chain(&cold).find(|b| !(b.is_finite() && **b >= 0.0)) {
        return Err(CliError::Invariant(format!("grid: inverse temperature {b} is not a finite non-negative number")));
    }
    let mut table = Table::new(&[
        "beta_hot (1/omega_s)",
        "beta_cold (1/omega_s)",
        "q_bar_zero (omega_s)",
        "refrigerates",
    ]);
    for cell in fridge::refrigeration_region(&hot, &cold, omega_s) {
        table.push(vec![
            cell.beta_hot.into(),
            cell.beta_cold.into(),
            cell.q_bar_zero.into(),
            cell.refrigerates.into(),
        ]);
    }
    Ok(table)
}

fn control_heat(cfg: &ScenarioConfig) -> Result<Table> {
    let p = &cfg.parameters;
    let (g, tau) = coupling(p)?;
    let omega_s = p.f64_or("omega_s", 1.0)?;
    let beta_hot = p.f64("beta_hot")?;
    let n = p.u32_opt("n")?.unwrap_or(100);
    let omegas = cfg.grid.f64_grid("omega")?;
    let colds = cfg.grid.f64_grid("beta_cold")?;
    let mut table = Table::new(&["omega (omega_s)", "beta_cold (1/omega_s)", "q_n (omega_s)"]);
    table.comment(format!("n = {n}, beta_e = beta_cold"));
    let cells: Vec<(f64, f64)> = omegas.iter().flat_map(|&w| colds.iter().map(move |&b| (w, b))).collect();
    let rows = cells
        .par_iter()
        .map(|&(omega, beta_cold)| -> Result<Vec<Cell>> {
            let fp = FridgeParams {
                omega_s,
                omega,
                beta_hot,
                beta_cold,
                g,
                tau,
                n,
                beta_e: beta_cold,
            };
            Ok(vec![omega.into(), beta_cold.into(), fridge::control_heat(&fp)?.into()])
        })
        .collect::<Result<Vec<_>>>()?;
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

fn verify(seed: u64, failures: &mut Vec<String>) -> Result<Table> {
    let mut table = Table::new(&["check", "error", "tolerance", "passed"]);
    for c in quick_suite(seed)? {
        if !c.passed() {
            failures.push(format!("{} error {:e} above {:e}", c.name, c.error, c.tolerance));
        }
        table.push(vec![Cell::Text(c.name), c.error.into(), c.tolerance.into(), c.passed().into()]);
    }
    Ok(table)
}
