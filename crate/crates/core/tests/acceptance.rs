//! Acceptance gate. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero when any criterion fails.

use std::f64::consts::LN_2;
use std::process::ExitCode;
use std::time::Instant;

use qswitch_core::channels::{fridge_channel, KrausChannel};
use qswitch_core::collision::b_coefficients;
use qswitch_core::fridge::{control_heat, cycle_report, FridgeParams};
use qswitch_core::monitoring::{conditional_qubit_state, MonitoringSwitchParams};
use qswitch_core::random::{random_channel, random_density, random_unitary, rng};
use qswitch_core::verify::{
    chi_consistency, composition_error, double_dephasing_error, grid_errors, qubit_pipeline_error, random_cases,
    OracleCase, SystemHamiltonian, TrajectoryErrors,
};
use qswitch_core::{
    available_information, brute_force_state, dephasing_channel, monitoring_channel, tensor, thermal_qubit,
    trace_distance, Axis, CollisionParams, DensityMatrix, MonitoringStrength, Observable, Outcome, Result,
};

const SEED: u64 = 20_240_611;

/// One sub-check of a criterion.
struct Item {
    label: String,
    ok: bool,
}

fn item(label: impl Into<String>, ok: bool) -> Item {
    Item {
        label: label.into(),
        ok,
    }
}

fn bounded(name: &str, error: f64, bound: f64) -> Item {
    item(format!("{name} {error:.2e} <= {bound:.0e}"), error.is_finite() && error <= bound)
}

fn oracle_errors(cases: &[OracleCase]) -> Result<TrajectoryErrors> {
    grid_errors(cases, 50)
}

fn criterion_1(trajectory: &TrajectoryErrors) -> Result<Vec<Item>> {
    Ok(vec![bounded("max trace distance analytic vs brute force", trajectory.state, 1e-8)])
}

fn criterion_2() -> Result<Vec<Item>> {
    let mut exact = true;
    let mut monotone = true;
    let mut invariant = true;
    let mut previous = f64::INFINITY;
    for n in 0..=100u32 {
        let reference = 0.2f64.cos().powi(2 * n as i32);
        let base = b_coefficients(&CollisionParams::free_system(1.0, 0.2, 1.0, 0.0, n, 2)?);
        exact &= base.b_indef_plus.abs() == reference && base.b_indef_minus.abs() == reference;
        monotone &= base.b_indef_plus < previous;
        previous = base.b_indef_plus;
        for beta in [0.0, 1.0, 10.0] {
            for omega in [0.5, 1.0, 2.0] {
                let b = b_coefficients(&CollisionParams::free_system(omega, 0.2, 1.0, beta, n, 2)?);
                invariant &= b.b_indef_plus.to_bits() == base.b_indef_plus.to_bits()
                    && b.b_indef_minus.to_bits() == base.b_indef_minus.to_bits();
            }
        }
    }
    let start = b_coefficients(&CollisionParams::free_system(1.0, 0.2, 1.0, 1.0, 0, 2)?);
    Ok(vec![
        item("|b_indef| == cos^2n(0.2) for n <= 100", exact),
        item("strictly decreasing", monotone),
        item("value 1 at n = 0", start.b_indef_plus == 1.0 && start.b_indef_minus == -1.0),
        item("bit-identical across beta_E and omega", invariant),
    ])
}

fn criterion_3() -> Result<Vec<Item>> {
    let mut infinite_temperature = true;
    let mut sum_error: f64 = 0.0;
    for n in 0..=2000u32 {
        for beta in [0.0, 1.0, 10.0] {
            let b = b_coefficients(&CollisionParams::free_system(1.0, 0.2, 1.0, beta, n, 2)?);
            if beta == 0.0 {
                infinite_temperature &= b.b_def_plus == 1.0 && b.b_def_minus == 1.0;
            }
            sum_error = sum_error.max((b.b_def_plus + b.b_def_minus - 2.0).abs());
        }
    }
    let cold = b_coefficients(&CollisionParams::free_system(1.0, 0.2, 1.0, 10.0, 2000, 2)?);
    let limit = 1.0 - 0.9999092042625951;
    Ok(vec![
        item("beta_E = 0 curves identically 1", infinite_temperature),
        bounded("beta_E = 10 minus curve at n = 2000 vs 1 - f_E", (cold.b_def_minus - limit).abs(), 1e-12),
        bounded("max |b_def^+ + b_def^- - 2|", sum_error, 1e-12),
    ])
}

fn hamiltonians(p: SystemHamiltonian) -> qswitch_core::ComplexMatrix {
    p.matrix(1.0)
}

fn criterion_4(cases: &[OracleCase]) -> Result<Vec<Item>> {
    let mut shield: f64 = 0.0;
    let mut prob: f64 = 0.0;
    let mut p_plus_gap: f64 = 0.0;
    let mut half_gap: f64 = 0.0;
    let mut def_gap: f64 = 0.0;
    for case in cases.iter().take(10) {
        let dec = &case.decomposition;
        let p0_minus = dec.a_mm.trace().re;
        for h in SystemHamiltonian::ALL {
            for n in [1u32, 10, 50] {
                let p = CollisionParams::new(1.0, 0.2, 1.0, f64::INFINITY, n, hamiltonians(h))?;
                let state = brute_force_state(dec, &p)?;
                let post = state.post_select(Outcome::Minus)?;
                let u = p.system_propagator()?;
                let target = DensityMatrix::normalized(&dec.a_mm.conjugate_by(&u))?;
                shield = shield.max(trace_distance(post.state()?, &target)?);
                let decay = 0.2f64.cos().powi(2 * n as i32);
                prob = prob.max((post.probability - decay * p0_minus).abs());
            }
            let far = CollisionParams::new(1.0, 0.2, 1.0, f64::INFINITY, 2000, hamiltonians(h))?;
            let state = brute_force_state(dec, &far)?;
            p_plus_gap = p_plus_gap.max(1.0 - state.post_select(Outcome::Plus)?.probability);

            let hot = CollisionParams::new(1.0, 0.2, 1.0, 0.0, 2000, hamiltonians(h))?;
            let state = brute_force_state(dec, &hot)?;
            let def = DensityMatrix::normalized(&dec.a_def.conjugate_by(&hot.system_propagator()?))?;
            for o in Outcome::BOTH {
                let post = state.post_select(o)?;
                half_gap = half_gap.max((post.probability - 0.5).abs());
                def_gap = def_gap.max(trace_distance(post.state()?, &def)?);
            }
        }
    }
    Ok(vec![
        bounded("(a) f_E = 1 shielding, distance to A^n_--/tr", shield, 1e-8),
        bounded("(a) p(-) vs cos^2n p0(-)", prob, 1e-10),
        bounded("(a) 1 - p(+) at n = 2000", p_plus_gap, 1e-6),
        bounded("(b) beta_E = 0 |p(+-) - 1/2| at n = 2000", half_gap, 1e-6),
        bounded("(b) distance to normalized A^n_def", def_gap, 1e-6),
    ])
}

fn criterion_5(cases: &[OracleCase]) -> Result<Vec<Item>> {
    let mut worst: f64 = 0.0;
    for case in cases.iter().take(10) {
        let dec = &case.decomposition;
        for h in SystemHamiltonian::ALL {
            for beta in [0.0, 1.0, 10.0] {
                let p = CollisionParams::new(1.0, 0.2, 1.0, beta, 2000, hamiltonians(h))?;
                let state = brute_force_state(dec, &p)?;
                let system = dec.a_def.conjugate_by(&p.system_propagator()?);
                let product = tensor(&system, thermal_qubit(beta, 1.0, Axis::X)?.matrix());
                worst = worst.max(trace_distance(&state.joint, &DensityMatrix::from_computed(&product)?)?);
            }
        }
    }
    Ok(vec![bounded("distance to rho_S^inf (x) Theta_E at n = 2000", worst, 1e-6)])
}

fn criterion_6(trajectory: &TrajectoryErrors) -> Result<Vec<Item>> {
    Ok(vec![
        bounded("closed-form heat vs accumulated Delta U_C", trajectory.heat, 1e-8),
        bounded("per-collision |Delta U_C + Delta U_E|", trajectory.energy_balance, 1e-10),
        item(
            format!("min entropy production {:.2e} >= -1e-9", trajectory.min_entropy_production),
            trajectory.min_entropy_production >= -1e-9,
        ),
    ])
}

fn information(eps: f64, beta: f64, n: u32, outcome: Outcome) -> Result<Option<f64>> {
    let p = MonitoringSwitchParams::qubit_example(eps, 1.0, 1.0, 0.2, 1.0, beta, n)?;
    match conditional_qubit_state(&p, outcome)?.conditional_state {
        Some(rho) => Ok(Some(available_information(&rho)?)),
        None => Ok(None),
    }
}

/// `ε₁ < ε₂ < ε₃` with `ℐ(ε₁) > ℐ(ε₂) < ℐ(ε₃)`, each by more than `margin`.
fn has_valley(values: &[f64], margin: f64) -> bool {
    (1..values.len()).any(|j| {
        let left = values[..j].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let right = values[j + 1..].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        left > values[j] + margin && right > values[j] + margin
    })
}

/// Log-spaced from 1e-6 to 1e-2, then linear to 1, so that valleys at the
/// scale of `1 − f_E` are resolved.
fn valley_grid() -> Vec<f64> {
    let mut eps: Vec<f64> = (0..40).map(|k| 10f64.powf(-6.0 + k as f64 / 10.0)).collect();
    eps.extend((1..=100).map(|k| k as f64 / 100.0));
    eps
}

fn minus_curve(beta: f64, n: u32) -> Result<Vec<f64>> {
    valley_grid()
        .into_iter()
        .map(|e| Ok(information(e, beta, n, Outcome::Minus)?.unwrap_or(f64::NAN)))
        .collect()
}

fn criterion_7() -> Result<(Vec<Item>, String)> {
    let eps_grid: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let n_grid = [0u32, 1, 2, 5, 10, 20, 50, 100, 200, 300];
    let chi = chi_consistency(SEED, 50)?;
    let pipeline = qubit_pipeline_error(&eps_grid, &n_grid, &[0.1, 10.0, f64::INFINITY])?;

    let mut shielded: f64 = 0.0;
    for &eps in eps_grid.iter().skip(1) {
        for n in 0..=300 {
            let info = information(eps, f64::INFINITY, n, Outcome::Minus)?.unwrap_or(f64::NAN);
            shielded = shielded.max((info - LN_2).abs());
        }
    }

    let mut monotone = true;
    for &eps in &eps_grid {
        for beta in [0.1, 10.0] {
            let mut previous = f64::INFINITY;
            for n in 0..=300 {
                let info = information(eps, beta, n, Outcome::Plus)?.unwrap_or(f64::NAN);
                monotone &= info <= previous + 1e-12;
                previous = info;
            }
        }
    }

    let literal = minus_curve(10.0, 0)?;
    let spread = literal.iter().fold(0.0f64, |m, &v| m.max((v - LN_2).abs()));
    let valley_n0 = has_valley(&literal, 1e-12);
    let valley_n1 = has_valley(&minus_curve(10.0, 1)?, 1e-12);
    let note = format!(
        "n = 0 minus curve stays within {spread:.1e} of ln 2 for every eps in [1e-6, 1]; valley at n = 1, beta = 10: {}",
        if valley_n1 { "present" } else { "absent" }
    );
    Ok((
        vec![
            bounded("|Re chi - tr A_indef|", chi, 1e-10),
            bounded("qubit closed form vs pipeline", pipeline, 1e-10),
            bounded("f_E = 1 minus-outcome |I - ln 2| for n <= 300", shielded, 1e-10),
            item("plus-outcome information non-increasing in n", monotone),
            item("valley in eps at n = 0, beta = 10", valley_n0),
        ],
        note,
    ))
}

fn fridge(n: u32, beta_e: f64, omega: f64) -> FridgeParams {
    FridgeParams {
        omega_s: 1.0,
        omega,
        beta_hot: 1.0,
        beta_cold: 1.5,
        g: 0.1,
        tau: 1.0,
        n,
        beta_e,
    }
}

fn criterion_8() -> Result<Vec<Item>> {
    let closed = cycle_report(&fridge(0, 1.0, 1.0))?;
    let q_bar_zero = closed.avg_heat;

    let mut q_plus_zero = true;
    let mut work_balance: f64 = 0.0;
    let mut degraded = true;
    let cop0 = closed.cop;
    for i in 0..=150 {
        let beta_e = i as f64 / 100.0;
        for n in 0..=300 {
            let r = cycle_report(&fridge(n, beta_e, 1.0))?;
            q_plus_zero &= r.q_plus == 0.0;
            work_balance = work_balance.max(r.average_measurement_work().abs());
            if n >= 1 {
                degraded &= matches!((r.cop, cop0), (Some(c), Some(c0)) if c / c0 < 1.0);
            }
        }
    }

    let mut q0_exact = true;
    for k in 0..=200 {
        let omega = k as f64 / 100.0;
        q0_exact &= control_heat(&fridge(0, 1.5, omega))? == 0.0;
    }

    let n_large = 300;
    let ratios: Vec<f64> = (0..=200)
        .map(|k| {
            let omega = k as f64 / 100.0;
            let rn = cycle_report(&fridge(n_large, 1.5, omega))?;
            let r0 = cycle_report(&fridge(0, 1.5, omega))?;
            Ok(match (rn.cop_prime, r0.cop_prime) {
                (Some(a), Some(b)) => a / b,
                _ => f64::NAN,
            })
        })
        .collect::<Result<_>>()?;
    let sign_change = ratios.windows(2).any(|w| w[0] * w[1] < 0.0);

    Ok(vec![
        bounded("|Q0 - 0.028009797638430717|", (q_bar_zero - 0.028009797638430717).abs(), 1e-6),
        item("Q_n,+ == 0 on the COP grid", q_plus_zero),
        bounded("max |sum p W_n|", work_balance, 1e-10),
        item("COP_n / COP_0 < 1 for n in 1..=300, beta_E in [0, 1.5]", degraded),
        item("q_0 == 0 for omega in [0, 2]", q0_exact),
        item(format!("COP'_n / COP'_0 changes sign along omega at n = {n_large}"), sign_change),
    ])
}

fn criterion_9() -> Result<Vec<Item>> {
    let composition = composition_error(SEED)?;
    let dephasing = double_dephasing_error(SEED, 100)?;

    let mut r = rng(SEED);
    let mut channels: Vec<KrausChannel> = vec![KrausChannel::identity(2), KrausChannel::identity(3)];
    for obs in [Observable::pauli_x(), Observable::pauli_y(), Observable::pauli_z()] {
        channels.push(dephasing_channel(&obs));
        for k in 0..=10 {
            channels.push(monitoring_channel(&obs, MonitoringStrength::new(k as f64 / 10.0)?));
        }
    }
    for beta in [0.1, 1.0, 1.5, 10.0] {
        channels.push(fridge_channel(&thermal_qubit(beta, 1.0, Axis::Z)?)?);
    }
    for d in [2, 3] {
        for rank in 1..=4 {
            channels.push(random_channel(d, rank, &mut r)?);
        }
        channels.push(KrausChannel::unitary(random_unitary(d, &mut r)?)?);
    }
    let pairs: Vec<KrausChannel> = channels
        .windows(2)
        .filter(|w| w[0].dim() == w[1].dim())
        .map(|w| w[0].then(&w[1]))
        .collect::<Result<_>>()?;
    let completeness = channels
        .iter()
        .chain(&pairs)
        .map(KrausChannel::completeness_error)
        .fold(0.0, f64::max);

    // trace preservation on random inputs as a second reading of completeness
    let mut trace_error: f64 = 0.0;
    for ch in channels.iter().filter(|c| c.dim() == 2) {
        let rho = random_density(2, &mut r)?;
        trace_error = trace_error.max((ch.apply(&rho)?.matrix().trace().re - 1.0).abs());
    }
    Ok(vec![
        bounded("monitoring composition law, 11x11 grid", composition, 1e-10),
        bounded("MUB double dephasing vs 1/d", dephasing, 1e-12),
        bounded(format!("completeness over {} channels", channels.len() + pairs.len()).as_str(), completeness, 1e-10),
        bounded("trace preservation", trace_error, 1e-10),
    ])
}

fn report(number: usize, title: &str, started: Instant, result: Result<Vec<Item>>) -> bool {
    let seconds = started.elapsed().as_secs_f64();
    match result {
        Ok(items) => {
            let ok = items.iter().all(|i| i.ok);
            let failed: Vec<&str> = items.iter().filter(|i| !i.ok).map(|i| i.label.as_str()).collect();
            println!(
                "criterion {number} [{}] {title} ({seconds:.1}s){}",
                if ok { "PASS" } else { "FAIL" },
                if ok { String::new() } else { format!(": failed {}", failed.join("; ")) }
            );
            for i in &items {
                println!("    {} {}", if i.ok { "ok  " } else { "FAIL" }, i.label);
            }
            ok
        }
        Err(e) => {
            println!("criterion {number} [FAIL] {title} ({seconds:.1}s): error {e}");
            false
        }
    }
}

fn main() -> ExitCode {
    let started = Instant::now();
    let cases = match random_cases(SEED, 50) {
        Ok(c) => c,
        Err(e) => {
            println!("could not draw oracle cases: {e}");
            return ExitCode::FAILURE;
        }
    };
    let trajectory = oracle_errors(&cases);
    let shared = || trajectory.clone();

    let mut all = true;
    all &= report(1, "oracle equivalence", started, shared().and_then(|t| criterion_1(&t)));
    let t = Instant::now();
    all &= report(2, "interference decay", t, criterion_2());
    let t = Instant::now();
    all &= report(3, "definite-order coefficients", t, criterion_3());
    let t = Instant::now();
    all &= report(4, "temperature limits", t, criterion_4(&cases));
    let t = Instant::now();
    all &= report(5, "asymptotic factorization", t, criterion_5(&cases));
    let t = Instant::now();
    all &= report(6, "thermodynamics", t, shared().and_then(|t| criterion_6(&t)));
    let t = Instant::now();
    let seventh = criterion_7();
    let note = seventh.as_ref().ok().map(|(_, n)| n.clone());
    all &= report(7, "monitoring switch", t, seventh.map(|(items, _)| items));
    if let Some(note) = note {
        println!("    note: {note}");
    }
    let t = Instant::now();
    all &= report(8, "refrigerator", t, criterion_8());
    let t = Instant::now();
    all &= report(9, "channel algebra", t, criterion_9());
    println!(
        "acceptance: {} in {:.1}s",
        if all { "all criteria passed" } else { "some criteria failed" },
        started.elapsed().as_secs_f64()
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
