//! Named channels, states and Hamiltonians accepted in config files.
//!
//! Strings take the form `name` or `name(arg, ...)`. Raw matrices are flat
//! row-major lists of `re, im` pairs; a raw channel is a list of such
//! matrices, one per Kraus operator.

use qswitch_core::{
    dephasing_channel, fridge_channel, monitoring_channel, pauli, thermal_qubit, Axis, ComplexMatrix,
    DensityMatrix, KrausChannel, MonitoringStrength, Observable, C64,
};
use toml::Value;

use crate::config::{invalid, ConfigError, ConfigResult};
use crate::error::CliError;

type Result<T> = std::result::Result<T, CliError>;

/// Splits `name(a, b)` into `("name", ["a", "b"])`.
fn call(text: &str, key: &str) -> ConfigResult<(String, Vec<String>)> {
    let text = text.trim();
    match text.find('(') {
        None => Ok((text.to_string(), Vec::new())),
        Some(open) => {
            let inner = text[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| invalid(key, format!("unbalanced parentheses in `{text}`")))?;
            let args = inner.split(',').map(|a| a.trim().to_string()).filter(|a| !a.is_empty()).collect();
            Ok((text[..open].trim().to_string(), args))
        }
    }
}

fn arity(name: &str, args: &[String], n: usize, key: &str) -> ConfigResult<()> {
    if args.len() == n {
        Ok(())
    } else {
        Err(invalid(key, format!("`{name}` takes {n} argument(s), got {}", args.len())))
    }
}

fn float_arg(arg: &str, key: &str) -> ConfigResult<f64> {
    match arg {
        "inf" => Ok(f64::INFINITY),
        _ => arg
            .parse()
            .map_err(|_| invalid(key, format!("`{arg}` is not a number"))),
    }
}

fn observable(arg: &str, key: &str) -> ConfigResult<Observable> {
    match arg {
        "x" => Ok(Observable::pauli_x()),
        "y" => Ok(Observable::pauli_y()),
        "z" => Ok(Observable::pauli_z()),
        _ => Err(invalid(key, format!("unknown observable `{arg}`, expected x, y or z"))),
    }
}

fn raw_matrix(v: &Value, key: &str) -> ConfigResult<ComplexMatrix> {
    let items = v.as_array().ok_or_else(|| invalid(key, "expected a list of numbers"))?;
    let numbers = items
        .iter()
        .map(|x| match x {
            Value::Float(f) => Ok(*f),
            Value::Integer(i) => Ok(*i as f64),
            _ => Err(invalid(key, "matrix entries must be numbers")),
        })
        .collect::<ConfigResult<Vec<f64>>>()?;
    let d = ((numbers.len() / 2) as f64).sqrt().round() as usize;
    if d == 0 || 2 * d * d != numbers.len() {
        return Err(invalid(
            key,
            format!("{} numbers do not form a square matrix of re, im pairs", numbers.len()),
        ));
    }
    let data = numbers.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
    ComplexMatrix::new(d, d, data).map_err(|e| invalid(key, e.to_string()))
}

pub fn channel(v: &Value, key: &str) -> Result<KrausChannel> {
    match v {
        Value::String(s) => {
            let (name, args) = call(s, key)?;
            let channel = match name.as_str() {
                "identity" => {
                    arity(&name, &args, 0, key)?;
                    KrausChannel::identity(2)
                }
                "dephasing_x" | "dephasing_y" | "dephasing_z" => {
                    arity(&name, &args, 0, key)?;
                    dephasing_channel(&observable(&name[10..], key)?)
                }
                "monitoring" => {
                    arity(&name, &args, 2, key)?;
                    let eps = MonitoringStrength::new(float_arg(&args[1], key)?)?;
                    monitoring_channel(&observable(&args[0], key)?, eps)
                }
                "fridge" => {
                    arity(&name, &args, 2, key)?;
                    let theta = thermal_qubit(float_arg(&args[0], key)?, float_arg(&args[1], key)?, Axis::Z)?;
                    fridge_channel(&theta)?
                }
                _ => {
                    return Err(invalid(
                        key,
                        format!("unknown channel `{name}`, expected identity, dephasing_x|y|z, monitoring(obs, eps) or fridge(beta_cold, omega_s)"),
                    )
                    .into())
                }
            };
            Ok(channel)
        }
        Value::Array(ops) => {
            let ops = ops
                .iter()
                .enumerate()
                .map(|(i, op)| raw_matrix(op, &format!("{key}[{i}]")))
                .collect::<ConfigResult<Vec<_>>>()?;
            Ok(KrausChannel::new(ops)?)
        }
        _ => Err(invalid(key, "expected a channel name or a list of Kraus matrices").into()),
    }
}

pub fn state(v: &Value, key: &str) -> Result<DensityMatrix> {
    match v {
        Value::String(s) => {
            let (name, args) = call(s, key)?;
            let ket = |k: Vec<C64>| -> Result<DensityMatrix> { Ok(DensityMatrix::pure(&k)?) };
            match name.as_str() {
                "zero" => ket(pauli::ket_zero()),
                "one" => ket(pauli::ket_one()),
                "plus" => ket(pauli::ket_plus()),
                "minus" => ket(pauli::ket_minus()),
                "mixed" => Ok(DensityMatrix::maximally_mixed(2)),
                "thermal_z" | "thermal_x" => {
                    arity(&name, &args, 2, key)?;
                    let axis = if name == "thermal_z" { Axis::Z } else { Axis::X };
                    Ok(thermal_qubit(float_arg(&args[0], key)?, float_arg(&args[1], key)?, axis)?)
                }
                _ => Err(invalid(
                    key,
                    format!("unknown state `{name}`, expected zero, one, plus, minus, mixed, thermal_z(beta, omega) or thermal_x(beta, omega)"),
                )
                .into()),
            }
        }
        Value::Array(_) => Ok(DensityMatrix::new(raw_matrix(v, key)?)?),
        _ => Err(invalid(key, "expected a state name or a raw matrix").into()),
    }
}

pub fn hamiltonian(v: &Value, key: &str) -> Result<ComplexMatrix> {
    match v {
        Value::String(s) => {
            let (name, args) = call(s, key)?;
            match name.as_str() {
                "zero" => {
                    arity(&name, &args, 0, key)?;
                    Ok(ComplexMatrix::zeros(2, 2))
                }
                "sigma_z" | "sigma_x" => {
                    arity(&name, &args, 1, key)?;
                    let omega_s = float_arg(&args[0], key)?;
                    let p = if name == "sigma_z" { pauli::z() } else { pauli::x() };
                    Ok(p.scale_real(-omega_s / 2.0))
                }
                _ => Err(invalid(
                    key,
                    format!("unknown Hamiltonian `{name}`, expected zero, sigma_z(omega_s) or sigma_x(omega_s)"),
                )
                .into()),
            }
        }
        Value::Array(_) => Ok(raw_matrix(v, key)?),
        _ => Err(ConfigError::Invalid {
            key: key.to_string(),
            reason: "expected a Hamiltonian name or a raw matrix".into(),
        }
        .into()),
    }
}
