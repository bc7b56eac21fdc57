//! Scenario configuration files.
//!
//! A config is TOML restricted to three parts: top-level `scenario`,
//! `output` and `seed` keys, a `[parameters]` section of scalars and
//! preset strings, and a `[grid]` section of swept axes. Every key that a
//! scenario does not consume is reported as an error.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;
use toml::{Table, Value};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid TOML: {0}")]
    Syntax(String),
    #[error("missing key `{0}`")]
    Missing(String),
    #[error("key `{key}`: {reason}")]
    Invalid { key: String, reason: String },
    #[error("unknown key `{0}`")]
    Unknown(String),
}

pub type ConfigResult<T> = std::result::Result<T, ConfigError>;

pub(crate) fn invalid(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        reason: reason.into(),
    }
}

/// A TOML table that remembers which keys were read.
#[derive(Debug)]
pub struct Section {
    name: &'static str,
    table: Table,
    used: RefCell<BTreeSet<String>>,
}

impl Section {
    fn new(name: &'static str, table: Table) -> Self {
        Self {
            name,
            table,
            used: RefCell::new(BTreeSet::new()),
        }
    }

    fn path(&self, key: &str) -> String {
        format!("{}.{key}", self.name)
    }

    fn get(&self, key: &str) -> Option<&Value> {
        self.used.borrow_mut().insert(key.to_string());
        self.table.get(key)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.table.contains_key(key)
    }

    pub fn f64_opt(&self, key: &str) -> ConfigResult<Option<f64>> {
        self.get(key).map(|v| number(v, &self.path(key))).transpose()
    }

    pub fn f64(&self, key: &str) -> ConfigResult<f64> {
        self.f64_opt(key)?.ok_or_else(|| ConfigError::Missing(self.path(key)))
    }

    pub fn f64_or(&self, key: &str, default: f64) -> ConfigResult<f64> {
        Ok(self.f64_opt(key)?.unwrap_or(default))
    }

    pub fn u32_opt(&self, key: &str) -> ConfigResult<Option<u32>> {
        self.get(key).map(|v| unsigned(v, &self.path(key))).transpose()
    }

    pub fn u32(&self, key: &str) -> ConfigResult<u32> {
        self.u32_opt(key)?.ok_or_else(|| ConfigError::Missing(self.path(key)))
    }

    pub fn str_opt(&self, key: &str) -> ConfigResult<Option<&str>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.as_str())),
            Some(_) => Err(invalid(&self.path(key), "expected a string")),
        }
    }

    pub fn value(&self, key: &str) -> Option<&Value> {
        self.get(key)
    }

    /// Float axis: a list, `{ start, stop, step }` or `{ start, stop, count }`.
    pub fn f64_grid(&self, key: &str) -> ConfigResult<Vec<f64>> {
        let path = self.path(key);
        let v = self.get(key).ok_or_else(|| ConfigError::Missing(path.clone()))?;
        let values = float_axis(v, &path)?;
        if values.is_empty() {
            return Err(invalid(&path, "grid is empty"));
        }
        Ok(values)
    }

    pub fn f64_grid_or(&self, key: &str, default: &[f64]) -> ConfigResult<Vec<f64>> {
        if self.contains(key) {
            self.f64_grid(key)
        } else {
            Ok(default.to_vec())
        }
    }

    /// Integer axis: a list or `{ start, stop, step }`.
    pub fn u32_grid(&self, key: &str) -> ConfigResult<Vec<u32>> {
        let path = self.path(key);
        let v = self.get(key).ok_or_else(|| ConfigError::Missing(path.clone()))?;
        let values = match v {
            Value::Array(items) => items.iter().map(|x| unsigned(x, &path)).collect::<ConfigResult<Vec<_>>>()?,
            Value::Table(t) => {
                let field = |name: &str| -> ConfigResult<u32> {
                    t.get(name)
                        .map(|x| unsigned(x, &format!("{path}.{name}")))
                        .transpose()?
                        .ok_or_else(|| ConfigError::Missing(format!("{path}.{name}")))
                };
                reject_extra(t, &["start", "stop", "step"], &path)?;
                let (start, stop) = (field("start")?, field("stop")?);
                let step = if t.contains_key("step") { field("step")? } else { 1 };
                if step == 0 || stop < start {
                    return Err(invalid(&path, "need step > 0 and stop >= start"));
                }
                (start..=stop).step_by(step as usize).collect()
            }
            _ => return Err(invalid(&path, "expected a list or a { start, stop, step } table")),
        };
        if values.is_empty() {
            return Err(invalid(&path, "grid is empty"));
        }
        Ok(values)
    }

    pub fn u32_grid_or(&self, key: &str, default: &[u32]) -> ConfigResult<Vec<u32>> {
        if self.contains(key) {
            self.u32_grid(key)
        } else {
            Ok(default.to_vec())
        }
    }

    fn unused(&self) -> Option<String> {
        let used = self.used.borrow();
        self.table.keys().find(|k| !used.contains(*k)).map(|k| self.path(k))
    }

    /// `key = value` lines in key order, for CSV headers.
    pub fn echo(&self) -> Vec<String> {
        self.table
            .iter()
            .map(|(k, v)| format!("{}.{k} = {}", self.name, inline(v)))
            .collect()
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Table(t) => {
            let body: Vec<String> = t.iter().map(|(k, v)| format!("{k} = {}", inline(v))).collect();
            format!("{{ {} }}", body.join(", "))
        }
        Value::Array(a) => format!("[{}]", a.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn number(v: &Value, path: &str) -> ConfigResult<f64> {
    let x = match v {
        Value::Float(x) => *x,
        Value::Integer(i) => *i as f64,
        Value::String(s) if s == "inf" => f64::INFINITY,
        _ => return Err(invalid(path, "expected a number")),
    };
    if x.is_nan() {
        return Err(invalid(path, "NaN is not allowed"));
    }
    Ok(x)
}

fn unsigned(v: &Value, path: &str) -> ConfigResult<u32> {
    match v {
        Value::Integer(i) => u32::try_from(*i).map_err(|_| invalid(path, format!("{i} is not a non-negative 32-bit integer"))),
        _ => Err(invalid(path, "expected a non-negative integer")),
    }
}

fn reject_extra(t: &Table, allowed: &[&str], path: &str) -> ConfigResult<()> {
    match t.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(ConfigError::Unknown(format!("{path}.{k}"))),
        None => Ok(()),
    }
}

fn float_axis(v: &Value, path: &str) -> ConfigResult<Vec<f64>> {
    match v {
        Value::Array(items) => items.iter().map(|x| number(x, path)).collect(),
        Value::Table(t) => {
            reject_extra(t, &["start", "stop", "step", "count"], path)?;
            let field = |name: &str| -> ConfigResult<f64> {
                t.get(name)
                    .map(|x| number(x, &format!("{path}.{name}")))
                    .transpose()?
                    .ok_or_else(|| ConfigError::Missing(format!("{path}.{name}")))
            };
            let (start, stop) = (field("start")?, field("stop")?);
            if !(start.is_finite() && stop.is_finite() && stop >= start) {
                return Err(invalid(path, "need finite start <= stop"));
            }
            match (t.get("step"), t.get("count")) {
                (Some(_), None) => {
                    let step = field("step")?;
                    if step.is_nan() || step <= 0.0 {
                        return Err(invalid(path, "step must be positive"));
                    }
                    // index-based so rounding does not accumulate
                    let count = ((stop - start) / step + 1e-9).floor() as usize;
                    Ok((0..=count).map(|i| start + i as f64 * step).collect())
                }
                (None, Some(c)) => {
                    let count = unsigned(c, &format!("{path}.count"))? as usize;
                    match count {
                        0 => Ok(Vec::new()),
                        1 => Ok(vec![start]),
                        _ => Ok((0..count)
                            .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
                            .collect()),
                    }
                }
                _ => Err(invalid(path, "give exactly one of `step` or `count`")),
            }
        }
        _ => Err(invalid(path, "expected a list or a { start, stop, step|count } table")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    Switch,
    SweepB,
    MonitoringInfo,
    FridgeCop,
    FridgeCopPrime,
    RefrigerationRegion,
    ControlHeat,
    Verify,
}

impl Scenario {
    pub const ALL: [Scenario; 8] = [
        Self::Switch,
        Self::SweepB,
        Self::MonitoringInfo,
        Self::FridgeCop,
        Self::FridgeCopPrime,
        Self::RefrigerationRegion,
        Self::ControlHeat,
        Self::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Switch => "switch",
            Self::SweepB => "sweep_b",
            Self::MonitoringInfo => "monitoring_info",
            Self::FridgeCop => "fridge_cop",
            Self::FridgeCopPrime => "fridge_cop_prime",
            Self::RefrigerationRegion => "refrigeration_region",
            Self::ControlHeat => "control_heat",
            Self::Verify => "verify",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Self::Switch => "post-selected states of a switched channel pair after n collisions",
            Self::SweepB => "definite and interference weights b_def, b_indef against n",
            Self::MonitoringInfo => "available information after a switch of monitorings",
            Self::FridgeCop => "refrigerator COP_n / COP_0 over (n, beta_e)",
            Self::FridgeCopPrime => "refrigerator COP'_n / COP'_0 with control heat over (n, omega)",
            Self::RefrigerationRegion => "closed-control refrigeration condition over (beta_hot, beta_cold)",
            Self::ControlHeat => "heat q_n between cold bath and control over (omega, beta_cold)",
            Self::Verify => "oracle comparisons of closed forms against brute force",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    pub parameters: Section,
    pub grid: Section,
}

impl ScenarioConfig {
    pub fn from_path(path: &Path) -> ConfigResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> ConfigResult<Self> {
        let mut root: Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Syntax(e.to_string()))?;
        let scenario = match root.remove("scenario") {
            Some(Value::String(s)) => Scenario::from_name(&s).ok_or_else(|| {
                invalid(
                    "scenario",
                    format!(
                        "unknown scenario `{s}`; expected one of {}",
                        Scenario::ALL.map(Scenario::name).join(", ")
                    ),
                )
            })?,
            Some(_) => return Err(invalid("scenario", "expected a string")),
            None => return Err(ConfigError::Missing("scenario".into())),
        };
        let output = match root.remove("output") {
            Some(Value::String(s)) => Some(PathBuf::from(s)),
            Some(_) => return Err(invalid("output", "expected a path string")),
            None => None,
        };
        let seed = match root.remove("seed") {
            Some(Value::Integer(i)) => {
                Some(u64::try_from(i).map_err(|_| invalid("seed", "expected a non-negative integer"))?)
            }
            Some(_) => return Err(invalid("seed", "expected a non-negative integer")),
            None => None,
        };
        let mut section = |name: &'static str| match root.remove(name) {
            Some(Value::Table(t)) => Ok(Section::new(name, t)),
            Some(_) => Err(invalid(name, "expected a section")),
            None => Ok(Section::new(name, Table::new())),
        };
        let parameters = section("parameters")?;
        let grid = section("grid")?;
        if let Some(k) = root.keys().next() {
            return Err(ConfigError::Unknown(k.clone()));
        }
        Ok(Self {
            scenario,
            output,
            seed,
            parameters,
            grid,
        })
    }

    /// Config for a scenario that needs no parameters.
    pub fn bare(scenario: Scenario) -> Self {
        Self {
            scenario,
            output: None,
            seed: None,
            parameters: Section::new("parameters", Table::new()),
            grid: Section::new("grid", Table::new()),
        }
    }

    /// Fails on the first key no scenario code has read.
    pub fn check_all_used(&self) -> ConfigResult<()> {
        match self.parameters.unused().or_else(|| self.grid.unused()) {
            Some(k) => Err(ConfigError::Unknown(k)),
            None => Ok(()),
        }
    }
}
