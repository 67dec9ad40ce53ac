//! Run configuration: a TOML document with `command`, optional `out` and
//! `constants`, a `[params]` table and, for sweeps, a `[sweep]` table.
//!
//! ```toml
//! command = "sweep"
//! out = "runs/crossing"
//!
//! [params]
//! mass_kg = 2e-6
//! length_in = 1.284      # `_in` keys are stored as `_m`
//!
//! [sweep]
//! command = "simulate"
//! param = "pump_b_t"
//! start = 1.0e-4
//! stop = 1.3e-4
//! count = 13
//! scale = "linear"
//! ```

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use gempl_core::ConstantsMode;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Metres per inch.
pub const INCH: f64 = 0.0254;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Modes,
    Spectrum,
    AbPhase,
    Threshold,
    Simulate,
    Sweep,
}

impl Command {
    pub const ALL: [Command; 6] =
        [Command::Modes, Command::Spectrum, Command::AbPhase, Command::Threshold, Command::Simulate, Command::Sweep];

    pub fn name(self) -> &'static str {
        match self {
            Command::Modes => "modes",
            Command::Spectrum => "spectrum",
            Command::AbPhase => "ab-phase",
            Command::Threshold => "threshold",
            Command::Simulate => "simulate",
            Command::Sweep => "sweep",
        }
    }

    /// Accepted parameters and their defaults.
    pub fn params(self) -> &'static [ParamSpec] {
        match self {
            Command::Modes => MODES,
            Command::Spectrum => SPECTRUM,
            Command::AbPhase => AB_PHASE,
            Command::Threshold => THRESHOLD,
            Command::Simulate => SIMULATE,
            Command::Sweep => &[],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(CliError::Usage("no command given (expected one of modes, spectrum, ab-phase, threshold, simulate, sweep)".into()));
        }
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown command '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Default {
    Num(f64),
    Text(&'static str),
    /// No default; the command derives a value when absent.
    Absent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpec {
    pub key: &'static str,
    pub default: Default,
}

const fn num(key: &'static str, v: f64) -> ParamSpec {
    ParamSpec { key, default: Default::Num(v) }
}

const fn text(key: &'static str, v: &'static str) -> ParamSpec {
    ParamSpec { key, default: Default::Text(v) }
}

const fn absent(key: &'static str) -> ParamSpec {
    ParamSpec { key, default: Default::Absent }
}

const MODES: &[ParamSpec] = &[
    num("length_m", 1.284 * INCH),
    num("diameter_m", 1.02 * INCH),
    text("mode", "TE112"),
    num("max_index", 2.0),
];

const SPECTRUM: &[ParamSpec] = &[
    num("f0_hz", 11.42e9),
    num("coupling_hz", 400e6),
    num("q_s", 1e4),
    num("q_p", 1e4),
    num("amp_s", 1.0),
    num("amp_p", 1.0),
    absent("f_start_hz"),
    absent("f_stop_hz"),
    num("points", 9001.0),
];

const AB_PHASE: &[ParamSpec] = &[
    num("radius_m", 1.0),
    num("shell_thickness_m", 0.01),
    num("mass_per_length_kg_m", 1e3),
    num("angular_velocity_rad_s", 10.0),
    text("species", "electron"),
    num("em_flux_wb", 0.0),
    num("loop_radius_m", 2.0),
    num("loop_center_x_m", 0.0),
    num("loop_center_y_m", 0.0),
    num("loop_center_z_m", 0.0),
    num("samples", 4096.0),
    absent("ring_radius_m"),
    num("fluxoid_n", 0.0),
];

const THRESHOLD: &[ParamSpec] = &[
    num("mass_kg", 2e-6),
    num("f_s_hz", 1e10),
    num("f_i_hz", 1e10),
    num("f_p_hz", 2e10),
    num("q_s", 1e10),
    num("q_i", 1e10),
    num("q_p", 1e10),
    num("l_eff_m", 0.03),
    num("a_eff_m2", 9e-4),
    absent("pump_b_t"),
    num("membrane_f_hz", 4e8),
    num("q_membrane", 1e5),
    num("stokes_f_hz", 1.13e10),
    num("q_stokes", 1e10),
];

const SIMULATE: &[ParamSpec] = &[
    num("mass_kg", 2e-6),
    num("f_s_hz", 1e10),
    num("f_i_hz", 1e10),
    num("f_p_hz", 2e10),
    num("q_s", 1e10),
    num("q_i", 1e10),
    num("q_p", 1e10),
    num("l_eff_m", 0.03),
    num("a_eff_m2", 9e-4),
    absent("pump_b_t"),
    num("pump_energy_factor", 1.1),
    num("pump_phase_rad", 0.0),
    num("relative_phase_rad", -FRAC_PI_2),
    num("bi0_t", 1e-9),
    absent("eps0_m"),
    num("t_end_s", 8.0),
    num("dt_s", 2e-4),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    Text(String),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Number(x) => write!(f, "{x}"),
            ParamValue::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepScale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Command evaluated at each point.
    pub command: Command,
    pub param: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default = "linear")]
    pub scale: SweepScale,
}

fn linear() -> SweepScale {
    SweepScale::Linear
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| {
                let u = i as f64 / (n - 1) as f64;
                match self.scale {
                    SweepScale::Linear => self.start + (self.stop - self.start) * u,
                    SweepScale::Log => (self.start.ln() + (self.stop.ln() - self.start.ln()) * u).exp(),
                }
            })
            .collect()
    }
}

/// Validated configuration with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub constants: ConstantsMode,
    pub params: BTreeMap<String, ParamValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

impl RunConfig {
    /// Command whose parameters live in `params`.
    pub fn target(&self) -> Command {
        match (&self.sweep, self.command) {
            (Some(s), Command::Sweep) => s.command,
            _ => self.command,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always representable as TOML")
    }

    pub fn number(&self, key: &str) -> Result<f64, CliError> {
        self.optional(key)?
            .ok_or_else(|| CliError::Config(format!("parameter '{key}' is required")))
    }

    pub fn optional(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.params.get(key) {
            None => Ok(None),
            Some(ParamValue::Number(x)) => Ok(Some(*x)),
            Some(ParamValue::Text(s)) => Err(CliError::Config(format!("parameter '{key}' must be a number, got '{s}'"))),
        }
    }

    pub fn integer(&self, key: &str) -> Result<i64, CliError> {
        let x = self.number(key)?;
        if x.fract() != 0.0 || x.abs() > 1e15 {
            return Err(CliError::Config(format!("parameter '{key}' must be an integer, got {x}")));
        }
        Ok(x as i64)
    }

    pub fn text(&self, key: &str) -> Result<&str, CliError> {
        match self.params.get(key) {
            Some(ParamValue::Text(s)) => Ok(s),
            Some(ParamValue::Number(x)) => Err(CliError::Config(format!("parameter '{key}' must be text, got {x}"))),
            None => Err(CliError::Config(format!("parameter '{key}' is required"))),
        }
    }

    /// Copy of `self` with one numeric parameter replaced, as a plain run of
    /// the swept command.
    pub fn with_param(&self, command: Command, key: &str, value: f64) -> RunConfig {
        let mut params = self.params.clone();
        params.insert(key.to_string(), ParamValue::Number(value));
        RunConfig { command, out: self.out.clone(), constants: self.constants, params, sweep: None }
    }
}

/// Parse and validate a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    parse_config_with(text, &[])
}

/// Parse `text`, apply `key=value` overrides, then validate.
///
/// Override keys are `command`, `out`, `constants`, `sweep.<field>`,
/// `params.<name>` or a bare parameter name.
pub fn parse_config_with(text: &str, overrides: &[(String, String)]) -> Result<RunConfig, CliError> {
    let mut doc: toml::Table = toml::from_str(text).map_err(|e| located(text, &e))?;
    for (key, raw) in overrides {
        apply_override(&mut doc, key, raw)?;
    }
    validate(doc)
}

fn located(text: &str, e: &toml::de::Error) -> CliError {
    let msg = e.message().to_string();
    match e.span() {
        Some(span) => {
            let before = &text[..span.start.min(text.len())];
            let line = before.matches('\n').count() + 1;
            let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
            CliError::Parse { line, column, message: msg }
        }
        None => CliError::Parse { line: 0, column: 0, message: msg },
    }
}

fn override_value(raw: &str) -> toml::Value {
    match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").expect("key was just parsed"),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

fn apply_override(doc: &mut toml::Table, key: &str, raw: &str) -> Result<(), CliError> {
    let value = override_value(raw);
    let (table, field) = match key.split_once('.') {
        Some((t @ ("params" | "sweep"), f)) => (Some(t), f),
        Some(_) => return Err(CliError::Config(format!("unknown override key '{key}'"))),
        None if matches!(key, "command" | "out" | "constants") => (None, key),
        None => (Some("params"), key),
    };
    match table {
        None => {
            doc.insert(field.to_string(), value);
        }
        Some(t) => {
            let entry = doc.entry(t).or_insert_with(|| toml::Value::Table(toml::Table::new()));
            let toml::Value::Table(inner) = entry else {
                return Err(CliError::Config(format!("'{t}' must be a table")));
            };
            inner.insert(field.to_string(), value);
        }
    }
    Ok(())
}

fn validate(mut doc: toml::Table) -> Result<RunConfig, CliError> {
    for key in doc.keys() {
        if !matches!(key.as_str(), "command" | "out" | "constants" | "params" | "sweep") {
            return Err(CliError::Config(format!("unknown key '{key}'")));
        }
    }
    let command: Command = match doc.remove("command") {
        Some(toml::Value::String(s)) => s.parse()?,
        Some(other) => return Err(CliError::Config(format!("'command' must be a string, got {other}"))),
        None => return Err(CliError::Usage("no command given".into())),
    };
    let out = match doc.remove("out") {
        Some(toml::Value::String(s)) => Some(PathBuf::from(s)),
        Some(other) => return Err(CliError::Config(format!("'out' must be a string, got {other}"))),
        None => None,
    };
    let constants = match doc.remove("constants") {
        Some(toml::Value::String(s)) => s.parse::<ConstantsMode>().map_err(CliError::Config)?,
        Some(other) => return Err(CliError::Config(format!("'constants' must be a string, got {other}"))),
        None => ConstantsMode::Codata,
    };
    let sweep = match doc.remove("sweep") {
        Some(v) => Some(
            v.try_into::<SweepSpec>()
                .map_err(|e| CliError::Config(format!("sweep: {}", e.message())))?,
        ),
        None => None,
    };
    let target = match (command, &sweep) {
        (Command::Sweep, Some(s)) => s.command,
        (Command::Sweep, None) => return Err(CliError::Config("command 'sweep' needs a [sweep] table".into())),
        (_, Some(_)) => return Err(CliError::Config(format!("[sweep] is only valid with command 'sweep', not '{command}'"))),
        (c, None) => c,
    };
    let raw_params = match doc.remove("params") {
        Some(toml::Value::Table(t)) => t,
        Some(other) => return Err(CliError::Config(format!("'params' must be a table, got {other}"))),
        None => toml::Table::new(),
    };
    let params = resolve_params(target, raw_params)?;
    if let Some(s) = &sweep {
        validate_sweep(s, target)?;
    }
    Ok(RunConfig { command, out, constants, params, sweep })
}

fn resolve_params(target: Command, raw: toml::Table) -> Result<BTreeMap<String, ParamValue>, CliError> {
    if target == Command::Sweep {
        return Err(CliError::Config("a sweep cannot sweep another sweep".into()));
    }
    let specs = target.params();
    let mut params = BTreeMap::new();
    for (key, value) in raw {
        let (name, scale) = match key.strip_suffix("_in") {
            Some(stem) => (format!("{stem}_m"), INCH),
            None => (key.clone(), 1.0),
        };
        if !specs.iter().any(|s| s.key == name) {
            return Err(CliError::Config(format!("unknown parameter '{key}' for command '{target}'")));
        }
        let v = match value {
            toml::Value::Float(x) => ParamValue::Number(x * scale),
            toml::Value::Integer(i) => ParamValue::Number(i as f64 * scale),
            toml::Value::String(s) if scale == 1.0 => ParamValue::Text(s),
            other => return Err(CliError::Config(format!("parameter '{key}' has unsupported value {other}"))),
        };
        if let ParamValue::Number(x) = v {
            if !x.is_finite() {
                return Err(CliError::Config(format!("parameter '{key}' must be finite")));
            }
        }
        if params.insert(name.clone(), v).is_some() {
            return Err(CliError::Config(format!("parameter '{name}' given twice (directly and in inches)")));
        }
    }
    for spec in specs {
        let default = match spec.default {
            Default::Num(x) => ParamValue::Number(x),
            Default::Text(s) => ParamValue::Text(s.to_string()),
            Default::Absent => continue,
        };
        params.entry(spec.key.to_string()).or_insert(default);
    }
    Ok(params)
}

fn validate_sweep(s: &SweepSpec, target: Command) -> Result<(), CliError> {
    if s.count < 2 {
        return Err(CliError::Config(format!("sweep.count must be at least 2, got {}", s.count)));
    }
    if !(s.start.is_finite() && s.stop.is_finite()) {
        return Err(CliError::Config("sweep bounds must be finite".into()));
    }
    if s.scale == SweepScale::Log && !(s.start > 0.0 && s.stop > 0.0) {
        return Err(CliError::Config("log sweep needs positive bounds".into()));
    }
    match target.params().iter().find(|p| p.key == s.param) {
        None => Err(CliError::Config(format!("sweep.param '{}' is not a parameter of '{target}'", s.param))),
        Some(ParamSpec { default: Default::Text(_), .. }) => {
            Err(CliError::Config(format!("sweep.param '{}' is not numeric", s.param)))
        }
        Some(_) => Ok(()),
    }
}
