//! Scenario configuration: flat TOML keys with unit-tagged quantities.
//!
//! ```toml
//! name = "pioneer"
//! chi_kind = "linear"          # or "exponential"
//! chi_rate = 2.92e-18          # 1/s
//! R = "40 AU"                  # "<x> AU", "<x> km", "<x> m" or a number in m
//! omega = 1.438849435e10       # rad/s
//! T = "round-trip"             # 2R/c, or "<x> s", or a number in s
//! theta = "pi/3"               # number in rad, or "[k]pi[/d]"
//! steps = 100000
//! outputs = ["trajectory", "phases", "anomaly", "appendix", "sweep"]
//! probe_velocity = "12 km/s"   # optional, for the appendix
//! oracle_samples = 10000       # optional, samples per edge of the octant cycle
//! ```

use std::fmt;
use std::path::Path;

use berryshift::constants::{ASTRONOMICAL_UNIT, SPEED_OF_LIGHT};
use berryshift::{RoundTripScenario, ScaleFactorKind, ScaleFactorModel, Tolerances};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

const DEFAULT_PROBE_VELOCITY: f64 = 1.2e4;
const DEFAULT_ORACLE_SAMPLES: usize = 10_000;
const MAX_STEPS: usize = 100_000_000;
const MAX_ORACLE_SAMPLES: usize = 10_000_000;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub name: Option<String>,
    pub chi_kind: Option<String>,
    pub chi_rate: Option<f64>,
    #[serde(rename = "R")]
    pub r: Option<Quantity>,
    pub omega: Option<f64>,
    #[serde(rename = "T")]
    pub t: Option<Quantity>,
    pub theta: Option<Quantity>,
    pub steps: Option<i64>,
    pub outputs: Option<Vec<String>>,
    pub probe_velocity: Option<Quantity>,
    pub oracle_samples: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Trajectory,
    Phases,
    Anomaly,
    Appendix,
    Sweep,
}

impl Output {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "trajectory" => Some(Output::Trajectory),
            "phases" => Some(Output::Phases),
            "anomaly" => Some(Output::Anomaly),
            "appendix" => Some(Output::Appendix),
            "sweep" => Some(Output::Sweep),
            _ => None,
        }
    }
}

/// A validated scenario in SI units. Serialized as the config echo.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub name: String,
    pub chi_kind: &'static str,
    pub chi_rate: f64,
    pub r_m: f64,
    pub omega: f64,
    pub t_s: f64,
    pub theta: f64,
    pub steps: usize,
    pub outputs: Vec<Output>,
    pub probe_velocity_m_s: f64,
    pub oracle_samples: usize,
}

impl ScenarioConfig {
    pub fn model(&self) -> ScaleFactorModel {
        let kind = match self.chi_kind {
            "exponential" => ScaleFactorKind::Exponential,
            _ => ScaleFactorKind::Linear,
        };
        ScaleFactorModel { kind, rate: self.chi_rate }
    }

    pub fn scenario(&self) -> RoundTripScenario {
        self.scenario_with_steps(self.steps)
    }

    pub fn scenario_with_steps(&self, steps: usize) -> RoundTripScenario {
        RoundTripScenario {
            r: self.r_m,
            omega: self.omega,
            duration: self.t_s,
            theta: self.theta,
            steps,
            c: SPEED_OF_LIGHT,
        }
    }

    pub fn wants(&self, output: Output) -> bool {
        self.outputs.contains(&output)
    }

    /// `χ̇T`.
    pub fn epsilon(&self) -> f64 {
        self.model().adiabaticity(self.t_s)
    }
}

/// One problem with one field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

pub fn parse_str(text: &str, origin: &str) -> Result<RawConfig, CliError> {
    toml::from_str(text).map_err(|e| CliError::Config {
        origin: origin.to_string(),
        errors: vec![FieldError { field: "<document>".into(), message: e.message().to_string() }],
    })
}

pub fn load_file(path: &Path) -> Result<RawConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    parse_str(&text, &path.display().to_string())
}

struct Collector {
    errors: Vec<FieldError>,
}

impl Collector {
    fn push(&mut self, field: &str, message: impl Into<String>) {
        self.errors.push(FieldError { field: field.to_string(), message: message.into() });
    }

    fn required<T: Clone>(&mut self, field: &str, value: &Option<T>) -> Option<T> {
        if value.is_none() {
            self.push(field, "missing");
        }
        value.clone()
    }
}

/// Checks every field and every downstream precondition; reports all problems
/// at once.
pub fn validate(
    raw: &RawConfig,
    origin: &str,
    steps_override: Option<usize>,
) -> Result<ScenarioConfig, CliError> {
    let mut c = Collector { errors: Vec::new() };

    let name = c.required("name", &raw.name).unwrap_or_default();
    if raw.name.is_some() {
        let ok = !name.is_empty()
            && name.len() <= 64
            && name.chars().all(|ch| ch.is_ascii_alphanumeric() || "-_.".contains(ch))
            && !name.starts_with('.');
        if !ok {
            c.push("name", "use 1-64 characters from [A-Za-z0-9._-], not starting with '.'");
        }
    }

    let chi_kind = match c.required("chi_kind", &raw.chi_kind).as_deref() {
        Some("linear") => "linear",
        Some("exponential") => "exponential",
        Some(other) => {
            c.push("chi_kind", format!("expected \"linear\" or \"exponential\", got {other:?}"));
            "linear"
        }
        None => "linear",
    };

    let chi_rate = c.required("chi_rate", &raw.chi_rate).unwrap_or(0.0);
    if !chi_rate.is_finite() {
        c.push("chi_rate", "must be finite");
    }

    let r_m = match c.required("R", &raw.r) {
        Some(q) => match parse_length(&q) {
            Ok(v) if v.is_finite() && v > 0.0 => v,
            Ok(v) => {
                c.push("R", format!("must be positive and finite, got {v}"));
                f64::NAN
            }
            Err(m) => {
                c.push("R", m);
                f64::NAN
            }
        },
        None => f64::NAN,
    };

    let omega = c.required("omega", &raw.omega).unwrap_or(f64::NAN);
    if raw.omega.is_some() && !(omega.is_finite() && omega > 0.0) {
        c.push("omega", format!("must be positive and finite, got {omega}"));
    }

    let t_s = match c.required("T", &raw.t) {
        Some(q) => match parse_duration(&q, r_m) {
            Ok(v) if v.is_finite() && v > 0.0 => v,
            Ok(v) => {
                c.push("T", format!("must be positive and finite, got {v}"));
                f64::NAN
            }
            Err(m) => {
                c.push("T", m);
                f64::NAN
            }
        },
        None => f64::NAN,
    };

    let theta = match c.required("theta", &raw.theta) {
        Some(q) => match parse_angle(&q) {
            Ok(v) if (0.0..=std::f64::consts::PI).contains(&v) => v,
            Ok(v) => {
                c.push("theta", format!("{v} is outside [0, π]"));
                f64::NAN
            }
            Err(m) => {
                c.push("theta", m);
                f64::NAN
            }
        },
        None => f64::NAN,
    };

    let steps = match (steps_override, raw.steps) {
        (Some(n), _) => check_count(&mut c, "steps", n as i64, 2, MAX_STEPS),
        (None, Some(n)) => check_count(&mut c, "steps", n, 2, MAX_STEPS),
        (None, None) => {
            c.push("steps", "missing");
            0
        }
    };

    let mut outputs = Vec::new();
    if let Some(list) = c.required("outputs", &raw.outputs) {
        if list.is_empty() {
            c.push("outputs", "list is empty");
        }
        for item in list {
            match Output::parse(&item) {
                Some(o) if !outputs.contains(&o) => outputs.push(o),
                Some(_) => c.push("outputs", format!("{item:?} listed twice")),
                None => c.push(
                    "outputs",
                    format!(
                        "unknown output {item:?}; choose from trajectory, phases, anomaly, appendix, sweep"
                    ),
                ),
            }
        }
    }
    outputs.sort();

    let probe_velocity_m_s = match &raw.probe_velocity {
        Some(q) => match parse_velocity(q) {
            Ok(v) if v.is_finite() => v,
            Ok(v) => {
                c.push("probe_velocity", format!("must be finite, got {v}"));
                0.0
            }
            Err(m) => {
                c.push("probe_velocity", m);
                0.0
            }
        },
        None => DEFAULT_PROBE_VELOCITY,
    };

    let oracle_samples = match raw.oracle_samples {
        Some(n) => check_count(&mut c, "oracle_samples", n, 1, MAX_ORACLE_SAMPLES),
        None => DEFAULT_ORACLE_SAMPLES,
    };

    if c.errors.is_empty() {
        let config = ScenarioConfig {
            name,
            chi_kind,
            chi_rate,
            r_m,
            omega,
            t_s,
            theta,
            steps,
            outputs,
            probe_velocity_m_s,
            oracle_samples,
        };
        check_preconditions(&config, &mut c);
        if c.errors.is_empty() {
            return Ok(config);
        }
    }
    Err(CliError::Config { origin: origin.to_string(), errors: c.errors })
}

fn check_count(c: &mut Collector, field: &str, n: i64, min: usize, max: usize) -> usize {
    if n < min as i64 || n > max as i64 {
        c.push(field, format!("must lie in [{min}, {max}], got {n}"));
        min
    } else {
        n as usize
    }
}

/// Downstream checks that depend on several fields at once.
fn check_preconditions(config: &ScenarioConfig, c: &mut Collector) {
    let tol = Tolerances::DEFAULT;
    if let Err(e) = config.scenario().validate() {
        c.push("scenario", e.to_string());
    }
    let m = config.model();
    // χ must stay positive over the run.
    let chi_end = m.chi(config.t_s);
    if !(chi_end > 0.0) {
        c.push("chi_rate", format!("scale factor reaches {chi_end} before T"));
    }
    // The state must be resolved finely enough for phase unwrapping.
    let delta_phi = 2.0 * config.scenario().optical_length() * m.growth(config.t_s).abs();
    let min_steps = if config.wants(Output::Sweep) { 1000.min(config.steps) } else { config.steps };
    let per_step = delta_phi / min_steps as f64;
    if per_step / 2.0 >= 1.0 {
        c.push(
            "steps",
            format!(
                "{min_steps} steps leave a phase step of {per_step:.3} rad; need below 2 rad (raise steps)"
            ),
        );
    }
    if (config.probe_velocity_m_s / SPEED_OF_LIGHT).abs() > tol.appendix_velocity {
        c.push("probe_velocity", "must be well below c");
    }
}

fn split_unit(text: &str) -> Result<(f64, String), String> {
    let trimmed = text.trim();
    let idx = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
    let (num, unit) = trimmed.split_at(idx);
    let value: f64 =
        num.parse().map_err(|_| format!("cannot read a number from {text:?}"))?;
    Ok((value, unit.trim().to_string()))
}

pub fn parse_length(q: &Quantity) -> Result<f64, String> {
    match q {
        Quantity::Number(v) => Ok(*v),
        Quantity::Text(t) => {
            let (v, unit) = split_unit(t)?;
            match unit.as_str() {
                "AU" | "au" => Ok(v * ASTRONOMICAL_UNIT),
                "km" => Ok(v * 1e3),
                "m" | "" => Ok(v),
                other => Err(format!("unknown length unit {other:?}; use AU, km or m")),
            }
        }
    }
}

/// `"round-trip"` means `2R/c`.
pub fn parse_duration(q: &Quantity, r_m: f64) -> Result<f64, String> {
    match q {
        Quantity::Number(v) => Ok(*v),
        Quantity::Text(t) if t.trim() == "round-trip" => {
            if r_m.is_nan() {
                Err("\"round-trip\" needs a valid R".into())
            } else {
                Ok(RoundTripScenario::light_round_trip(r_m))
            }
        }
        Quantity::Text(t) => {
            let (v, unit) = split_unit(t)?;
            match unit.as_str() {
                "s" | "" => Ok(v),
                other => Err(format!("unknown time unit {other:?}; use s or \"round-trip\"")),
            }
        }
    }
}

pub fn parse_velocity(q: &Quantity) -> Result<f64, String> {
    match q {
        Quantity::Number(v) => Ok(*v),
        Quantity::Text(t) => {
            let (v, unit) = split_unit(t)?;
            match unit.as_str() {
                "km/s" => Ok(v * 1e3),
                "m/s" | "" => Ok(v),
                other => Err(format!("unknown velocity unit {other:?}; use km/s or m/s")),
            }
        }
    }
}

/// A number in radians or `[k]pi[/d]`.
pub fn parse_angle(q: &Quantity) -> Result<f64, String> {
    let text = match q {
        Quantity::Number(v) => return Ok(*v),
        Quantity::Text(t) => t.trim(),
    };
    let bad = || format!("cannot read angle {text:?}; use radians or forms like \"pi/3\", \"2pi/3\"");
    let Some(pos) = text.find("pi") else {
        return text.parse().map_err(|_| bad());
    };
    let (coef, rest) = text.split_at(pos);
    let k: f64 = match coef.trim() {
        "" => 1.0,
        s => s.trim_end_matches('*').parse().map_err(|_| bad())?,
    };
    let rest = rest[2..].trim();
    let d: f64 = match rest.strip_prefix('/') {
        Some(s) => s.trim().parse().map_err(|_| bad())?,
        None if rest.is_empty() => 1.0,
        None => return Err(bad()),
    };
    if d == 0.0 {
        return Err(bad());
    }
    Ok(k * std::f64::consts::PI / d)
}
