use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelChoice {
    Plasma,
    Drude,
    Both,
}

impl FromStr for ModelChoice {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "plasma" => Ok(Self::Plasma),
            "drude" => Ok(Self::Drude),
            "both" => Ok(Self::Both),
            _ => Err(CliError::config(format!(
                "unknown model '{s}' (expected plasma, drude or both)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    FreeEnergy,
    Pressure,
    Entropy,
    Decomposition,
    Asymptotics,
    BoundCheck,
}

impl Output {
    pub const ALL: [Output; 6] = [
        Output::FreeEnergy,
        Output::Pressure,
        Output::Entropy,
        Output::Decomposition,
        Output::Asymptotics,
        Output::BoundCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Output::FreeEnergy => "free_energy",
            Output::Pressure => "pressure",
            Output::Entropy => "entropy",
            Output::Decomposition => "decomposition",
            Output::Asymptotics => "asymptotics",
            Output::BoundCheck => "bound_check",
        }
    }
}

impl FromStr for Output {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Output::ALL
            .into_iter()
            .find(|o| o.name() == s.trim())
            .ok_or_else(|| CliError::config(format!("unknown output '{s}'")))
    }
}

pub fn parse_outputs(s: &str) -> Result<BTreeSet<Output>, CliError> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(CliError::config(format!("unknown format '{s}' (expected csv or json)"))),
        }
    }
}

/// A list of grid values: a single number, a comma-separated list, or
/// `start:stop:lin|log:count`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sweep(pub Vec<f64>);

impl Sweep {
    pub fn single(v: f64) -> Self {
        Sweep(vec![v])
    }

    pub fn validate(&self, what: &str) -> Result<(), CliError> {
        if self.0.is_empty() {
            return Err(CliError::config(format!("{what} sweep is empty")));
        }
        if self.0.iter().any(|v| !v.is_finite()) {
            return Err(CliError::config(format!("{what} sweep contains a non-finite value")));
        }
        if self.0.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::config(format!("{what} sweep must be strictly increasing")));
        }
        Ok(())
    }
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

fn number(s: &str, what: &str) -> Result<f64, CliError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| CliError::config(format!("cannot parse '{s}' as a number in {what}")))
}

impl FromStr for Sweep {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [single] => single
                .split(',')
                .map(|v| number(v, s))
                .collect::<Result<Vec<_>, _>>()
                .map(Sweep),
            [start, stop, spacing, count] => {
                let (a, b) = (number(start, s)?, number(stop, s)?);
                let n: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| CliError::config(format!("bad point count in sweep '{s}'")))?;
                if n == 0 {
                    return Err(CliError::config(format!("sweep '{s}' has no points")));
                }
                if n == 1 {
                    return Ok(Sweep(vec![a]));
                }
                let frac = |i: usize| i as f64 / (n - 1) as f64;
                let values = match spacing.trim() {
                    "lin" | "linear" => (0..n).map(|i| a + (b - a) * frac(i)).collect(),
                    "log" => {
                        if !(a > 0.0 && b > 0.0) {
                            return Err(CliError::config(format!("log sweep '{s}' needs positive bounds")));
                        }
                        (0..n).map(|i| a * (b / a).powf(frac(i))).collect()
                    }
                    other => return Err(CliError::config(format!("unknown spacing '{other}' in sweep '{s}'"))),
                };
                Ok(Sweep(values))
            }
            _ => Err(CliError::config(format!(
                "cannot parse sweep '{s}' (use v, v1,v2,... or start:stop:lin|log:count)"
            ))),
        }
    }
}

impl<'de> Deserialize<'de> for Sweep {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            List(Vec<f64>),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Sweep(vec![v])),
            Raw::List(v) => Ok(Sweep(v)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Contents of a `--config` TOML file. Every key is optional.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub material: Option<String>,
    pub model: Option<ModelChoice>,
    pub a: Option<Sweep>,
    #[serde(rename = "T")]
    pub t: Option<Sweep>,
    pub outputs: Option<Vec<Output>>,
    pub format: Option<Format>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_l: Option<usize>,
    pub rel_step: Option<f64>,
    pub richardson_levels: Option<usize>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::config(format!("invalid config {}: {e}", path.display())))
    }
}

/// Fully resolved settings for one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub material: String,
    pub model: ModelChoice,
    pub a: Sweep,
    pub t: Sweep,
    pub outputs: BTreeSet<Output>,
    pub format: Format,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_l: usize,
    pub rel_step: f64,
    pub richardson_levels: usize,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let q = casimir_film::QuadratureConfig::default();
        let d = casimir_film::DiffConfig::default();
        Self {
            material: "gold".into(),
            model: ModelChoice::Plasma,
            a: Sweep::single(100e-9),
            t: Sweep::single(300.0),
            outputs: [Output::FreeEnergy].into_iter().collect(),
            format: Format::Csv,
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            max_l: q.max_l,
            rel_step: d.rel_step,
            richardson_levels: d.richardson_levels,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn apply_file(&mut self, f: FileConfig) {
        if let Some(v) = f.material {
            self.material = v;
        }
        if let Some(v) = f.model {
            self.model = v;
        }
        if let Some(v) = f.a {
            self.a = v;
        }
        if let Some(v) = f.t {
            self.t = v;
        }
        if let Some(v) = f.outputs {
            self.outputs = v.into_iter().collect();
        }
        if let Some(v) = f.format {
            self.format = v;
        }
        if let Some(v) = f.rel_tol {
            self.rel_tol = v;
        }
        if let Some(v) = f.abs_tol {
            self.abs_tol = v;
        }
        if let Some(v) = f.max_l {
            self.max_l = v;
        }
        if let Some(v) = f.rel_step {
            self.rel_step = v;
        }
        if let Some(v) = f.richardson_levels {
            self.richardson_levels = v;
        }
        if let Some(v) = f.out {
            self.out = Some(v);
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.a.validate("thickness")?;
        self.t.validate("temperature")?;
        if self.a.0.iter().any(|&a| a <= 0.0) {
            return Err(CliError::config("thickness must be positive"));
        }
        if self.t.0.iter().any(|&t| t < 0.0) {
            return Err(CliError::config("temperature must be non-negative"));
        }
        if self.outputs.is_empty() {
            return Err(CliError::config("no outputs requested"));
        }
        self.thermo().validate().map_err(|e| CliError::config(e.to_string()))
    }

    pub fn models(&self) -> Vec<casimir_film::dielectric::ModelKind> {
        use casimir_film::dielectric::ModelKind;
        match self.model {
            ModelChoice::Plasma => vec![ModelKind::Plasma],
            ModelChoice::Drude => vec![ModelKind::Drude],
            ModelChoice::Both => vec![ModelKind::Plasma, ModelKind::Drude],
        }
    }

    pub fn thermo(&self) -> casimir_film::ThermoConfig {
        casimir_film::ThermoConfig {
            quad: casimir_film::QuadratureConfig {
                rel_tol: self.rel_tol,
                abs_tol: self.abs_tol,
                max_l: self.max_l,
                ..Default::default()
            },
            diff: casimir_film::DiffConfig {
                rel_step: self.rel_step,
                richardson_levels: self.richardson_levels,
            },
            ..Default::default()
        }
    }
}
