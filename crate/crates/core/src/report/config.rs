use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::dynamics::{Preset, StateSpec};
use crate::entanglement::Bipartition;
use crate::error::{Error, Result};
use crate::lattice::MIN_SITES;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Config(format!("unknown output format '{other}'"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

/// Everything a command needs. Empty `sites`/`interactions` and a missing
/// `state` mean "use the command's default".
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub sites: Vec<usize>,
    pub hopping: f64,
    pub interactions: Vec<f64>,
    pub state: Option<String>,
    pub tau_max: f64,
    pub tau_steps: usize,
    pub partition: Option<String>,
    pub out: PathBuf,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: String::new(),
            sites: Vec::new(),
            hopping: 1.0,
            interactions: Vec::new(),
            state: None,
            tau_max: 4.0,
            tau_steps: 201,
            partition: None,
            out: PathBuf::from("out"),
            format: OutputFormat::Csv,
        }
    }
}

impl RunConfig {
    pub fn new(command: impl Into<String>) -> Self {
        Self { command: command.into(), ..Self::default() }
    }

    /// Overlays the entries of a key-value config file.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (key, value) in parse_key_values(text)? {
            self.set(&key, &value)?;
        }
        Ok(())
    }

    /// Sets one field from its textual form. List-valued keys take
    /// comma-separated values.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Config(format!("invalid {what} '{value}'"));
        match key.replace('-', "_").as_str() {
            "command" => self.command = value.to_string(),
            "n" | "sites" => {
                self.sites = split_list(value).map(|s| s.parse().map_err(|_| bad("N"))).collect::<Result<_>>()?;
            }
            "j" | "hopping" => self.hopping = value.parse().map_err(|_| bad("J"))?,
            "v" | "interaction" | "interactions" => {
                self.interactions = split_list(value).map(|s| s.parse().map_err(|_| bad("V"))).collect::<Result<_>>()?;
            }
            "state" => self.state = Some(value.to_string()),
            "tau_max" => self.tau_max = value.parse().map_err(|_| bad("tau_max"))?,
            "tau_steps" => self.tau_steps = value.parse().map_err(|_| bad("tau_steps"))?,
            "partition" => self.partition = Some(value.to_string()),
            "out" => self.out = PathBuf::from(value),
            "format" => self.format = value.parse()?,
            other => return Err(Error::Config(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    pub(crate) fn validate_common(&self) -> Result<()> {
        if !(self.hopping.is_finite() && self.hopping > 0.0) {
            return Err(Error::Config(format!("J must be positive and finite, got {}", self.hopping)));
        }
        if let Some(&n) = self.sites.iter().find(|&&n| n < MIN_SITES) {
            return Err(Error::Config(format!("N must be at least {MIN_SITES}, got {n}")));
        }
        if let Some(v) = self.interactions.iter().find(|v| !v.is_finite()) {
            return Err(Error::Config(format!("V must be finite, got {v}")));
        }
        if !(self.tau_max.is_finite() && self.tau_max >= 0.0) {
            return Err(Error::Config(format!("tau_max must be non-negative, got {}", self.tau_max)));
        }
        if self.tau_steps == 0 {
            return Err(Error::Config("tau_steps must be at least 1".into()));
        }
        Ok(())
    }

    /// The single ring size, or `default` when none was given.
    pub fn single_sites(&self, default: usize) -> Result<usize> {
        match self.sites.as_slice() {
            [] => Ok(default),
            [n] => Ok(*n),
            _ => Err(Error::Config(format!("command '{}' takes a single N", self.command))),
        }
    }

    pub fn sites_or(&self, default: impl IntoIterator<Item = usize>) -> Vec<usize> {
        if self.sites.is_empty() {
            default.into_iter().collect()
        } else {
            self.sites.clone()
        }
    }

    pub fn interactions_or(&self, default: &[f64]) -> Vec<f64> {
        if self.interactions.is_empty() {
            default.to_vec()
        } else {
            self.interactions.clone()
        }
    }

    /// Resolves `state` as a preset name or an inline term list.
    pub fn state_spec(&self, sites: usize, default: Preset) -> Result<StateSpec> {
        match self.state.as_deref().map(str::trim) {
            None | Some("") => Ok(default.spec(sites)),
            Some(text) if text.contains(',') => StateSpec::parse_terms(sites, text),
            Some(text) => Ok(text.parse::<Preset>()?.spec(sites)),
        }
    }

    /// Human-readable name of the resolved state.
    pub fn state_label(&self, default: Preset) -> String {
        match self.state.as_deref().map(str::trim) {
            None | Some("") => default.name().to_string(),
            Some(text) => text.parse::<Preset>().map(|p| p.name().to_string()).unwrap_or_else(|_| text.to_string()),
        }
    }

    pub fn bipartition(&self, sites: usize) -> Result<Bipartition> {
        match self.partition.as_deref() {
            None => Bipartition::halves(sites),
            Some(text) => Bipartition::parse(sites, text),
        }
    }
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// Parses `key = value` lines. `#` starts a comment; blank lines are skipped.
/// Later occurrences of a key replace earlier ones.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", lineno + 1)))?;
        let key = key.trim().to_ascii_lowercase();
        if key.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", lineno + 1)));
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}
