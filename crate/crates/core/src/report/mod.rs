//! Named analyses that turn a [`RunConfig`] into CSV/JSON artifacts.
//!
//! Each analysis implements [`Command`] and is looked up by name in a
//! [`CommandRegistry`]. Output is a list of in-memory [`Artifact`]s so that
//! runs can be compared byte-for-byte before anything touches the disk.

mod commands;
mod config;
mod output;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub use commands::{DeltaCommand, DeviationCommand, EvolveCommand, ProjectionsCommand, SpectrumCommand, SymmetryCommand};
pub use config::{parse_key_values, OutputFormat, RunConfig};
pub use output::SCHEMA_VERSION;

/// One output file, not yet written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub file_name: String,
    pub contents: String,
}

impl Artifact {
    pub fn new(file_name: impl Into<String>, contents: impl Into<String>) -> Self {
        Self { file_name: file_name.into(), contents: contents.into() }
    }
}

pub trait Command: Send + Sync {
    fn name(&self) -> &'static str;

    fn about(&self) -> &'static str;

    /// Rejects configurations the command cannot run with.
    fn validate(&self, config: &RunConfig) -> Result<()> {
        config.validate_common()
    }

    fn run(&self, config: &RunConfig) -> Result<Vec<Artifact>>;
}

#[derive(Default)]
pub struct CommandRegistry {
    commands: BTreeMap<&'static str, Box<dyn Command>>,
}

impl CommandRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry with the six built-in analyses.
    pub fn builtin() -> Self {
        let mut registry = Self::new();
        registry.register(Box::new(SpectrumCommand));
        registry.register(Box::new(DeviationCommand));
        registry.register(Box::new(EvolveCommand));
        registry.register(Box::new(ProjectionsCommand));
        registry.register(Box::new(DeltaCommand));
        registry.register(Box::new(SymmetryCommand));
        registry
    }

    /// Adds a command, replacing any earlier one with the same name.
    pub fn register(&mut self, command: Box<dyn Command>) -> Option<Box<dyn Command>> {
        self.commands.insert(command.name(), command)
    }

    pub fn get(&self, name: &str) -> Option<&dyn Command> {
        self.commands.get(name).map(|c| c.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.commands.keys().copied()
    }

    pub fn commands(&self) -> impl Iterator<Item = &dyn Command> + '_ {
        self.commands.values().map(|c| c.as_ref())
    }

    /// Validates and runs the command named in `config`.
    pub fn execute(&self, config: &RunConfig) -> Result<Vec<Artifact>> {
        let command = self.get(&config.command).ok_or_else(|| {
            let known: Vec<&str> = self.names().collect();
            Error::Config(format!("unknown command '{}' (expected one of: {})", config.command, known.join(", ")))
        })?;
        command.validate(config)?;
        command.run(config)
    }
}

/// Writes artifacts under `dir`, creating it if needed. Returns the paths.
pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    artifacts
        .iter()
        .map(|a| {
            let path = dir.join(&a.file_name);
            fs::write(&path, &a.contents)?;
            Ok(path)
        })
        .collect()
}
