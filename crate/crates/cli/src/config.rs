use std::path::PathBuf;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Fit,
    FitL1,
    Path,
    Structure,
    Sample,
    Density,
    Convert,
    Counts,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Fit => "fit",
            Command::FitL1 => "fit-l1",
            Command::Path => "path",
            Command::Structure => "structure",
            Command::Sample => "sample",
            Command::Density => "density",
            Command::Convert => "convert",
            Command::Counts => "counts",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Dot,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Dot => "dot",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub gtol: f64,
    /// Iteration cap; the solver's own default when absent.
    pub max_iter: Option<usize>,
    pub lambda: Option<f64>,
    pub grid: usize,
    pub seed: Option<u64>,
    /// Structure threshold.
    pub tol: f64,
    pub standardize: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            gtol: 1e-8,
            max_iter: None,
            lambda: None,
            grid: 50,
            seed: None,
            tol: 1e-8,
            standardize: false,
        }
    }
}

/// Everything one invocation needs. Output goes to `output` when set,
/// otherwise to standard output.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    /// Where `path` writes the BIC-selected model.
    pub best_model: Option<PathBuf>,
    pub solver: SolverOptions,
    pub format: Option<Format>,
    /// Covariate point for `structure`.
    pub at: Option<Vec<f64>>,
    /// Number of draws for `sample`.
    pub n: Option<usize>,
    /// Queried outcome for `density`, as `"1,0,1"`.
    pub outcome: Option<String>,
    /// Inclusive dimension range for `counts`.
    pub k_range: Option<(usize, usize)>,
    pub force_large_k: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            input: None,
            output: None,
            best_model: None,
            solver: SolverOptions::default(),
            format: None,
            at: None,
            n: None,
            outcome: None,
            k_range: None,
            force_large_k: false,
        }
    }

    pub(crate) fn require_input(&self) -> CliResult<&PathBuf> {
        self.input.as_ref().ok_or_else(|| {
            CliError::Usage(format!("{} requires --input", self.command.name()))
        })
    }

    /// The requested format if it is one of `allowed`, else the first of them.
    pub(crate) fn format_among(&self, allowed: &[Format]) -> CliResult<Format> {
        match self.format {
            None => Ok(allowed[0]),
            Some(f) if allowed.contains(&f) => Ok(f),
            Some(f) => Err(CliError::Usage(format!(
                "{} does not support format {}",
                self.command.name(),
                f.name()
            ))),
        }
    }
}

/// Parses `"3"`, `"1-10"` or `"1..10"` (inclusive).
pub fn parse_k_range(text: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Usage(format!("invalid k range {text:?}; use K or A-B"));
    let text = text.trim();
    let (a, b) = if let Some((a, b)) = text.split_once("..=") {
        (a, b)
    } else if let Some((a, b)) = text.split_once("..") {
        (a, b)
    } else if let Some((a, b)) = text.split_once('-') {
        (a, b)
    } else {
        (text, text)
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

/// Parses a comma-separated list of finite numbers such as `"0.3,1.2"`.
pub fn parse_point(text: &str) -> CliResult<Vec<f64>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Usage(format!("invalid number {t:?} in {text:?}")))
        })
        .collect()
}
