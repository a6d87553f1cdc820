//! Command-line grammar, mapped onto [`RunConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{parse_k_range, parse_point, Command, Format, RunConfig};
use crate::error::CliResult;

#[derive(Debug, Parser)]
#[command(
    name = "mvb",
    version,
    about = "Multivariate Bernoulli models: fitting, structure, sampling and conversion"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,

    /// Cap on worker threads for per-sample parallel work.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    /// Allow dimensions 16 to 20.
    #[arg(long, global = true)]
    pub force_large_k: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
    Dot,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Dot => Format::Dot,
        }
    }
}

#[derive(Debug, Args)]
pub struct Io {
    #[arg(long, short, value_name = "FILE")]
    pub input: PathBuf,
    /// Write here instead of standard output.
    #[arg(long, short, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Debug, Args)]
pub struct Newton {
    /// Stop when the largest gradient entry is below this.
    #[arg(long, default_value_t = 1e-8)]
    pub gtol: f64,
    #[arg(long, value_name = "N")]
    pub max_iter: Option<usize>,
    /// Fit on standardized covariates and map the coefficients back.
    #[arg(long)]
    pub standardize: bool,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Maximum-likelihood fit of a data CSV; writes model JSON.
    Fit {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        newton: Newton,
    },
    /// L1-penalized fit at one λ; writes model JSON with a KKT report.
    FitL1 {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        lambda: f64,
        #[arg(long, value_name = "N")]
        max_iter: Option<usize>,
    },
    /// Regularization path; writes the score CSV and the BIC-selected model.
    Path {
        #[command(flatten)]
        io: Io,
        /// Number of λ values.
        #[arg(long, default_value_t = 50)]
        grid: usize,
        /// Model JSON destination [default: <output>.best.json].
        #[arg(long, value_name = "FILE")]
        best_model: Option<PathBuf>,
        #[arg(long, value_name = "N")]
        max_iter: Option<usize>,
    },
    /// Graph read-out from a model or parameter file.
    Structure {
        #[command(flatten)]
        io: Io,
        /// Covariate point, e.g. "0.3,1.2"; intercepts when omitted.
        #[arg(long, value_name = "X", allow_hyphen_values = true)]
        at: Option<String>,
        /// Parameters with magnitude at or below this are treated as zero.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Draw outcomes from a parameter file; writes CSV.
    Sample {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Probability of one outcome, e.g. --outcome 1,0.
    Density {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        outcome: String,
    },
    /// Natural ↔ general parameter conversion (direction auto-detected).
    Convert {
        #[command(flatten)]
        io: Io,
    },
    /// Parameter counts of the MVB, Ising and Gaussian models.
    Counts {
        /// A dimension or an inclusive range such as 1-10.
        #[arg(long)]
        k: String,
        #[arg(long, short, value_name = "FILE")]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
}

fn with_io(command: Command, io: Io) -> RunConfig {
    let mut c = RunConfig::new(command);
    c.input = Some(io.input);
    c.output = io.output;
    c.format = io.format.map(Into::into);
    c
}

impl Cli {
    pub fn into_config(self) -> CliResult<RunConfig> {
        let mut c = match self.command {
            Cmd::Fit { io, newton } => {
                let mut c = with_io(Command::Fit, io);
                c.solver.gtol = newton.gtol;
                c.solver.max_iter = newton.max_iter;
                c.solver.standardize = newton.standardize;
                c
            }
            Cmd::FitL1 {
                io,
                lambda,
                max_iter,
            } => {
                let mut c = with_io(Command::FitL1, io);
                c.solver.lambda = Some(lambda);
                c.solver.max_iter = max_iter;
                c
            }
            Cmd::Path {
                io,
                grid,
                best_model,
                max_iter,
            } => {
                let mut c = with_io(Command::Path, io);
                c.solver.grid = grid;
                c.solver.max_iter = max_iter;
                c.best_model = best_model;
                c
            }
            Cmd::Structure { io, at, tol } => {
                let mut c = with_io(Command::Structure, io);
                c.at = at.as_deref().map(parse_point).transpose()?;
                c.solver.tol = tol;
                c
            }
            Cmd::Sample { io, n, seed } => {
                let mut c = with_io(Command::Sample, io);
                c.n = Some(n);
                c.solver.seed = Some(seed);
                c
            }
            Cmd::Density { io, outcome } => {
                let mut c = with_io(Command::Density, io);
                c.outcome = Some(outcome);
                c
            }
            Cmd::Convert { io } => with_io(Command::Convert, io),
            Cmd::Counts { k, output, format } => {
                let mut c = RunConfig::new(Command::Counts);
                c.k_range = Some(parse_k_range(&k)?);
                c.output = output;
                c.format = format.map(Into::into);
                c
            }
        };
        c.force_large_k = self.force_large_k;
        Ok(c)
    }
}
