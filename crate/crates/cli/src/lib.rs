//! Experiment runner: flag/config parsing and the subcommands behind the
//! `plap` binary.

pub mod commands;
pub mod config;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{execute, Status};
pub use config::{Command, ExperimentConfig, RawConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error in '{key}': {message}")]
    Config { key: String, message: String },
    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Solver(#[from] plap::Error),
}

impl CliError {
    pub fn config(key: &str, message: impl Into<String>) -> Self {
        CliError::Config {
            key: key.to_string(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => Status::ConfigError.code(),
            CliError::Solver(
                plap::Error::GridTooLarge { .. }
                | plap::Error::ExponentOutOfRange(_)
                | plap::Error::StepTooLarge { .. }
                | plap::Error::InvalidConfig(_)
                | plap::Error::UnknownSolution(_)
                | plap::Error::Parse(_)
                | plap::Error::TooFewNodes(_)
                | plap::Error::EmptyInterval { .. }
                | plap::Error::NonSquareCells { .. },
            ) => Status::ConfigError.code(),
            _ => Status::Failure.code(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "plap", version, about = "Wide-stencil p-Laplacian experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Solve one problem; writes the field and the iteration report.
    Solve(Options),
    /// Solve every combination of the listed parameters.
    Sweep(Options),
    /// Operator error versus h and circle-oracle estimates versus radius.
    Consistency(Options),
    /// Solve with the non-monotone standard scheme and compare to |x|-|y|.
    FailureDemo(Options),
    /// Tabulate the linear contraction model.
    ContractionModel(Options),
    /// Run the experiment described by a config file.
    Run {
        #[arg(value_name = "CONFIG")]
        file: PathBuf,
        #[command(flatten)]
        options: Options,
    },
}

/// Every key may also be given in a config file; file values win.
#[derive(Debug, Default, Args)]
pub struct Options {
    /// key = value file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Nodes per side (comma list for sweeps)
    #[arg(long)]
    pub n: Option<String>,
    /// Stencil size in points: 5, 9 or 17
    #[arg(long)]
    pub stencil: Option<String>,
    /// Exponent p in [2, inf] (comma list for sweeps)
    #[arg(long)]
    pub p: Option<String>,
    /// alpha = 1/p in [0, 1/2], alternative to --p
    #[arg(long)]
    pub alpha: Option<String>,
    /// Boundary data, e.g. aronsson or cone_plus_linear:c=0.125 (';' list)
    #[arg(long)]
    pub boundary: Option<String>,
    /// Right-hand side g (zero, const:c=<v> or a named field)
    #[arg(long)]
    pub rhs: Option<String>,
    /// Exact solution(s) to track the error against (';' list)
    #[arg(long)]
    pub exact: Option<String>,
    /// explicit, semi-implicit or both (sweep only)
    #[arg(long)]
    pub method: Option<String>,
    /// Stop when the successive max-norm change is at most this
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long = "max-iters")]
    pub max_iters: Option<String>,
    /// Explicit step override
    #[arg(long)]
    pub rho: Option<String>,
    /// lo,hi or xmin,xmax,ymin,ymax (square)
    #[arg(long)]
    pub domain: Option<String>,
    /// Output directory (overridden by PLAP_OUTPUT_DIR)
    #[arg(long)]
    pub output: Option<String>,
    /// File name prefix
    #[arg(long)]
    pub name: Option<String>,
    /// Evaluation point x,y for the consistency study
    #[arg(long)]
    pub point: Option<String>,
    /// Circle-oracle centre x,y
    #[arg(long = "oracle-point")]
    pub oracle_point: Option<String>,
    /// Circle radii (comma list)
    #[arg(long)]
    pub eps: Option<String>,
    /// Circle samples (at least 10^4)
    #[arg(long)]
    pub samples: Option<String>,
    /// Gradient regularization of the standard scheme (default h)
    #[arg(long = "h-reg")]
    pub h_reg: Option<String>,
    /// Write solution fields in sweeps
    #[arg(long = "write-fields")]
    pub write_fields: Option<String>,
}

impl Options {
    fn to_raw(&self) -> RawConfig {
        let pairs = [
            ("n", &self.n),
            ("stencil", &self.stencil),
            ("p", &self.p),
            ("alpha", &self.alpha),
            ("boundary", &self.boundary),
            ("rhs", &self.rhs),
            ("exact", &self.exact),
            ("method", &self.method),
            ("tol", &self.tol),
            ("max-iters", &self.max_iters),
            ("rho", &self.rho),
            ("domain", &self.domain),
            ("output", &self.output),
            ("name", &self.name),
            ("point", &self.point),
            ("oracle-point", &self.oracle_point),
            ("eps", &self.eps),
            ("samples", &self.samples),
            ("h-reg", &self.h_reg),
            ("write-fields", &self.write_fields),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect()
    }
}

/// Resolves flags, config file and environment into a validated config.
pub fn resolve(cli: &Cli, env_output: Option<PathBuf>) -> Result<ExperimentConfig, CliError> {
    let (command, options, file) = match &cli.command {
        CliCommand::Solve(o) => (Some(Command::Solve), o, o.config.clone()),
        CliCommand::Sweep(o) => (Some(Command::Sweep), o, o.config.clone()),
        CliCommand::Consistency(o) => (Some(Command::Consistency), o, o.config.clone()),
        CliCommand::FailureDemo(o) => (Some(Command::FailureDemo), o, o.config.clone()),
        CliCommand::ContractionModel(o) => (Some(Command::ContractionModel), o, o.config.clone()),
        CliCommand::Run { file, options } => {
            if options.config.is_some() {
                return Err(CliError::config(
                    "config",
                    "run takes the config file as its argument",
                ));
            }
            (None, options, Some(file.clone()))
        }
    };
    let mut flags = options.to_raw();
    if let Some(c) = command {
        flags.insert("command".into(), c.name().into());
    }
    let raw = match file {
        Some(path) => config::merge(flags, config::read_config_file(&path)?),
        None => flags,
    };
    ExperimentConfig::from_raw(&raw, env_output)
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                Status::ConfigError.code()
            } else {
                0
            };
        }
    };
    let env_output = std::env::var_os(config::OUTPUT_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from);
    let result = resolve(&cli, env_output).and_then(|config| execute(&config));
    match result {
        Ok(status) => status.code(),
        Err(e) => {
            eprintln!("plap: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn every_option_is_a_config_key() {
        let raw = Options::default().to_raw();
        assert!(raw.is_empty());
        for key in config::KEYS.iter().filter(|k| **k != "command") {
            let cli = Cli::command();
            let solve = cli.find_subcommand("solve").unwrap();
            assert!(
                solve.get_arguments().any(|a| a.get_long() == Some(*key)),
                "{key}"
            );
        }
    }
}
