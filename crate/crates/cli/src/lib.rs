//! Command-line front end: scenario configuration and the `validate`, `brane`,
//! `audit` and `sweep` subcommands.

pub mod commands;
pub mod config;
pub mod error;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{read_document, ScenarioConfig, SweepSpec, SCENARIO_KEYS, SWEEP_KEYS};
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "weylbrane", version, about = "Weyl-integrable bulk and induced brane cosmology toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the curvature and Weyl-structure golden checks.
    Validate(ValidateArgs),
    /// Tabulate the induced brane fluid over the time grid.
    #[command(allow_negative_numbers = true)]
    Brane(ScenarioArgs),
    /// Tabulate field-equation residuals over the time grid.
    #[command(allow_negative_numbers = true)]
    Audit(ScenarioArgs),
    /// Scan the power-law exponent and classify each value.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Reverse the Riemann sign convention (negative control).
    #[arg(long = "flip-riemann-sign", hide = true)]
    pub flip_riemann_sign: bool,
}

#[derive(Debug, Default, Args)]
pub struct ScenarioArgs {
    /// Key-value scenario file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long = "p")]
    pub p: Option<f64>,
    #[arg(long = "a0")]
    pub a0: Option<f64>,
    #[arg(long = "t0")]
    pub t0: Option<f64>,
    #[arg(long = "A1")]
    pub a1: Option<f64>,
    #[arg(long = "A2")]
    pub a2: Option<f64>,
    #[arg(long = "C1")]
    pub c1: Option<f64>,
    #[arg(long = "C2")]
    pub c2: Option<f64>,
    #[arg(long = "xi")]
    pub xi: Option<f64>,
    #[arg(long = "t_min")]
    pub t_min: Option<f64>,
    #[arg(long = "t_max")]
    pub t_max: Option<f64>,
    #[arg(long = "samples")]
    pub samples: Option<usize>,
    #[arg(long = "log_spacing")]
    pub log_spacing: Option<bool>,
    #[arg(long = "l0")]
    pub l0: Option<f64>,
    #[arg(long = "output_dir")]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long = "p_min")]
    pub p_min: Option<f64>,
    #[arg(long = "p_max")]
    pub p_max: Option<f64>,
    #[arg(long = "steps")]
    pub steps: Option<usize>,
    /// Worker threads; output does not depend on it.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

impl ScenarioArgs {
    fn apply(&self, cfg: &mut ScenarioConfig) {
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { cfg.$f = v; } )* };
        }
        take!(p, a0, t0, a1, a2, c1, c2, xi, t_min, t_max, samples, log_spacing, l0);
        if let Some(dir) = &self.output_dir {
            cfg.output_dir = dir.clone();
        }
    }

    /// File values first, then flags.
    pub fn resolve(&self) -> Result<ScenarioConfig, CliError> {
        let mut cfg = ScenarioConfig::default();
        if let Some(path) = &self.config {
            for (k, v) in read_document(path, SCENARIO_KEYS)? {
                cfg.set(&k, &v)?;
            }
        }
        self.apply(&mut cfg);
        cfg.validate()?;
        Ok(cfg)
    }
}

impl SweepArgs {
    pub fn resolve(&self) -> Result<SweepSpec, CliError> {
        let mut spec = SweepSpec::default();
        if let Some(path) = &self.scenario.config {
            for (k, v) in read_document(path, &[SCENARIO_KEYS, SWEEP_KEYS].concat())? {
                spec.set(&k, &v)?;
            }
        }
        self.scenario.apply(&mut spec.base);
        if let Some(v) = self.p_min {
            spec.p_min = v;
        }
        if let Some(v) = self.p_max {
            spec.p_max = v;
        }
        if let Some(v) = self.steps {
            spec.steps = v;
        }
        spec.validate()?;
        if self.workers == 0 {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        Ok(spec)
    }
}

/// Executes a parsed command, writing the plain-text summary to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let write = |out: &mut dyn Write, text: &str| {
        out.write_all(text.as_bytes())
            .map_err(|source| CliError::Output { path: "<stdout>".into(), source })
    };
    let text = match &cli.command {
        Command::Validate(args) => {
            let (report, status) = commands::validate::run(args.flip_riemann_sign);
            write(out, &report)?;
            return status;
        }
        Command::Brane(args) => commands::brane::run(&args.resolve()?)?.summary,
        Command::Audit(args) => commands::audit::run(&args.resolve()?)?.summary,
        Command::Sweep(args) => commands::sweep::run(&args.resolve()?, args.workers)?.summary,
    };
    write(out, &text)
}

/// Parses `args` and runs them, returning the process exit code.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match run(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
