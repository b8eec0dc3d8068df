//! Command-line front end: figure datasets, cycle reports, optimizer and
//! effective-temperature reports, occupation tables and relaxation runs.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::Outcome;
pub use config::{Command, RunConfig};
pub use error::{CliError, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(name = "otto", version, about = "Quantum Otto engine with a moving hot bath")]
pub struct Cli {
    /// Write the main output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Emit JSON instead of CSV or text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Flat `key = value` file applied before command-line flags.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Numerical tolerance (occupation oracle, relax distance).
    #[arg(long, global = true, value_name = "FLOAT")]
    pub tol: Option<String>,
    /// Largest accepted bath velocity (at most 0.999).
    #[arg(long, global = true, value_name = "FLOAT")]
    pub umax: Option<String>,
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Moving-bath occupation table against the Planck law and the band-average oracle.
    Occupation(OccupationArgs),
    /// Stroke-by-stroke energy, heat and work ledger.
    Cycle(CycleArgs),
    /// Dataset behind figure 1-4.
    Figure(FigureArgs),
    /// Maximize output work over the hot frequency.
    Optimize(OptimizeArgs),
    /// Effective-temperature fit and spectral mismatch table.
    Efftemp(EfftempArgs),
    /// Thermalization trajectory towards the steady state.
    Relax(RelaxArgs),
}

#[derive(Debug, Args)]
pub struct OccupationArgs {
    /// Explicit comma-separated gaps beta*omega.
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    x_min: Option<String>,
    #[arg(long)]
    x_max: Option<String>,
    #[arg(long)]
    x_points: Option<String>,
    /// Comma-separated velocities.
    #[arg(long)]
    u: Option<String>,
}

#[derive(Debug, Args)]
pub struct CycleArgs {
    /// qubit or oscillator.
    #[arg(long)]
    medium: Option<String>,
    #[arg(long)]
    omega_c: Option<String>,
    #[arg(long)]
    omega_h: Option<String>,
    #[arg(long)]
    beta_c: Option<String>,
    #[arg(long)]
    beta_h: Option<String>,
    #[arg(long)]
    u: Option<String>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Figure number: 1,2 qubit; 3,4 oscillator.
    which: Option<String>,
    #[arg(long)]
    eta_min: Option<String>,
    #[arg(long)]
    eta_max: Option<String>,
    #[arg(long)]
    eta_step: Option<String>,
    #[arg(long)]
    ratio_min: Option<String>,
    #[arg(long)]
    ratio_max: Option<String>,
    #[arg(long)]
    ratio_step: Option<String>,
    /// Comma-separated velocities.
    #[arg(long)]
    u: Option<String>,
    #[arg(long)]
    omega_c: Option<String>,
    #[arg(long)]
    beta_c: Option<String>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    medium: Option<String>,
    /// high_t or low_t closed form to compare against.
    #[arg(long)]
    regime: Option<String>,
    #[arg(long)]
    omega_c: Option<String>,
    #[arg(long)]
    beta_c: Option<String>,
    #[arg(long)]
    beta_h: Option<String>,
    #[arg(long)]
    u: Option<String>,
    /// Bracket start; default is the engine window.
    #[arg(long)]
    omega_lo: Option<String>,
    #[arg(long)]
    omega_hi: Option<String>,
}

#[derive(Debug, Args)]
pub struct EfftempArgs {
    #[arg(long)]
    omega_c: Option<String>,
    #[arg(long)]
    beta_c: Option<String>,
    #[arg(long)]
    beta_h: Option<String>,
    #[arg(long)]
    u: Option<String>,
    #[arg(long)]
    x_min: Option<String>,
    #[arg(long)]
    x_max: Option<String>,
    #[arg(long)]
    x_points: Option<String>,
}

#[derive(Debug, Args)]
pub struct RelaxArgs {
    #[arg(long)]
    medium: Option<String>,
    /// Bath occupation N.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    gamma0: Option<String>,
    #[arg(long)]
    omega: Option<String>,
    /// Sample spacing.
    #[arg(long)]
    dt: Option<String>,
    #[arg(long)]
    n_max: Option<String>,
    #[arg(long)]
    trunc_eps: Option<String>,
    /// ground or steady.
    #[arg(long)]
    initial: Option<String>,
}

macro_rules! pairs {
    ($args:expr; $($field:ident),*) => {
        vec![$((stringify!($field), $args.$field.clone())),*]
    };
}

impl Sub {
    fn command(&self) -> Command {
        match self {
            Sub::Occupation(_) => Command::Occupation,
            Sub::Cycle(_) => Command::Cycle,
            Sub::Figure(_) => Command::Figure,
            Sub::Optimize(_) => Command::Optimize,
            Sub::Efftemp(_) => Command::Efftemp,
            Sub::Relax(_) => Command::Relax,
        }
    }

    fn overrides(&self) -> Vec<(&'static str, Option<String>)> {
        match self {
            Sub::Occupation(a) => pairs!(a; x, x_min, x_max, x_points, u),
            Sub::Cycle(a) => pairs!(a; medium, omega_c, omega_h, beta_c, beta_h, u),
            Sub::Figure(a) => pairs!(a; which, eta_min, eta_max, eta_step, ratio_min,
                ratio_max, ratio_step, u, omega_c, beta_c),
            Sub::Optimize(a) => pairs!(a; medium, regime, omega_c, beta_c, beta_h, u,
                omega_lo, omega_hi),
            Sub::Efftemp(a) => pairs!(a; omega_c, beta_c, beta_h, u, x_min, x_max, x_points),
            Sub::Relax(a) => pairs!(a; medium, n, gamma0, omega, dt, n_max, trunc_eps, initial),
        }
    }
}

impl Cli {
    /// Schema defaults, then the config file, then flags.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let command = self.command.command();
        let mut cfg = RunConfig::defaults(command);
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            cfg.apply_text(&text)?;
        }
        for (flag, value) in [("tol", &self.tol), ("umax", &self.umax)] {
            if let Some(v) = value {
                if !cfg.has_key(flag) {
                    return Err(CliError::Usage(format!("--{flag} does not apply to `{command}`")));
                }
                cfg.set(flag, v)?;
            }
        }
        for (key, value) in self.command.overrides() {
            if let Some(v) = value {
                cfg.set(key, &v)?;
            }
        }
        Ok(cfg)
    }

    /// Runs the command and writes its body to `--out` if given. Returns the
    /// outcome; when the body went to a file it is still returned in full.
    pub fn execute(&self) -> Result<Outcome, CliError> {
        let cfg = self.resolve()?;
        let outcome = commands::run(&cfg, self.json)?;
        if let Some(path) = &self.out {
            fs::write(path, &outcome.body).map_err(|e| CliError::io(path, e))?;
        }
        Ok(outcome)
    }
}
