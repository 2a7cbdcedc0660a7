//! Command-line front end for the `etsg` library.

pub mod commands;
pub mod config;
pub mod error;
pub mod reference;
pub mod sweep;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::TrajectoryArgs;
use crate::config::{ConfigOverrides, Format, RunConfig};
pub use crate::error::CliError;

const SWEEP_NOTE: &str = "dz_t comes from the closed-form transmitted shift, cross-checked by finite differences; \
some published dz_t tables at this working point are internally inconsistent and are not reproduced (see README).";

#[derive(Debug, Parser)]
#[command(name = "etsg", version, about = "Spin-dependent lateral shifts of Dirac beams at a potential step")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate angles, shifts and R, T over a range of incident angles.
    #[command(after_help = SWEEP_NOTE)]
    Sweep(Common),
    /// Scattering amplitudes A, B, C, D at one incident angle (JSON).
    Coeffs {
        #[command(flatten)]
        common: Common,
        /// Incident angle in degrees.
        #[arg(long, default_value_t = 30.0, allow_hyphen_values = true)]
        phi: f64,
    },
    /// Closed-form shifts against the finite-difference phase oracle (JSON).
    Shifts {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 60.0, allow_hyphen_values = true)]
        phi: f64,
    },
    /// Reflected shift measured on a synthesized finite beam (JSON).
    Wavepacket {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 60.0, allow_hyphen_values = true)]
        phi: f64,
        /// Comma-separated products kz0·a of central wavevector and aperture.
        #[arg(long, default_value = "50,100,200,400")]
        kza: String,
    },
    /// Shift accumulated while crossing a uniform electric field (JSON).
    Trajectory {
        #[command(flatten)]
        common: Common,
        /// Field strength e·E0 in natural units.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        field: f64,
        /// Charge sign, -1 for electrons.
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        charge: f64,
        /// Field region length in units of 1/m.
        #[arg(long, default_value_t = 2000.0, allow_hyphen_values = true)]
        x_max: f64,
        #[arg(long, default_value_t = 4000)]
        steps: usize,
    },
    /// Run the seeded invariant suite and print a pass/fail table.
    Verify {
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<verify::Fault>,
    },
}

/// Flags shared by the physics commands. Unset flags fall back to the config file, then defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// JSON file with any of the fields below; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Total energy in units of m (default 3).
    #[arg(long, allow_hyphen_values = true)]
    pub energy: Option<f64>,
    /// Step height V0 in units of m (default 0.25).
    #[arg(long, allow_hyphen_values = true)]
    pub barrier: Option<f64>,
    /// Rest mass (default 1).
    #[arg(long, allow_hyphen_values = true)]
    pub mass: Option<f64>,
    /// Spin direction as x,y,z (default 0,0.92,0.392).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "bloch")]
    pub tau: Option<String>,
    /// Spin direction as polar,azimuth angles in degrees.
    #[arg(long, allow_hyphen_values = true)]
    pub bloch: Option<String>,
    /// First incident angle in degrees (default 0).
    #[arg(long, allow_hyphen_values = true)]
    pub phi_start: Option<f64>,
    /// Last incident angle in degrees (default 64).
    #[arg(long, allow_hyphen_values = true)]
    pub phi_stop: Option<f64>,
    /// Angle increment in degrees (default 2).
    #[arg(long, allow_hyphen_values = true)]
    pub phi_step: Option<f64>,
    /// Transverse momentum along y (default 0).
    #[arg(long, allow_hyphen_values = true)]
    pub ky: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_list<const N: usize>(name: &str, s: &str) -> Result<[f64; N], CliError> {
    let vals: Result<Vec<f64>, _> = s.split(',').map(|p| p.trim().parse::<f64>()).collect();
    let vals = vals.map_err(|e| CliError::Config(format!("--{name} {s:?}: {e}")))?;
    vals.try_into()
        .map_err(|v: Vec<f64>| CliError::Config(format!("--{name} needs {N} comma-separated numbers, got {}", v.len())))
}

impl Common {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(p) => ConfigOverrides::from_file(p)?,
            None => ConfigOverrides::default(),
        };
        let flags = ConfigOverrides {
            energy: self.energy,
            barrier: self.barrier,
            mass: self.mass,
            tau: self.tau.as_deref().map(|s| parse_list::<3>("tau", s)).transpose()?,
            bloch: self.bloch.as_deref().map(|s| parse_list::<2>("bloch", s)).transpose()?,
            phi_start: self.phi_start,
            phi_stop: self.phi_stop,
            phi_step: self.phi_step,
            ky: self.ky,
            format: self.format,
            out: self.out.clone(),
        };
        RunConfig::resolve(file.merged(flags))
    }
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Numeric(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Executes a parsed command and returns its text output.
pub fn execute(cli: &Cli) -> Result<(String, Option<PathBuf>), CliError> {
    match &cli.command {
        Command::Sweep(common) => {
            let cfg = common.resolve()?;
            let rows = sweep::sweep(&cfg)?;
            let text = match cfg.format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    sweep::write_csv(&rows, &mut buf)?;
                    String::from_utf8(buf).expect("csv output is ASCII")
                }
                Format::Json => json(&rows)?,
            };
            Ok((text, cfg.out))
        }
        Command::Coeffs { common, phi } => {
            let cfg = common.resolve()?;
            Ok((json(&commands::coeffs(&cfg, *phi)?)?, cfg.out))
        }
        Command::Shifts { common, phi } => {
            let cfg = common.resolve()?;
            Ok((json(&commands::shifts(&cfg, *phi)?)?, cfg.out))
        }
        Command::Wavepacket { common, phi, kza } => {
            let cfg = common.resolve()?;
            let list: Result<Vec<f64>, _> = kza.split(',').map(|p| p.trim().parse::<f64>()).collect();
            let list = list.map_err(|e| CliError::Config(format!("--kza {kza:?}: {e}")))?;
            Ok((json(&commands::wavepacket(&cfg, *phi, &list)?)?, cfg.out))
        }
        Command::Trajectory { common, field, charge, x_max, steps } => {
            let cfg = common.resolve()?;
            let args = TrajectoryArgs { field: *field, charge: *charge, x_max: *x_max, steps: *steps };
            Ok((json(&commands::trajectory(&cfg, args)?)?, cfg.out))
        }
        Command::Verify { inject_fault } => {
            let checks = verify::run_suite(*inject_fault);
            let text = verify::render(&checks);
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                // The table still goes to stdout so the failing check is visible.
                print!("{text}");
                return Err(CliError::Verify(failed));
            }
            Ok((text, None))
        }
    }
}

/// Parses `args`, runs the command, writes its output and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = execute(&cli).and_then(|(text, out)| match out {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Config(format!("cannot write to stdout: {e}")))
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("etsg: {e}");
            e.exit_code()
        }
    }
}
