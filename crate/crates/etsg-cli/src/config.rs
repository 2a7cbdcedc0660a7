//! Run configuration: defaults, an optional JSON file, then command-line flags.

use std::path::{Path, PathBuf};

use etsg::scattering::BarrierConfig;
use etsg::spin::{chi_from_bloch, BlochVector, SpinState};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Output encoding of tabular commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Every field is optional so a file may set any subset.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub energy: Option<f64>,
    pub barrier: Option<f64>,
    pub mass: Option<f64>,
    pub tau: Option<[f64; 3]>,
    /// (θ, φ) of the Bloch vector in degrees.
    pub bloch: Option<[f64; 2]>,
    pub phi_start: Option<f64>,
    pub phi_stop: Option<f64>,
    pub phi_step: Option<f64>,
    pub ky: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

impl ConfigOverrides {
    /// Values in `other` win.
    pub fn merged(self, other: ConfigOverrides) -> ConfigOverrides {
        // A spin given either way on the command line replaces the file's spin entirely.
        let spin_from_other = other.tau.is_some() || other.bloch.is_some();
        ConfigOverrides {
            energy: other.energy.or(self.energy),
            barrier: other.barrier.or(self.barrier),
            mass: other.mass.or(self.mass),
            tau: if spin_from_other { other.tau } else { self.tau },
            bloch: if spin_from_other { other.bloch } else { self.bloch },
            phi_start: other.phi_start.or(self.phi_start),
            phi_stop: other.phi_stop.or(self.phi_stop),
            phi_step: other.phi_step.or(self.phi_step),
            ky: other.ky.or(self.ky),
            format: other.format.or(self.format),
            out: other.out.or(self.out),
        }
    }

    pub fn from_file(path: &Path) -> Result<ConfigOverrides, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Validated parameters shared by all commands. Angles are stored in degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub barrier: BarrierConfig,
    pub tau: BlochVector,
    pub phi_start: f64,
    pub phi_stop: f64,
    pub phi_step: f64,
    pub ky: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_TAU_Y: f64 = 0.92;

pub fn default_tau() -> BlochVector {
    let ty = DEFAULT_TAU_Y;
    BlochVector { tx: 0.0, ty, tz: ((1.0 - ty) * (1.0 + ty)).sqrt() }
}

fn finite(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{name} must be a finite number, got {v}")))
    }
}

impl RunConfig {
    pub fn resolve(o: ConfigOverrides) -> Result<RunConfig, CliError> {
        let energy = finite("energy", o.energy.unwrap_or(3.0))?;
        let barrier = finite("barrier", o.barrier.unwrap_or(0.25))?;
        let mass = finite("mass", o.mass.unwrap_or(1.0))?;
        let cfg = BarrierConfig::new(energy, barrier, mass).map_err(|e| {
            CliError::Config(format!("energy {energy}, barrier {barrier}, mass {mass}: {e}"))
        })?;

        let tau = match (o.tau, o.bloch) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config("give either tau or bloch, not both".into()))
            }
            (Some([x, y, z]), None) => {
                for (n, v) in [("tau x", x), ("tau y", y), ("tau z", z)] {
                    finite(n, v)?;
                }
                let norm = (x * x + y * y + z * z).sqrt();
                if (norm - 1.0).abs() > 1e-3 {
                    return Err(CliError::Config(format!(
                        "tau = ({x}, {y}, {z}) has length {norm}; it must be a unit vector"
                    )));
                }
                BlochVector { tx: x / norm, ty: y / norm, tz: z / norm }
            }
            (None, Some([theta, phi])) => {
                finite("bloch theta", theta)?;
                finite("bloch phi", phi)?;
                BlochVector::from_angles(theta.to_radians(), phi.to_radians())
            }
            (None, None) => default_tau(),
        };

        let phi_start = finite("phi-start", o.phi_start.unwrap_or(0.0))?;
        let phi_stop = finite("phi-stop", o.phi_stop.unwrap_or(64.0))?;
        let phi_step = finite("phi-step", o.phi_step.unwrap_or(2.0))?;
        if !(0.0..90.0).contains(&phi_start) || !(0.0..90.0).contains(&phi_stop) {
            return Err(CliError::Config(format!(
                "angles must lie in [0, 90) degrees, got {phi_start}..{phi_stop}"
            )));
        }
        if phi_stop < phi_start {
            return Err(CliError::Config(format!("phi-stop {phi_stop} is below phi-start {phi_start}")));
        }
        if phi_step <= 0.0 {
            return Err(CliError::Config(format!("phi-step {phi_step} must be positive")));
        }
        let ky = finite("ky", o.ky.unwrap_or(0.0))?;
        if ky.abs() >= cfg.momentum() {
            return Err(CliError::Config(format!(
                "|ky| = {} must be below the momentum {}",
                ky.abs(),
                cfg.momentum()
            )));
        }
        Ok(RunConfig {
            barrier: cfg,
            tau,
            phi_start,
            phi_stop,
            phi_step,
            ky,
            format: o.format.unwrap_or(Format::Csv),
            out: o.out,
        })
    }

    pub fn chi(&self) -> SpinState {
        chi_from_bloch(&self.tau)
    }

    /// Sweep angles in degrees, generated by integer counting so no drift accumulates.
    pub fn angles(&self) -> Vec<f64> {
        let n = ((self.phi_stop - self.phi_start) / self.phi_step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.phi_start + i as f64 * self.phi_step).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve() {
        let c = RunConfig::resolve(ConfigOverrides::default()).unwrap();
        assert_eq!(c.angles().len(), 33);
        assert!((c.tau.norm_sq() - 1.0).abs() < 1e-15);
        assert_eq!(c.tau.ty, 0.92);
    }

    #[test]
    fn flags_override_file() {
        let file = ConfigOverrides { energy: Some(5.0), bloch: Some([90.0, 90.0]), ..Default::default() };
        let flags = ConfigOverrides { energy: Some(4.0), tau: Some([1.0, 0.0, 0.0]), ..Default::default() };
        let m = file.merged(flags);
        assert_eq!(m.energy, Some(4.0));
        assert_eq!(m.bloch, None);
        assert!(RunConfig::resolve(m).is_ok());
    }

    #[test]
    fn klein_rejected() {
        let o = ConfigOverrides { barrier: Some(5.0), ..Default::default() };
        assert!(matches!(RunConfig::resolve(o), Err(CliError::Config(_))));
    }

    #[test]
    fn odd_steps() {
        let o = ConfigOverrides { phi_start: Some(59.0), phi_stop: Some(64.0), phi_step: Some(1.0), ..Default::default() };
        assert_eq!(RunConfig::resolve(o).unwrap().angles(), vec![59.0, 60.0, 61.0, 62.0, 63.0, 64.0]);
    }
}
