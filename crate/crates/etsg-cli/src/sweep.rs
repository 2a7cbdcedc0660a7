//! Angle sweep: one row of angles, shifts and coefficients per incident angle.

use etsg::scattering::{coefficients, matching_solve, IncidentBeam, TransmittedChannel};
use etsg::shifts::{
    shift_reflected_ky0, shift_reflected_vector, shift_transmitted_ky0, shift_transmitted_vector,
};
use etsg::Error;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

pub const CSV_HEADER: [&str; 8] =
    ["phi_in_deg", "phi_r_deg", "phi_t_deg", "dz_r_lambdaC", "dz_t_lambdaC", "R", "T", "flags"];

/// kx' below this fraction of |k| is flagged as near the critical angle.
const NEAR_CRITICAL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub phi_in_deg: f64,
    pub phi_r_deg: f64,
    /// None when the transmitted wave is evanescent.
    pub phi_t_deg: Option<f64>,
    pub dz_r_lambda_c: Option<f64>,
    pub dz_t_lambda_c: Option<f64>,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub flags: Vec<&'static str>,
}

/// Evaluates one incident angle given in degrees.
pub fn sweep_row(cfg: &RunConfig, phi_deg: f64) -> Result<SweepRow, CliError> {
    let phi = phi_deg.to_radians();
    let beam = IncidentBeam::from_angle(cfg.barrier, phi, cfg.ky, cfg.chi())?;
    let amps = matching_solve(&beam)?;
    let (r, t) = coefficients(&amps, &beam);
    let k = beam.k;
    let mut flags = Vec::new();
    let kxp = match amps.channel {
        TransmittedChannel::Propagating { kx_prime } if kx_prime > 0.0 => Some(kx_prime),
        _ => None,
    };
    let Some(kxp) = kxp else {
        flags.push("evanescent");
        return Ok(SweepRow {
            phi_in_deg: phi_deg,
            phi_r_deg: phi_deg,
            phi_t_deg: None,
            dz_r_lambda_c: None,
            dz_t_lambda_c: None,
            r,
            t,
            flags,
        });
    };
    if kxp < NEAR_CRITICAL * k.norm() {
        flags.push("near_critical");
    }
    let phi_t = k.ky.hypot(k.kz).atan2(kxp).to_degrees();
    let in_range = |e: Error| match e {
        Error::OutOfAngularRange(_) | Error::EvanescentChannel => None,
        other => Some(other),
    };
    let (dz_r, dz_t) = if cfg.ky == 0.0 {
        let ty = cfg.tau.ty;
        let dr = shift_reflected_ky0(&cfg.barrier, phi, ty);
        let dt = shift_transmitted_ky0(&cfg.barrier, phi, ty);
        (dr, dt)
    } else {
        let dr = shift_reflected_vector(&k, &cfg.tau, &cfg.barrier).map(|s| s.dz);
        let dt = shift_transmitted_vector(&k, &cfg.tau, &cfg.barrier).map(|s| s.dz);
        (dr, dt)
    };
    let settle = |v: etsg::Result<f64>| -> Result<Option<f64>, CliError> {
        match v {
            Ok(x) => Ok(Some(x)),
            Err(e) => match in_range(e) {
                None => Ok(None),
                Some(e) => Err(CliError::Numeric(e.to_string())),
            },
        }
    };
    // Without a step nothing is reflected, so there is no reflected beam to shift.
    let dz_r = if cfg.barrier.barrier() == 0.0 { Some(0.0) } else { settle(dz_r)? };
    let dz_t = settle(dz_t)?;
    if dz_r.is_none() || dz_t.is_none() {
        flags.push("evanescent");
    }
    Ok(SweepRow {
        phi_in_deg: phi_deg,
        phi_r_deg: phi_deg,
        phi_t_deg: Some(phi_t),
        dz_r_lambda_c: dz_r,
        dz_t_lambda_c: dz_t,
        r,
        t,
        flags,
    })
}

pub fn sweep(cfg: &RunConfig) -> Result<Vec<SweepRow>, CliError> {
    cfg.angles().into_iter().map(|phi| sweep_row(cfg, phi)).collect()
}

/// Fixed-point formatting that never prints a negative zero.
pub fn fixed(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

fn opt(v: Option<f64>, decimals: usize) -> String {
    v.map(|x| fixed(x, decimals)).unwrap_or_default()
}

pub fn write_csv<W: std::io::Write>(rows: &[SweepRow], out: W) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Config(format!("cannot write output: {e}"));
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            fixed(r.phi_in_deg, 2),
            fixed(r.phi_r_deg, 2),
            opt(r.phi_t_deg, 2),
            opt(r.dz_r_lambda_c, 4),
            opt(r.dz_t_lambda_c, 4),
            fixed(r.r, 12),
            fixed(r.t, 12),
            r.flags.join(";"),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Config(format!("cannot write output: {e}")))
}
