//! Single-point commands that emit one JSON document each.

use etsg::scattering::{coefficients, matching_solve, IncidentBeam, TransmittedChannel};
use etsg::shifts::{
    fd_beam_shift, shift_reflected_vector, shift_transmitted_vector, y_basis, Axis, Side,
};
use etsg::trajectory::{closed_form_trajectory, propagate, FieldConfig};
use etsg::wavepacket::{in_plane_beam, measure_reflected_shift, SamplingSpec};
use etsg::Complex64;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoeffsReport {
    pub phi_in_deg: f64,
    pub ky: f64,
    pub tau: [f64; 3],
    #[serde(rename = "A")]
    pub a: ComplexJson,
    #[serde(rename = "B")]
    pub b: ComplexJson,
    #[serde(rename = "C")]
    pub c: ComplexJson,
    #[serde(rename = "D")]
    pub d: ComplexJson,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub channel: &'static str,
    /// kx' for a propagating channel, the decay rate q otherwise.
    pub transmitted_kx: f64,
}

fn beam_at(cfg: &RunConfig, phi_deg: f64) -> Result<IncidentBeam, CliError> {
    if !(0.0..90.0).contains(&phi_deg) {
        return Err(CliError::Config(format!("phi {phi_deg} must lie in [0, 90) degrees")));
    }
    Ok(IncidentBeam::from_angle(cfg.barrier, phi_deg.to_radians(), cfg.ky, cfg.chi())?)
}

pub fn coeffs(cfg: &RunConfig, phi_deg: f64) -> Result<CoeffsReport, CliError> {
    let beam = beam_at(cfg, phi_deg)?;
    let amps = matching_solve(&beam)?;
    let (r, t) = coefficients(&amps, &beam);
    let (channel, transmitted_kx) = match amps.channel {
        TransmittedChannel::Propagating { kx_prime } => ("propagating", kx_prime),
        TransmittedChannel::Evanescent { q } => ("evanescent", q),
    };
    Ok(CoeffsReport {
        phi_in_deg: phi_deg,
        ky: cfg.ky,
        tau: cfg.tau.as_array(),
        a: amps.a.into(),
        b: amps.b.into(),
        c: amps.c.into(),
        d: amps.d.into(),
        r,
        t,
        channel,
        transmitted_kx,
    })
}

/// Closed-form and finite-difference value of one shift component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub analytic: f64,
    pub fd: f64,
    pub abs_discrepancy: f64,
    /// Omitted when the analytic value is below 1e-9, where only the absolute gap is meaningful.
    pub rel_discrepancy: Option<f64>,
}

impl Comparison {
    fn new(analytic: f64, fd: f64) -> Self {
        // Adding zero turns a negative zero into +0 for cleaner output.
        let (analytic, fd) = (analytic + 0.0, fd + 0.0);
        let abs = (analytic - fd).abs();
        let rel = (analytic.abs() >= 1e-9).then(|| abs / analytic.abs());
        Self { analytic, fd, abs_discrepancy: abs, rel_discrepancy: rel }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SideShifts {
    pub dy: Comparison,
    pub dz: Comparison,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftsReport {
    pub phi_in_deg: f64,
    pub ky: f64,
    pub tau: [f64; 3],
    /// None without a step, where nothing is reflected.
    pub reflected: Option<SideShifts>,
    pub transmitted: SideShifts,
    pub max_rel_discrepancy: f64,
    pub max_abs_discrepancy: f64,
}

pub fn shifts(cfg: &RunConfig, phi_deg: f64) -> Result<ShiftsReport, CliError> {
    let beam = beam_at(cfg, phi_deg)?;
    if !matches!(beam.channel(), TransmittedChannel::Propagating { kx_prime } if kx_prime > 0.0) {
        return Err(CliError::Config(format!(
            "phi {phi_deg} is beyond total reflection; the closed-form shifts need a propagating transmitted wave"
        )));
    }
    let basis = y_basis();
    let side = |s: Side, a: etsg::shifts::ShiftVector| -> Result<SideShifts, CliError> {
        Ok(SideShifts {
            dy: Comparison::new(a.dy, fd_beam_shift(&beam, s, Axis::Y, &basis)?),
            dz: Comparison::new(a.dz, fd_beam_shift(&beam, s, Axis::Z, &basis)?),
        })
    };
    let reflected = if cfg.barrier.barrier() == 0.0 {
        None
    } else {
        Some(side(Side::Reflected, shift_reflected_vector(&beam.k, &cfg.tau, &cfg.barrier)?)?)
    };
    let transmitted =
        side(Side::Transmitted, shift_transmitted_vector(&beam.k, &cfg.tau, &cfg.barrier)?)?;
    let all: Vec<Comparison> = reflected
        .iter()
        .chain(std::iter::once(&transmitted))
        .flat_map(|s| [s.dy, s.dz])
        .collect();
    Ok(ShiftsReport {
        phi_in_deg: phi_deg,
        ky: cfg.ky,
        tau: cfg.tau.as_array(),
        reflected,
        transmitted,
        max_rel_discrepancy: all.iter().filter_map(|c| c.rel_discrepancy).fold(0.0, f64::max),
        max_abs_discrepancy: all.iter().map(|c| c.abs_discrepancy).fold(0.0, f64::max),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WavepacketPoint {
    pub kz0_a: f64,
    pub aperture: f64,
    pub measured: Option<f64>,
    pub relative_error: Option<f64>,
    pub mass_ratio: f64,
    pub reflectance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WavepacketReport {
    pub phi_in_deg: f64,
    pub tau: [f64; 3],
    pub analytic_dz_r: f64,
    pub points: Vec<WavepacketPoint>,
    /// True when the relative error shrinks with every larger aperture.
    pub monotone: Option<bool>,
}

pub fn wavepacket(cfg: &RunConfig, phi_deg: f64, kza: &[f64]) -> Result<WavepacketReport, CliError> {
    if cfg.ky != 0.0 {
        return Err(CliError::Config("the wavepacket measurement is in-plane; ky must be 0".into()));
    }
    if !(phi_deg > 0.0 && phi_deg < 90.0) {
        return Err(CliError::Config(format!("phi {phi_deg} must lie in (0, 90) degrees")));
    }
    if kza.is_empty() || kza.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(CliError::Config("kz0·a values must be positive".into()));
    }
    let beam = in_plane_beam(cfg.barrier, phi_deg.to_radians(), cfg.chi())?;
    let spec = SamplingSpec::default();
    let mut points = Vec::with_capacity(kza.len());
    let mut analytic = 0.0;
    for &x in kza {
        let meas = measure_reflected_shift(&beam, x / beam.k.kz, &spec)?;
        analytic = meas.analytic;
        points.push(WavepacketPoint {
            kz0_a: x,
            aperture: meas.aperture,
            measured: meas.measured,
            relative_error: meas.relative_error,
            mass_ratio: meas.mass_ratio,
            reflectance: meas.reflectance,
        });
    }
    let errs: Option<Vec<f64>> = points.iter().map(|p| p.relative_error).collect();
    let monotone = errs.map(|e| e.windows(2).all(|w| w[1] < w[0]));
    Ok(WavepacketReport { phi_in_deg: phi_deg, tau: cfg.tau.as_array(), analytic_dz_r: analytic, points, monotone })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryArgs {
    pub field: f64,
    pub charge: f64,
    pub x_max: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryReport {
    pub energy0: f64,
    pub energy_final: f64,
    pub field: f64,
    pub charge: f64,
    pub x_max: f64,
    pub steps: usize,
    pub integrated_dy: f64,
    pub integrated_dz: f64,
    pub integrated_magnitude: f64,
    /// Closed form scaled by the spin component transverse to the field.
    pub closed_form: f64,
    pub closed_form_limit: f64,
    pub relative_gap: Option<f64>,
}

pub fn trajectory(cfg: &RunConfig, args: TrajectoryArgs) -> Result<TrajectoryReport, CliError> {
    let b = &cfg.barrier;
    let field = FieldConfig::new(args.field, args.charge, b.energy(), b.mass())
        .map_err(|e| CliError::Config(e.to_string()))?;
    if !(args.x_max.is_finite() && args.x_max >= 0.0) {
        return Err(CliError::Config(format!("x-max {} must be finite and nonnegative", args.x_max)));
    }
    if args.steps < 1000 {
        return Err(CliError::Config(format!("steps = {}; at least 1000 are required", args.steps)));
    }
    let shift = propagate(&field, args.x_max, args.steps, &cfg.tau)?;
    let e1 = field.energy_at(args.x_max);
    let transverse = cfg.tau.ty.hypot(cfg.tau.tz);
    let closed = closed_form_trajectory(b.energy(), e1, b.mass())? * transverse;
    let limit = closed_form_trajectory(b.energy(), f64::INFINITY, b.mass())? * transverse;
    let mag = shift.norm();
    Ok(TrajectoryReport {
        energy0: b.energy(),
        energy_final: e1,
        field: args.field,
        charge: args.charge,
        x_max: args.x_max,
        steps: args.steps,
        integrated_dy: shift.dy,
        integrated_dz: shift.dz,
        integrated_magnitude: mag,
        closed_form: closed,
        closed_form_limit: limit,
        relative_gap: (closed > 0.0).then(|| (mag - closed).abs() / closed),
    })
}
