//! Scattering of a positive-energy plane wave at the step V(x) = V0 θ(x).

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::dirac_core::{dirac_matrices, free_energy, positive_energy_spinor, Bispinor, WaveVector};
use crate::spin::SpinState;
use crate::{Error, Result};

/// Energy, step height and mass of one scattering problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierConfig {
    energy: f64,
    barrier: f64,
    mass: f64,
}

impl BarrierConfig {
    /// Validates E > m > 0, V0 ≥ 0, E - V0 + m > 0 and E - V0 > 0.
    pub fn new(energy: f64, barrier: f64, mass: f64) -> Result<Self> {
        if !(energy.is_finite() && barrier.is_finite() && mass.is_finite()) {
            return Err(Error::NonFinite("barrier config"));
        }
        if mass <= 0.0 {
            return Err(Error::InvalidInput(format!("mass {mass} must be positive")));
        }
        if energy <= mass {
            return Err(Error::BelowRest(energy));
        }
        if barrier < 0.0 {
            return Err(Error::InvalidInput(format!("barrier {barrier} must be nonnegative")));
        }
        let above = energy - barrier;
        if above + mass <= 0.0 {
            return Err(Error::KleinRegime(above + mass));
        }
        if above <= 0.0 {
            return Err(Error::SubBarrierEnergy(above));
        }
        Ok(Self { energy, barrier, mass })
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn barrier(&self) -> f64 {
        self.barrier
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// |k| of the incident wave.
    pub fn momentum(&self) -> f64 {
        ((self.energy - self.mass) * (self.energy + self.mass)).sqrt()
    }

    /// n = (E + m)/(E - V0 + m).
    pub fn refractive_index(&self) -> f64 {
        (self.energy + self.mass) / (self.energy - self.barrier + self.mass)
    }

    /// √(E(E+m)) / √((E-V0)(E-V0+m)), the factor separating the solved unknowns from C, D.
    pub fn transmitted_scale(&self) -> f64 {
        let e = self.energy;
        let ev = e - self.barrier;
        (e * (e + self.mass)).sqrt() / (ev * (ev + self.mass)).sqrt()
    }
}

/// n = (E + m)/(E - V0 + m).
pub fn refractive_index(cfg: &BarrierConfig) -> f64 {
    cfg.refractive_index()
}

/// Longitudinal wavevector on the far side of the step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransmittedChannel {
    Propagating { kx_prime: f64 },
    Evanescent { q: f64 },
}

impl TransmittedChannel {
    /// kx' as a complex number; i q for the evanescent branch.
    pub fn kx_prime(&self) -> Complex64 {
        match *self {
            Self::Propagating { kx_prime } => Complex64::new(kx_prime, 0.0),
            Self::Evanescent { q } => Complex64::new(0.0, q),
        }
    }

    pub fn is_propagating(&self) -> bool {
        matches!(self, Self::Propagating { .. })
    }
}

/// Chooses the propagating root kx' > 0 or the decaying root q > 0.
pub fn transmitted_channel(cfg: &BarrierConfig, ky: f64, kz: f64) -> TransmittedChannel {
    let ev = cfg.energy - cfg.barrier;
    let disc = (ev - cfg.mass) * (ev + cfg.mass) - ky * ky - kz * kz;
    if disc >= 0.0 {
        TransmittedChannel::Propagating { kx_prime: disc.sqrt() }
    } else {
        TransmittedChannel::Evanescent { q: (-disc).sqrt() }
    }
}

/// A plane wave of definite energy and spin incident from x < 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncidentBeam {
    pub config: BarrierConfig,
    pub k: WaveVector,
    pub chi: SpinState,
}

impl IncidentBeam {
    /// Checks that `k` is on shell (1e-10 relative) and moving toward the step.
    pub fn new(config: BarrierConfig, k: WaveVector, chi: SpinState) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::NonFinite("wavevector"));
        }
        let shell = config.momentum().powi(2);
        if (k.norm_sq() - shell).abs() > 1e-10 * shell.max(1.0) {
            return Err(Error::InvalidInput(format!(
                "wavevector is off shell: k² = {}, E² - m² = {shell}",
                k.norm_sq()
            )));
        }
        if k.kx < 1e-10 * k.norm() {
            return Err(Error::GrazingIncidence(k.kx));
        }
        Ok(Self { config, k, chi })
    }

    /// Beam with transverse component `ky` and in-plane angle `phi_in` (radians) from the normal.
    pub fn from_angle(config: BarrierConfig, phi_in: f64, ky: f64, chi: SpinState) -> Result<Self> {
        let k = config.momentum();
        if ky.abs() >= k {
            return Err(Error::InvalidInput(format!("|ky| = {} must be below |k| = {k}", ky.abs())));
        }
        let kp = ((k - ky.abs()) * (k + ky.abs())).sqrt();
        let (s, c) = phi_in.sin_cos();
        Self::new(config, WaveVector::new(kp * c, ky, kp * s), chi)
    }

    /// Same energy and spin with a different transverse momentum; kx is recomputed on shell.
    pub fn with_transverse(&self, ky: f64, kz: f64) -> Result<Self> {
        let k2 = self.config.momentum().powi(2) - ky * ky - kz * kz;
        if k2 <= 0.0 {
            return Err(Error::GrazingIncidence(0.0));
        }
        Self::new(self.config, WaveVector::new(k2.sqrt(), ky, kz), self.chi)
    }

    pub fn channel(&self) -> TransmittedChannel {
        transmitted_channel(&self.config, self.k.ky, self.k.kz)
    }

    pub fn energy(&self) -> f64 {
        self.config.energy()
    }
}

/// Reflected (A, B) and transmitted (C, D) amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringAmplitudes {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub channel: TransmittedChannel,
}

impl ScatteringAmplitudes {
    pub fn as_array(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

/// Builds M, d of the continuity system M c = d with c = (A, B, sC, sD).
pub fn matching_system(beam: &IncidentBeam) -> (Matrix4<Complex64>, Vector4<Complex64>) {
    let n = Complex64::new(beam.config.refractive_index(), 0.0);
    let (kx, ky, kz) = (beam.k.kx, beam.k.ky, beam.k.kz);
    let kxp = beam.channel().kx_prime();
    let iky = Complex64::new(0.0, ky);
    let r = |x: f64| Complex64::new(x, 0.0);
    let z = r(0.0);
    let one = r(1.0);
    #[rustfmt::skip]
    let m = Matrix4::new(
        n, z, -one, z,
        z, n, z, -one,
        r(kz), -(r(kx) + iky), r(-kz), -(kxp - iky),
        -r(kx) + iky, r(-kz), -(kxp + iky), r(kz),
    );
    let (l1, l2) = (beam.chi.l1, beam.chi.l2);
    let d = Vector4::new(
        -n * l1,
        -n * l2,
        -(l1 * kz + l2 * (r(kx) - iky)),
        -(l1 * (r(kx) + iky) - l2 * kz),
    );
    (m, d)
}

/// Solves the continuity system by LU with partial pivoting and unscales C, D.
pub fn matching_solve(beam: &IncidentBeam) -> Result<ScatteringAmplitudes> {
    let (m, d) = matching_system(beam);
    let lu = m.lu();
    let u = lu.u();
    let pivots: Vec<f64> = (0..4).map(|i| u[(i, i)].norm()).collect();
    let pmax = pivots.iter().cloned().fold(0.0, f64::max);
    if pivots.iter().any(|&p| p <= 1e-13 * pmax) {
        return Err(Error::SingularMatching);
    }
    let sol = lu.solve(&d).ok_or(Error::SingularMatching)?;
    if sol.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite("matching solve"));
    }
    let s = beam.config.transmitted_scale();
    Ok(ScatteringAmplitudes {
        a: sol[0],
        b: sol[1],
        c: sol[2] / s,
        d: sol[3] / s,
        channel: beam.channel(),
    })
}

/// Rational closed-form amplitudes valid for any ky.
pub fn amplitudes_closed_form(beam: &IncidentBeam) -> ScatteringAmplitudes {
    let n = beam.config.refractive_index();
    let (kx, ky, kz) = (beam.k.kx, beam.k.ky, beam.k.kz);
    let channel = beam.channel();
    let kxp = channel.kx_prime();
    let (l1, l2) = (beam.chi.l1, beam.chi.l2);
    let i = Complex64::new(0.0, 1.0);
    let nm = n - 1.0;
    let perp = ky * ky + kz * kz;
    let den = kxp * kxp * (n * n) + kxp * (2.0 * kx * n) + kx * kx + perp * nm * nm;
    let omega = -(kxp * kxp) * (n * n) + kx * kx - perp * nm * nm;
    let a = (l1 * omega + (l2 * kz - i * l1 * ky) * (2.0 * kx * nm)) / den;
    let b = (l2 * omega - (l1 * kz - i * l2 * ky) * (2.0 * kx * nm)) / den;
    let pref = 2.0 * kx * n / beam.config.transmitted_scale();
    let c = (l1 * kx + l2 * (kz * nm) - i * l1 * (ky * nm) + l1 * kxp * n) * pref / den;
    let d = (l2 * kx + i * l2 * (ky * nm) - l1 * (kz * nm) + l2 * kxp * n) * pref / den;
    ScatteringAmplitudes { a, b, c, d, channel }
}

/// The ky = 0 specialisation of [`amplitudes_closed_form`], written independently.
pub fn amplitudes_closed_form_ky0(beam: &IncidentBeam) -> Result<ScatteringAmplitudes> {
    if beam.k.ky != 0.0 {
        return Err(Error::InvalidInput("ky must vanish".into()));
    }
    let n = beam.config.refractive_index();
    let (kx, kz) = (beam.k.kx, beam.k.kz);
    let channel = beam.channel();
    let kxp = channel.kx_prime();
    let (l1, l2) = (beam.chi.l1, beam.chi.l2);
    // With ky = 0 the denominator is (kx + n kx')² + kz²(n-1)².
    let sum = kxp * n + kx;
    let den = sum * sum + kz * kz * (n - 1.0) * (n - 1.0);
    let omega1 = (kx - kxp * n) * sum - kz * kz * (n - 1.0) * (n - 1.0);
    let omega3 = 2.0 * kx * kz * (n - 1.0);
    let t = 2.0 * n * kx / beam.config.transmitted_scale();
    Ok(ScatteringAmplitudes {
        a: (l1 * omega1 + l2 * omega3) / den,
        b: (l2 * omega1 - l1 * omega3) / den,
        c: (l1 * sum + l2 * kz * (n - 1.0)) * t / den,
        d: (l2 * sum - l1 * kz * (n - 1.0)) * t / den,
        channel,
    })
}

/// Normalised incident bispinor.
pub fn incident_spinor(beam: &IncidentBeam) -> Bispinor {
    positive_energy_spinor(&beam.k, beam.config.mass(), &beam.chi)
}

/// Reflected bispinor A·u_A + B·u_B for wavevector (-kx, ky, kz).
pub fn reflected_spinor(beam: &IncidentBeam, amps: &ScatteringAmplitudes) -> Bispinor {
    let e = beam.energy();
    let m = beam.config.mass();
    let (kx, ky, kz) = (beam.k.kx, beam.k.ky, beam.k.kz);
    let r = |x: f64| Complex64::new(x, 0.0);
    let ua = Vector4::new(r(e + m), r(0.0), r(kz), Complex64::new(-kx, ky));
    let ub = Vector4::new(r(0.0), r(e + m), Complex64::new(-kx, -ky), r(-kz));
    (ua * amps.a + ub * amps.b).unscale((2.0 * e * (e + m)).sqrt())
}

/// Transmitted bispinor C·u_C + D·u_D for wavevector (kx', ky, kz).
pub fn transmitted_spinor(beam: &IncidentBeam, amps: &ScatteringAmplitudes) -> Bispinor {
    let ev = beam.energy() - beam.config.barrier();
    let m = beam.config.mass();
    let (ky, kz) = (beam.k.ky, beam.k.kz);
    let kxp = amps.channel.kx_prime();
    let r = |x: f64| Complex64::new(x, 0.0);
    let iky = Complex64::new(0.0, ky);
    let uc = Vector4::new(r(ev + m), r(0.0), r(kz), kxp + iky);
    let ud = Vector4::new(r(0.0), r(ev + m), kxp - iky, r(-kz));
    (uc * amps.c + ud * amps.d).unscale((2.0 * ev * (ev + m)).sqrt())
}

/// x-component of the probability current ψ† α_x ψ.
pub fn current_x(state: &Bispinor) -> Result<f64> {
    let (ax, _, _, _) = dirac_matrices();
    let j = state.dotc(&(ax * state));
    if j.im.abs() > 1e-10 {
        return Err(Error::NonRealCurrent(j.im));
    }
    Ok(j.re)
}

/// Reflection and transmission coefficients from the amplitudes.
pub fn coefficients(amps: &ScatteringAmplitudes, beam: &IncidentBeam) -> (f64, f64) {
    match amps.channel {
        TransmittedChannel::Evanescent { .. } => (1.0, 0.0),
        TransmittedChannel::Propagating { kx_prime } => {
            let r = amps.a.norm_sqr() + amps.b.norm_sqr();
            let e = beam.energy();
            let ev = e - beam.config.barrier();
            let t = (kx_prime * e).abs() / (beam.k.kx * ev).abs()
                * (amps.c.norm_sqr() + amps.d.norm_sqr());
            (r, t)
        }
    }
}

/// Total-reflection angle φ_cr1 and the reflected-shift zero φ_cr2, in radians.
pub fn critical_angles(cfg: &BarrierConfig) -> (f64, f64) {
    let m = cfg.mass();
    let e = cfg.energy();
    let ev = e - cfg.barrier();
    let ratio = ((ev - m) * (ev + m)) / ((e - m) * (e + m));
    let cr1 = if ratio >= 1.0 {
        std::f64::consts::FRAC_PI_2
    } else {
        ratio.max(0.0).sqrt().asin()
    };
    let cr2 = (m / e).sqrt().atan();
    (cr1, cr2)
}

/// (φ_in, φ_r, φ_t) in radians for an in-plane (ky = 0) beam.
pub fn angles(beam: &IncidentBeam) -> Result<(f64, f64, f64)> {
    if beam.k.ky != 0.0 {
        return Err(Error::InvalidInput("angles are defined for ky = 0".into()));
    }
    let phi_in = beam.k.kz.atan2(beam.k.kx);
    match beam.channel() {
        TransmittedChannel::Propagating { kx_prime } => {
            Ok((phi_in, phi_in, beam.k.kz.atan2(kx_prime)))
        }
        TransmittedChannel::Evanescent { .. } => Err(Error::EvanescentNoAngle),
    }
}

/// Sanity helper: E from the beam wavevector; equals the configured energy on shell.
pub fn beam_energy(beam: &IncidentBeam) -> f64 {
    free_energy(&beam.k, beam.config.mass())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{chi_from_bloch, BlochVector};

    fn cfg() -> BarrierConfig {
        BarrierConfig::new(3.0, 0.25, 1.0).unwrap()
    }

    fn y_up() -> SpinState {
        chi_from_bloch(&BlochVector::new(0.0, 1.0, 0.0).unwrap())
    }

    #[test]
    fn index_at_working_point() {
        assert!((cfg().refractive_index() - 16.0 / 15.0).abs() < 1e-15);
        assert_eq!(BarrierConfig::new(3.0, 0.0, 1.0).unwrap().refractive_index(), 1.0);
    }

    #[test]
    fn guards() {
        assert!(matches!(BarrierConfig::new(3.0, 5.0, 1.0), Err(Error::KleinRegime(_))));
        assert!(matches!(BarrierConfig::new(3.0, 3.5, 1.0), Err(Error::SubBarrierEnergy(_))));
        assert!(matches!(BarrierConfig::new(0.5, 0.0, 1.0), Err(Error::BelowRest(_))));
    }

    #[test]
    fn channel_at_thirty_degrees() {
        let kz = 8f64.sqrt() * 0.5;
        match transmitted_channel(&cfg(), 0.0, kz) {
            TransmittedChannel::Propagating { kx_prime } => {
                assert!((kx_prime - 73f64.sqrt() / 4.0).abs() < 1e-14)
            }
            _ => panic!("expected propagating"),
        }
        assert!(!transmitted_channel(&cfg(), 0.0, 2.7).is_propagating());
    }

    #[test]
    fn y_spin_keeps_ratio() {
        let beam = IncidentBeam::from_angle(cfg(), 30f64.to_radians(), 0.0, y_up()).unwrap();
        let amps = matching_solve(&beam).unwrap();
        let i = Complex64::new(0.0, 1.0);
        assert!((amps.b - i * amps.a).norm() < 1e-12);
        assert!((amps.d - i * amps.c).norm() < 1e-12);
    }

    #[test]
    fn no_step_no_reflection() {
        let c0 = BarrierConfig::new(3.0, 0.0, 1.0).unwrap();
        let beam = IncidentBeam::from_angle(c0, 0.4, 0.3, y_up()).unwrap();
        for amps in [matching_solve(&beam).unwrap(), amplitudes_closed_form(&beam)] {
            assert!(amps.a.norm() < 1e-14 && amps.b.norm() < 1e-14);
            assert!((amps.c - beam.chi.l1).norm() < 1e-12);
            assert!((amps.d - beam.chi.l2).norm() < 1e-12);
            let (r, t) = coefficients(&amps, &beam);
            assert!(r < 1e-24 && (t - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn evanescent_is_total() {
        let beam = IncidentBeam::from_angle(cfg(), 70f64.to_radians(), 0.0, y_up()).unwrap();
        let amps = matching_solve(&beam).unwrap();
        assert!(!amps.channel.is_propagating());
        assert!((amps.a.norm_sqr() + amps.b.norm_sqr() - 1.0).abs() < 1e-12);
        assert_eq!(coefficients(&amps, &beam), (1.0, 0.0));
        let jt = current_x(&transmitted_spinor(&beam, &amps)).unwrap();
        assert!(jt.abs() < 1e-12);
    }

    #[test]
    fn critical_angles_working_point() {
        let (c1, c2) = critical_angles(&cfg());
        assert!((c1 - (105f64 / 128.0).sqrt().asin()).abs() < 1e-15);
        assert!((c2.to_degrees() - 30.0).abs() < 1e-12);
    }

    #[test]
    fn transmitted_angles_table_points() {
        for (phi, want) in [(30.0, 33.51), (60.0, 72.98)] {
            let beam = IncidentBeam::from_angle(cfg(), f64::to_radians(phi), 0.0, y_up()).unwrap();
            let (_, pr, pt) = angles(&beam).unwrap();
            assert!((pr.to_degrees() - phi).abs() < 1e-12);
            assert!((pt.to_degrees() - want).abs() < 0.01);
        }
    }
}
