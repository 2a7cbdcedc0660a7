//! Stationary-phase lateral shifts of the reflected and transmitted beams.
//!
//! A shift along a transverse axis j is -∂θ/∂k_j of the amplitude phase, averaged
//! over the two spin branches with their probability weights. All public results
//! are in Compton wavelengths.

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::dirac_core::WaveVector;
use crate::scattering::{
    critical_angles, matching_solve, transmitted_channel, BarrierConfig, IncidentBeam,
    ScatteringAmplitudes, TransmittedChannel,
};
use crate::spin::{chi_from_bloch, BlochVector, SpinState};
use crate::{to_compton, Error, Result};

/// Lateral displacement (Δy, Δz) in Compton wavelengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftVector {
    pub dy: f64,
    pub dz: f64,
}

impl ShiftVector {
    pub fn zero() -> Self {
        Self { dy: 0.0, dz: 0.0 }
    }

    pub fn norm(&self) -> f64 {
        self.dy.hypot(self.dz)
    }
}

impl std::ops::Neg for ShiftVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self { dy: -self.dy, dz: -self.dz }
    }
}

impl std::ops::Add for ShiftVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { dy: self.dy + o.dy, dz: self.dz + o.dz }
    }
}

/// Amplitudes re-expanded in the spin basis {χ(τ_b), χ(-τ_b)} and their phases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDecomposition {
    pub basis: BlochVector,
    pub a_prime: Complex64,
    pub b_prime: Complex64,
    pub theta_a: f64,
    pub theta_b: f64,
}

impl PhaseDecomposition {
    pub fn weights(&self) -> (f64, f64) {
        (self.a_prime.norm_sqr(), self.b_prime.norm_sqr())
    }
}

/// Writes (A, B) = A' χ(τ_b) + B' χ(-τ_b).
///
/// When `reference` is given, the momentum-independent phases of its own
/// projections ⟨χ(±τ_b)|reference⟩ are removed before taking the phases.
pub fn basis_decompose(
    a: Complex64,
    b: Complex64,
    tau_b: &BlochVector,
    reference: Option<&SpinState>,
) -> Result<PhaseDecomposition> {
    if a.norm_sqr() + b.norm_sqr() == 0.0 {
        return Err(Error::ZeroAmplitude);
    }
    let plus = chi_from_bloch(tau_b);
    let minus = chi_from_bloch(&-*tau_b);
    let v = SpinState { l1: a, l2: b };
    let a_prime = plus.inner(&v);
    let b_prime = minus.inner(&v);
    let strip = |amp: Complex64, basis: &SpinState| match reference {
        Some(r) => {
            let p = basis.inner(r);
            if p.norm() > 0.0 {
                amp * (p.conj() / p.norm())
            } else {
                amp
            }
        }
        None => amp,
    };
    let ta = strip(a_prime, &plus);
    let tb = strip(b_prime, &minus);
    Ok(PhaseDecomposition {
        basis: *tau_b,
        a_prime,
        b_prime,
        theta_a: ta.im.atan2(ta.re),
        theta_b: tb.im.atan2(tb.re),
    })
}

/// Probability-weighted average of the two branch shifts.
pub fn weighted_shift(decomp: &PhaseDecomposition, shift_a: f64, shift_b: f64) -> Result<f64> {
    let (wa, wb) = decomp.weights();
    let total = wa + wb;
    if total == 0.0 {
        return Err(Error::ZeroAmplitude);
    }
    // A branch with zero weight contributes nothing even if its shift is undefined.
    let term = |w: f64, s: f64| if w == 0.0 { 0.0 } else { w * s };
    Ok((term(wa, shift_a) + term(wb, shift_b)) / total)
}

fn check_angle(cfg: &BarrierConfig, phi_in: f64) -> Result<()> {
    let (cr1, _) = critical_angles(cfg);
    if !(0.0..cr1).contains(&phi_in) {
        return Err(Error::OutOfAngularRange(phi_in));
    }
    Ok(())
}

/// In-plane reflected shift Δz_r for ky = 0; depends on the spin only through τ_y.
pub fn shift_reflected_ky0(cfg: &BarrierConfig, phi_in: f64, tau_y: f64) -> Result<f64> {
    check_angle(cfg, phi_in)?;
    let e = cfg.energy();
    let m = cfg.mass();
    let (s, c) = phi_in.sin_cos();
    // E cosφ (tan²φ - m/E) with the tangent cleared.
    let num = (e * s * s - m * c * c) / c;
    let den = e * e * s * s + m * m * c * c;
    let shift = tau_y * ((e - m) / (e + m)).sqrt() * num / den;
    Ok(to_compton(shift, m))
}

/// In-plane transmitted shift Δz_t for ky = 0.
pub fn shift_transmitted_ky0(cfg: &BarrierConfig, phi_in: f64, tau_y: f64) -> Result<f64> {
    let k = cfg.momentum();
    let (s, c) = phi_in.sin_cos();
    let (kx, kz) = (k * c, k * s);
    let kxp = match transmitted_channel(cfg, 0.0, kz) {
        TransmittedChannel::Propagating { kx_prime } if kx_prime > 0.0 => kx_prime,
        _ => return Err(Error::EvanescentChannel),
    };
    check_angle(cfg, phi_in)?;
    let n = cfg.refractive_index();
    let sum = kx + n * kxp;
    let num = sum + kz * kz * (1.0 / kx + n / kxp);
    let den = sum * sum + kz * kz * (1.0 - n) * (1.0 - n);
    Ok(to_compton(tau_y * (1.0 - n) * num / den, cfg.mass()))
}

/// Phase θ_a of the reflected τ_y = +1 branch for ky = 0, as a function of kz.
///
/// In the y basis A - iB = (l1 - i l2)(Ω + 2i kx kz (n - 1)) / den with
/// Ω = kx² - kz²(n - 1)² - n² kx'², so θ_b = -θ_a and Δz_r = -τ_y ∂θ_a/∂kz.
pub fn theta_a_ky0(cfg: &BarrierConfig, kz: f64) -> Result<f64> {
    let kx2 = cfg.momentum().powi(2) - kz * kz;
    if kx2 <= 0.0 {
        return Err(Error::GrazingIncidence(0.0));
    }
    let kx = kx2.sqrt();
    let kxp = propagating_kx_prime(&WaveVector::new(kx, 0.0, kz), cfg)?;
    let n = cfg.refractive_index();
    let omega = kx2 - kz * kz * (n - 1.0) * (n - 1.0) - n * n * kxp * kxp;
    Ok((2.0 * kx * kz * (n - 1.0)).atan2(omega))
}

/// Phase θ_c of the transmitted τ_y = +1 branch for ky = 0:
/// C - iD ∝ (l1 - i l2)(kx + n kx' + i kz (n - 1)) with a positive real factor.
pub fn theta_c_ky0(cfg: &BarrierConfig, kz: f64) -> Result<f64> {
    let kx2 = cfg.momentum().powi(2) - kz * kz;
    if kx2 <= 0.0 {
        return Err(Error::GrazingIncidence(0.0));
    }
    let kx = kx2.sqrt();
    let kxp = propagating_kx_prime(&WaveVector::new(kx, 0.0, kz), cfg)?;
    let n = cfg.refractive_index();
    Ok((kz * (n - 1.0)).atan2(kx + n * kxp))
}

fn ex() -> Vector3<f64> {
    Vector3::new(1.0, 0.0, 0.0)
}

/// General reflected shift (Δy_r, Δz_r) in closed vector form.
///
/// The prefactor contains E² - kx² = m² + ky² + kz², which stays positive for m > 0,
/// so normal incidence needs no special handling.
pub fn shift_reflected_vector(
    k: &WaveVector,
    tau: &BlochVector,
    cfg: &BarrierConfig,
) -> Result<ShiftVector> {
    if k.kx <= 0.0 {
        return Err(Error::GrazingIncidence(k.kx));
    }
    let e = cfg.energy();
    let m = cfg.mass();
    let kv = k.to_vector();
    let t = tau.to_vector();
    let eta = Vector3::new(0.0, k.ky, k.kz);
    let kx2 = k.kx * k.kx;
    let pre = 1.0 / (k.kx * (e + m) * (e + m) * (m * m + k.ky * k.ky + k.kz * k.kz));
    let v = eta * (e * (e + m) * t.cross(&kv).dot(&ex()))
        + t.cross(&ex()) * (kx2 * m * (e + m))
        + kv.cross(&ex()) * (kx2 * kv.dot(&t));
    Ok(ShiftVector { dy: to_compton(pre * v[1], m), dz: to_compton(pre * v[2], m) })
}

fn propagating_kx_prime(k: &WaveVector, cfg: &BarrierConfig) -> Result<f64> {
    match transmitted_channel(cfg, k.ky, k.kz) {
        TransmittedChannel::Propagating { kx_prime } if kx_prime > 0.0 => Ok(kx_prime),
        _ => Err(Error::EvanescentChannel),
    }
}

/// General transmitted shift (Δy_t, Δz_t) in closed vector form.
pub fn shift_transmitted_vector(
    k: &WaveVector,
    tau: &BlochVector,
    cfg: &BarrierConfig,
) -> Result<ShiftVector> {
    if k.kx <= 0.0 {
        return Err(Error::GrazingIncidence(k.kx));
    }
    let kxp = propagating_kx_prime(k, cfg)?;
    let n = cfg.refractive_index();
    let kv = k.to_vector();
    let t = tau.to_vector();
    let eta = Vector3::new(0.0, k.ky, k.kz);
    let kappa1 = 1.0 / k.kx + n / kxp;
    let kappa2 = k.kx + n * kxp;
    let kappa3 = 1.0 / (kappa2 * kappa2 + (n - 1.0) * (n - 1.0) * (k.ky * k.ky + k.kz * k.kz));
    let brace = eta * (kappa1 * t.cross(&kv).dot(&ex())) - t.cross(&ex()) * kappa2
        + ex().cross(&kv) * ((n - 1.0) * t.dot(&ex()));
    let v = brace * (-kappa3 * (n - 1.0));
    let m = cfg.mass();
    Ok(ShiftVector { dy: to_compton(v[1], m), dz: to_compton(v[2], m) })
}

/// Shift from three real phase functions Ω1, Ω2, Ω3 and their derivatives.
///
/// The amplitude of each spin branch is a linear combination of Ω1 + iΩ2 and Ω3
/// weighted by l2/l1; expressed through τ this removes the l1 = 0 singularity.
fn omega_shift(o: [f64; 3], d: [f64; 3], tau: &BlochVector) -> f64 {
    let w12 = d[0] * o[1] - o[0] * d[1];
    let w13 = d[0] * o[2] - o[0] * d[2];
    let w23 = d[1] * o[2] - o[1] * d[2];
    (tau.ty * w13 - tau.tz * w12 + tau.tx * w23) / (o[0] * o[0] + o[1] * o[1] + o[2] * o[2])
}

/// Reflected shift evaluated through the Ω1, Ω2, Ω3 phase functions.
pub fn shift_reflected_omega(
    k: &WaveVector,
    tau: &BlochVector,
    cfg: &BarrierConfig,
) -> Result<ShiftVector> {
    if k.kx <= 0.0 {
        return Err(Error::GrazingIncidence(k.kx));
    }
    let e = cfg.energy();
    let m = cfg.mass();
    // (n - 1) is a common factor of every Ω and cancels; keep it nonzero without a step.
    let nm = match cfg.refractive_index() - 1.0 {
        d if d == 0.0 => 1.0,
        d => d,
    };
    let (kx, ky, kz) = (k.kx, k.ky, k.kz);
    let o = [
        2.0 * nm * (ky * ky + kz * kz + (e + m) * m),
        2.0 * nm * kx * ky,
        2.0 * nm * kx * kz,
    ];
    let dy = [
        4.0 * nm * ky,
        2.0 * nm * (kx - ky * ky / kx),
        -2.0 * nm * ky * kz / kx,
    ];
    let dz = [
        4.0 * nm * kz,
        -2.0 * nm * ky * kz / kx,
        2.0 * nm * (kx - kz * kz / kx),
    ];
    Ok(ShiftVector {
        dy: to_compton(omega_shift(o, dy, tau), m),
        dz: to_compton(omega_shift(o, dz, tau), m),
    })
}

/// Transmitted shift evaluated through the Ω_k1, Ω_k2, Ω_k3 phase functions.
pub fn shift_transmitted_omega(
    k: &WaveVector,
    tau: &BlochVector,
    cfg: &BarrierConfig,
) -> Result<ShiftVector> {
    if k.kx <= 0.0 {
        return Err(Error::GrazingIncidence(k.kx));
    }
    let kxp = propagating_kx_prime(k, cfg)?;
    let n = cfg.refractive_index();
    let nm = n - 1.0;
    let (kx, ky, kz) = (k.kx, k.ky, k.kz);
    let kappa1 = 1.0 / kx + n / kxp;
    let o = [kx + n * kxp, nm * ky, nm * kz];
    let dy = [-kappa1 * ky, nm, 0.0];
    let dz = [-kappa1 * kz, 0.0, nm];
    let m = cfg.mass();
    Ok(ShiftVector {
        dy: to_compton(omega_shift(o, dy, tau), m),
        dz: to_compton(omega_shift(o, dz, tau), m),
    })
}

/// Spin direction preserved by the step: (0, sinφ'', -cosφ'') with φ'' the
/// azimuth of (ky, kz).
pub fn special_spin_direction(k: &WaveVector) -> Result<BlochVector> {
    let rho = k.ky.hypot(k.kz);
    if rho == 0.0 {
        return Err(Error::NormalIncidenceUndefined);
    }
    Ok(BlochVector { tx: 0.0, ty: k.kz / rho, tz: -k.ky / rho })
}

/// -dθ/dx at `x0` in natural units, from 4-point central differences at steps h
/// and h/2 combined by Richardson extrapolation. h is 1e-6 max(|x0|, 1) rounded
/// down to a power of two so every stencil point is exactly representable.
pub fn fd_phase_derivative<F>(mut phase_fn: F, x0: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let h = (1e-6 * x0.abs().max(1.0)).log2().floor().exp2();
    let offsets = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0];
    let mut vals = [0.0; 6];
    let mut prev = phase_fn(x0)?;
    let centre = prev;
    // Walk outward from the centre on each side so neighbours are adjacent samples.
    for idx in [2usize, 1, 0] {
        let v = phase_fn(x0 + offsets[idx] * h)?;
        if (v - prev).abs() > std::f64::consts::FRAC_PI_2 {
            return Err(Error::BranchDiscontinuity(v - prev));
        }
        vals[idx] = v;
        prev = v;
    }
    prev = centre;
    for idx in [3usize, 4, 5] {
        let v = phase_fn(x0 + offsets[idx] * h)?;
        if (v - prev).abs() > std::f64::consts::FRAC_PI_2 {
            return Err(Error::BranchDiscontinuity(v - prev));
        }
        vals[idx] = v;
        prev = v;
    }
    let d_h = (vals[0] - 8.0 * vals[1] + 8.0 * vals[4] - vals[5]) / (12.0 * h);
    // Stencil at h/2 uses the ±h/2 and ±h samples.
    let d_h2 = (vals[1] - 8.0 * vals[2] + 8.0 * vals[3] - vals[4]) / (6.0 * h);
    Ok(-(16.0 * d_h2 - d_h) / 15.0)
}

/// [`fd_phase_derivative`] converted to Compton wavelengths for mass `m`.
pub fn fd_shift_oracle<F>(phase_fn: F, kz0: f64, m: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    Ok(to_compton(fd_phase_derivative(phase_fn, kz0)?, m))
}

/// Outgoing wave whose amplitudes are differentiated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Reflected,
    Transmitted,
}

/// Transverse axis of the shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Y,
    Z,
}

fn side_pair(amps: &ScatteringAmplitudes, side: Side) -> (Complex64, Complex64) {
    match side {
        Side::Reflected => (amps.a, amps.b),
        Side::Transmitted => (amps.c, amps.d),
    }
}

/// Shift of one outgoing beam from finite differences of the solved amplitude
/// phases in the spin basis `basis`, in Compton wavelengths.
///
/// Each branch phase is measured relative to its value at the unperturbed beam,
/// so no unwrapping is needed across the tiny stencil.
pub fn fd_beam_shift(beam: &IncidentBeam, side: Side, axis: Axis, basis: &BlochVector) -> Result<f64> {
    if side == Side::Transmitted && !beam.channel().is_propagating() {
        return Err(Error::EvanescentChannel);
    }
    let amps0 = matching_solve(beam)?;
    let (a0, b0) = side_pair(&amps0, side);
    let d0 = basis_decompose(a0, b0, basis, Some(&beam.chi))?;
    let x0 = match axis {
        Axis::Y => beam.k.ky,
        Axis::Z => beam.k.kz,
    };
    let branch_shift = |pick_a: bool| -> Result<f64> {
        let anchor = if pick_a { d0.a_prime } else { d0.b_prime };
        let phase = |x: f64| -> Result<f64> {
            let moved = match axis {
                Axis::Y => beam.with_transverse(x, beam.k.kz)?,
                Axis::Z => beam.with_transverse(beam.k.ky, x)?,
            };
            let amps = matching_solve(&moved)?;
            let (a, b) = side_pair(&amps, side);
            let d = basis_decompose(a, b, basis, Some(&beam.chi))?;
            let z = if pick_a { d.a_prime } else { d.b_prime } * anchor.conj();
            Ok(z.im.atan2(z.re))
        };
        fd_shift_oracle(phase, x0, beam.config.mass())
    };
    let total = d0.a_prime.norm_sqr() + d0.b_prime.norm_sqr();
    let sa = if d0.a_prime.norm_sqr() > 1e-24 * total { branch_shift(true)? } else { 0.0 };
    let sb = if d0.b_prime.norm_sqr() > 1e-24 * total { branch_shift(false)? } else { 0.0 };
    weighted_shift(&d0, sa, sb)
}

/// d(A, B)/dk_j (or d(C, D)/dk_j) with the same Richardson stencil as the phase oracle.
pub fn amplitude_derivative(beam: &IncidentBeam, side: Side, axis: Axis) -> Result<[Complex64; 2]> {
    let x0 = match axis {
        Axis::Y => beam.k.ky,
        Axis::Z => beam.k.kz,
    };
    let h = (1e-6 * x0.abs().max(1.0)).log2().floor().exp2();
    let at = |off: f64| -> Result<[Complex64; 2]> {
        let x = x0 + off * h;
        let moved = match axis {
            Axis::Y => beam.with_transverse(x, beam.k.kz)?,
            Axis::Z => beam.with_transverse(beam.k.ky, x)?,
        };
        let (a, b) = side_pair(&matching_solve(&moved)?, side);
        Ok([a, b])
    };
    let [m2, m1, mh, ph, p1, p2] = [at(-2.0)?, at(-1.0)?, at(-0.5)?, at(0.5)?, at(1.0)?, at(2.0)?];
    let mut out = [Complex64::new(0.0, 0.0); 2];
    for i in 0..2 {
        let d_h = (m2[i] - m1[i] * 8.0 + p1[i] * 8.0 - p2[i]) / (12.0 * h);
        let d_h2 = (m1[i] - mh[i] * 8.0 + ph[i] * 8.0 - p1[i]) / (6.0 * h);
        out[i] = (d_h2 * 16.0 - d_h) / 15.0;
    }
    Ok(out)
}

/// Decomposition in `basis` and the two branch shifts -Im(a'* ∂a')/|a'|², in
/// Compton wavelengths. A branch without weight reports zero.
pub fn branch_shifts(
    beam: &IncidentBeam,
    side: Side,
    axis: Axis,
    basis: &BlochVector,
) -> Result<(PhaseDecomposition, f64, f64)> {
    if side == Side::Transmitted && !beam.channel().is_propagating() {
        return Err(Error::EvanescentChannel);
    }
    let (a, b) = side_pair(&matching_solve(beam)?, side);
    let decomp = basis_decompose(a, b, basis, Some(&beam.chi))?;
    let [da, db] = amplitude_derivative(beam, side, axis)?;
    let dv = SpinState { l1: da, l2: db };
    let d_plus = chi_from_bloch(basis).inner(&dv);
    let d_minus = chi_from_bloch(&-*basis).inner(&dv);
    let m = beam.config.mass();
    let total = a.norm_sqr() + b.norm_sqr();
    let branch = |amp: Complex64, d: Complex64| {
        let w = amp.norm_sqr();
        if w <= 1e-24 * total {
            0.0
        } else {
            to_compton(-(amp.conj() * d).im / w, m)
        }
    };
    Ok((decomp, branch(decomp.a_prime, d_plus), branch(decomp.b_prime, d_minus)))
}

/// Default decomposition basis: the +y spin axis used for in-plane shifts.
pub fn y_basis() -> BlochVector {
    BlochVector { tx: 0.0, ty: 1.0, tz: 0.0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn cfg() -> BarrierConfig {
        BarrierConfig::new(3.0, 0.25, 1.0).unwrap()
    }

    #[test]
    fn table_points() {
        let c = cfg();
        let at = |d: f64| shift_reflected_ky0(&c, d.to_radians(), 0.92).unwrap();
        assert!((at(60.0) - 0.0592).abs() < 1e-4);
        assert!((at(0.0) + 0.1035).abs() < 1e-4);
        assert!(at(30.0).abs() < 1e-12);
        assert_eq!(shift_reflected_ky0(&c, 0.7, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(
            shift_reflected_ky0(&cfg(), 70f64.to_radians(), 1.0),
            Err(Error::OutOfAngularRange(_))
        ));
        assert_eq!(
            shift_transmitted_ky0(&cfg(), 70f64.to_radians(), 1.0).unwrap_err(),
            Error::EvanescentChannel
        );
    }

    #[test]
    fn identity_and_y_bases() {
        let a = Complex64::new(0.3, -0.2);
        let b = Complex64::new(-0.1, 0.7);
        let d = basis_decompose(a, b, &BlochVector::new(0.0, 0.0, 1.0).unwrap(), None).unwrap();
        assert_eq!((d.a_prime, d.b_prime), (a, b));
        let d = basis_decompose(a, b, &y_basis(), None).unwrap();
        let i = Complex64::new(0.0, 1.0);
        assert!((d.a_prime - (a - i * b) * FRAC_1_SQRT_2).norm() < 1e-15);
        assert!((d.b_prime - (a + i * b) * FRAC_1_SQRT_2).norm() < 1e-15);
    }

    #[test]
    fn weighted_trivia() {
        let d = PhaseDecomposition {
            basis: y_basis(),
            a_prime: Complex64::new(0.5, 0.0),
            b_prime: Complex64::new(0.0, 0.5),
            theta_a: 0.0,
            theta_b: 0.0,
        };
        assert_eq!(weighted_shift(&d, 0.3, -0.3).unwrap(), 0.0);
        let d1 = PhaseDecomposition { b_prime: Complex64::new(0.0, 0.0), ..d };
        assert_eq!(weighted_shift(&d1, 0.3, f64::NAN).unwrap(), 0.3);
    }

    #[test]
    fn special_direction_examples() {
        let t = special_spin_direction(&WaveVector::new(1.0, 0.0, 0.5)).unwrap();
        assert_eq!((t.tx, t.ty, t.tz), (0.0, 1.0, 0.0));
        let t = special_spin_direction(&WaveVector::new(1.0, 0.4, 0.0)).unwrap();
        assert_eq!((t.tx, t.ty, t.tz), (0.0, 0.0, -1.0));
        assert_eq!(
            special_spin_direction(&WaveVector::new(1.0, 0.0, 0.0)).unwrap_err(),
            Error::NormalIncidenceUndefined
        );
    }

    #[test]
    fn oracle_linear_and_constant() {
        let v = fd_phase_derivative(|x| Ok(0.37 * x), 2.1).unwrap();
        assert!((v + 0.37).abs() < 1e-9);
        assert_eq!(fd_phase_derivative(|_| Ok(1.25), 0.3).unwrap(), 0.0);
    }

    #[test]
    fn oracle_detects_branch_jump() {
        let r = fd_phase_derivative(|x| Ok(if x > 1.0 { 3.0 } else { -3.0 }), 1.0);
        assert!(matches!(r, Err(Error::BranchDiscontinuity(_))));
    }
}
