//! Accumulated spin shift of a transmitted beam crossing a uniform electric field.
//!
//! The field region is sliced into thin slabs, each acting as a tiny potential
//! step dV = -q 𝔼₀ dx. Every slab contributes the first-order transmitted shift
//! of that step and the kinetic energy grows affinely along x.

use nalgebra::Vector3;

use crate::dirac_core::WaveVector;
use crate::shifts::ShiftVector;
use crate::spin::BlochVector;
use crate::{to_compton, Error, Result};

/// Uniform field along +x acting on a particle of charge sign `charge_sign`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldConfig {
    /// e𝔼₀ in natural units (energy per length), > 0.
    pub field_strength: f64,
    /// -1 for the electron convention q = -e.
    pub charge_sign: f64,
    pub energy0: f64,
    pub mass: f64,
}

impl FieldConfig {
    pub fn new(field_strength: f64, charge_sign: f64, energy0: f64, mass: f64) -> Result<Self> {
        if !(field_strength.is_finite() && energy0.is_finite() && mass.is_finite()) {
            return Err(Error::NonFinite("field config"));
        }
        if field_strength <= 0.0 {
            return Err(Error::InvalidInput(format!("field strength {field_strength} must be positive")));
        }
        if charge_sign != 1.0 && charge_sign != -1.0 {
            return Err(Error::InvalidInput(format!("charge sign {charge_sign} must be ±1")));
        }
        if mass <= 0.0 {
            return Err(Error::InvalidInput(format!("mass {mass} must be positive")));
        }
        if energy0 <= mass {
            return Err(Error::BelowRest(energy0));
        }
        Ok(Self { field_strength, charge_sign, energy0, mass })
    }

    /// Electron in a field of strength `field_strength`.
    pub fn electron(field_strength: f64, energy0: f64, mass: f64) -> Result<Self> {
        Self::new(field_strength, -1.0, energy0, mass)
    }

    /// 𝓔(x) = 𝓔₀ + e𝔼₀ x.
    pub fn energy_at(&self, x: f64) -> f64 {
        self.energy0 + self.field_strength * x
    }
}

/// Lateral shift picked up in one slab of thickness `dx` at the given energy.
///
/// Valid only while kx is a sizeable fraction of |k|; kx < 0.1|k| is rejected.
pub fn local_shift_increment(
    k: &WaveVector,
    tau: &BlochVector,
    energy: f64,
    field: &FieldConfig,
    dx: f64,
) -> Result<ShiftVector> {
    let kn = k.norm();
    if kn == 0.0 {
        return Err(Error::ZeroMomentum);
    }
    let limit = 0.1 * kn;
    if k.kx < limit {
        return Err(Error::SmallKx { kx: k.kx, limit });
    }
    let ex = Vector3::new(1.0, 0.0, 0.0);
    let kv = k.to_vector();
    let t = tau.to_vector();
    let eta = Vector3::new(0.0, k.ky, k.kz);
    let kx2 = k.kx * k.kx;
    let brace = eta * t.cross(&kv).dot(&ex) - t.cross(&ex) * kx2;
    let pre = field.charge_sign * field.field_strength * dx / (2.0 * kx2 * k.kx * (energy + field.mass));
    Ok(ShiftVector {
        dy: to_compton(pre * brace[1], field.mass),
        dz: to_compton(pre * brace[2], field.mass),
    })
}

/// Sums the slab increments of a normally incident beam over [0, x_max].
///
/// Each slab is evaluated at its mid-energy. The result is signed; for the
/// electron convention and τ = +y it points along -z.
pub fn propagate(field: &FieldConfig, x_max: f64, steps: usize, tau: &BlochVector) -> Result<ShiftVector> {
    if steps < 1000 {
        return Err(Error::InvalidInput(format!("steps = {steps}; at least 1000 are required")));
    }
    if !(x_max >= 0.0) || !x_max.is_finite() {
        return Err(Error::InvalidInput(format!("x_max = {x_max} must be finite and nonnegative")));
    }
    let dx = x_max / steps as f64;
    let m = field.mass;
    let mut total = ShiftVector::zero();
    for i in 0..steps {
        let e = field.energy_at((i as f64 + 0.5) * dx);
        let k = WaveVector::new(((e - m) * (e + m)).sqrt(), 0.0, 0.0);
        total = total + local_shift_increment(&k, tau, e, field, dx)?;
    }
    Ok(total)
}

/// (1/4π)[√((ξ₁-1)/(ξ₁+1)) - √((ξ₀-1)/(ξ₀+1))] with ξ = 𝓔/m, in Compton wavelengths.
/// `energy1` may be +∞.
pub fn closed_form_trajectory(energy0: f64, energy1: f64, m: f64) -> Result<f64> {
    if energy0 <= m {
        return Err(Error::BelowRest(energy0));
    }
    if energy1 <= m {
        return Err(Error::BelowRest(energy1));
    }
    if energy1 < energy0 {
        return Err(Error::InvalidInput(format!("final energy {energy1} is below initial {energy0}")));
    }
    let root = |e: f64| {
        if e.is_infinite() {
            1.0
        } else {
            ((e - m) / (e + m)).sqrt()
        }
    };
    Ok((root(energy1) - root(energy0)) / (4.0 * std::f64::consts::PI))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y() -> BlochVector {
        BlochVector::new(0.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn normal_incidence_increment() {
        let f = FieldConfig::electron(1.0, 3.0, 1.0).unwrap();
        let k = 8f64.sqrt();
        let inc = local_shift_increment(&WaveVector::new(k, 0.0, 0.0), &y(), 3.0, &f, 0.01).unwrap();
        let want = to_compton(0.01 / (2.0 * k * 4.0), 1.0);
        assert_eq!(inc.dy, 0.0);
        assert!((inc.dz + want).abs() < 1e-16);
    }

    #[test]
    fn spin_along_field_gives_nothing() {
        let f = FieldConfig::electron(1.0, 3.0, 1.0).unwrap();
        let tau = BlochVector::new(1.0, 0.0, 0.0).unwrap();
        let inc = local_shift_increment(&WaveVector::new(2.0, 0.0, 0.0), &tau, 3.0, &f, 0.1).unwrap();
        assert_eq!(inc, ShiftVector::zero());
    }

    #[test]
    fn grazing_rejected() {
        let f = FieldConfig::electron(1.0, 3.0, 1.0).unwrap();
        let r = local_shift_increment(&WaveVector::new(0.05, 0.0, 1.0), &y(), 3.0, &f, 0.1);
        assert!(matches!(r, Err(Error::SmallKx { .. })));
    }

    #[test]
    fn closed_form_limits() {
        assert_eq!(closed_form_trajectory(3.0, 3.0, 1.0).unwrap(), 0.0);
        let inf = closed_form_trajectory(3.0, f64::INFINITY, 1.0).unwrap();
        assert!((inf - (1.0 - 0.5f64.sqrt()) / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
        assert_eq!(closed_form_trajectory(1.0, 2.0, 1.0).unwrap_err(), Error::BelowRest(1.0));
    }

    #[test]
    fn few_steps_rejected() {
        let f = FieldConfig::electron(1.0, 3.0, 1.0).unwrap();
        assert!(propagate(&f, 1.0, 999, &y()).is_err());
        assert_eq!(propagate(&f, 0.0, 1000, &y()).unwrap(), ShiftVector::zero());
    }
}
