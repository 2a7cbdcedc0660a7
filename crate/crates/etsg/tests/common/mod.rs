#![allow(dead_code)]

use etsg::dirac_core::WaveVector;
use etsg::scattering::{BarrierConfig, IncidentBeam};
use etsg::spin::{chi_from_bloch, BlochVector};
use proptest::prelude::*;
use std::f64::consts::{PI, TAU};

pub fn working_point() -> BarrierConfig {
    BarrierConfig::new(3.0, 0.25, 1.0).unwrap()
}

pub fn bloch() -> impl Strategy<Value = BlochVector> {
    (-1.0f64..=1.0, 0.0..TAU).prop_map(|(c, p)| {
        let s = (1.0 - c * c).max(0.0).sqrt();
        BlochVector::normalized(s * p.cos(), s * p.sin(), c).unwrap()
    })
}

pub fn wavevector(k: f64) -> impl Strategy<Value = WaveVector> {
    (0.0f64..1.0, 0.0..TAU, 0.0..PI).prop_map(move |(r, a, b)| {
        let kk = k * r;
        WaveVector::new(kk * b.sin() * a.cos(), kk * b.sin() * a.sin(), kk * b.cos())
    })
}

/// (E, V0, m) with a propagating transmitted channel available.
pub fn config() -> impl Strategy<Value = BarrierConfig> {
    (0.3f64..2.0, 1.05f64..6.0, 0.0f64..0.95).prop_map(|(m, xi, v)| {
        let e = m * xi;
        BarrierConfig::new(e, v * (e - m), m).unwrap()
    })
}

/// Beam whose transmitted wave propagates; ky and kz both generic.
pub fn propagating_beam() -> impl Strategy<Value = IncidentBeam> {
    (config(), 0.0f64..1.0, 0.0..TAU, bloch()).prop_map(|(cfg, u, psi, tau)| {
        let k = cfg.momentum();
        let ev = cfg.energy() - cfg.barrier();
        let kp = ((ev - cfg.mass()) * (ev + cfg.mass())).sqrt();
        let kt = u * (0.999 * kp).min(0.985 * k);
        let kx = ((k - kt) * (k + kt)).sqrt();
        let wv = WaveVector::new(kx, kt * psi.cos(), kt * psi.sin());
        IncidentBeam::new(cfg, wv, chi_from_bloch(&tau)).unwrap()
    })
}

/// Beam past total reflection.
pub fn evanescent_beam() -> impl Strategy<Value = IncidentBeam> {
    (config(), 0.0f64..1.0, 0.0..TAU, bloch())
        .prop_filter_map("no evanescent window", |(cfg, u, psi, tau)| {
            let k = cfg.momentum();
            let ev = cfg.energy() - cfg.barrier();
            let kp2 = (ev - cfg.mass()) * (ev + cfg.mass());
            let lo = kp2.max(0.0).sqrt() * 1.001;
            let hi = 0.985 * k;
            if lo >= hi {
                return None;
            }
            let kt = lo + u * (hi - lo);
            let kx = ((k - kt) * (k + kt)).sqrt();
            let wv = WaveVector::new(kx, kt * psi.cos(), kt * psi.sin());
            Some(IncidentBeam::new(cfg, wv, chi_from_bloch(&tau)).unwrap())
        })
}

/// Largest componentwise difference relative to the larger modulus of each pair.
/// Components below 1e-3 of the largest amplitude in the set (A = B = 0 without
/// a step, for instance) are measured against that floor instead.
pub fn rel_diff(a: &[etsg::Complex64], b: &[etsg::Complex64]) -> f64 {
    let big = a.iter().chain(b).map(|z| z.norm()).fold(0.0, f64::max);
    let floor = 1e-3 * big;
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm() / x.norm().max(y.norm()).max(floor).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}
