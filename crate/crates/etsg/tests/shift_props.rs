mod common;

use common::{propagating_beam, working_point};
use etsg::dirac_core::WaveVector;
use etsg::scattering::*;
use etsg::shifts::*;
use etsg::spin::{chi_from_bloch, BlochVector, SpinState};
use etsg::{Complex64, Error};
use proptest::prelude::*;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + 1e-15
}

/// 20 angles up to 5° below the total-reflection angle (64.92°), skipping 27°..33°
/// where Δz_r crosses zero and a relative comparison is meaningless.
fn interior_angles() -> Vec<f64> {
    [0.0, 3.0, 6.0, 9.0, 12.0, 15.0, 18.0, 21.0, 24.0, 27.0, 33.0, 36.0, 39.0, 42.0, 45.0, 48.0, 51.0, 54.0, 57.0, 59.9]
        .iter()
        .map(|d: &f64| d.to_radians())
        .collect()
}

#[test]
fn table_working_point_values() {
    let cfg = working_point();
    let r = |d: f64| shift_reflected_ky0(&cfg, d.to_radians(), 0.92).unwrap();
    assert!((r(0.0) + 0.1035).abs() < 1e-4);
    assert!((r(60.0) - 0.0592).abs() < 1e-4);
    assert!((r(15.0) + 0.051).abs() < 1e-3);
    assert!(r(30.0).abs() < 1e-12);
    assert_eq!(shift_reflected_ky0(&cfg, 0.3, 0.0).unwrap(), 0.0);
    assert_eq!(shift_transmitted_ky0(&cfg, 0.3, 0.0).unwrap(), 0.0);
}

#[test]
fn transmitted_shift_is_negative_and_grows() {
    let cfg = working_point();
    let (cr1, _) = critical_angles(&cfg);
    let mut last = 0.0;
    let mut phi = 0.0;
    while phi < cr1 {
        let t = shift_transmitted_ky0(&cfg, phi, 0.92).unwrap();
        assert!(t < 0.0, "Δz_t({phi}) = {t}");
        assert!(t.abs() >= last);
        last = t.abs();
        phi += 0.002;
    }
    let near = shift_transmitted_ky0(&cfg, cr1 - 1e-9, 0.92).unwrap();
    assert!(near.abs() > 100.0);
    let free = BarrierConfig::new(3.0, 0.0, 1.0).unwrap();
    assert_eq!(shift_transmitted_ky0(&free, 0.4, 0.92).unwrap(), 0.0);
}

#[test]
fn zero_crossing_at_second_critical_angle() {
    let cfg = working_point();
    let f = |p: f64| shift_reflected_ky0(&cfg, p, 1.0).unwrap();
    let (mut lo, mut hi) = (0.1, 1.0);
    assert!(f(lo) < 0.0 && f(hi) > 0.0);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 { lo = mid } else { hi = mid }
    }
    assert!((lo - critical_angles(&cfg).1).abs() < 1e-10);
}

#[test]
fn reflected_shift_is_independent_of_energy_only_through_mass_ratio() {
    // Doubling E and m together keeps μ = m/E; the shift in Compton units is unchanged.
    let a = shift_reflected_ky0(&BarrierConfig::new(3.0, 0.25, 1.0).unwrap(), 0.7, 0.5).unwrap();
    let b = shift_reflected_ky0(&BarrierConfig::new(6.0, 0.9, 2.0).unwrap(), 0.7, 0.5).unwrap();
    assert!(close(a, b, 1e-13));
}

#[test]
fn analytic_matches_finite_differences() {
    let cfg = working_point();
    let tau = BlochVector::normalized(0.35, 0.8, -0.2).unwrap();
    let chi = chi_from_bloch(&tau);
    for phi in interior_angles() {
        let beam = IncidentBeam::from_angle(cfg, phi, 0.0, chi).unwrap();
        let r = shift_reflected_ky0(&cfg, phi, tau.ty).unwrap();
        let t = shift_transmitted_ky0(&cfg, phi, tau.ty).unwrap();
        let fr = fd_beam_shift(&beam, Side::Reflected, Axis::Z, &y_basis()).unwrap();
        let ft = fd_beam_shift(&beam, Side::Transmitted, Axis::Z, &y_basis()).unwrap();
        assert!(close(r, fr, 1e-6), "reflected at {phi}: {r} vs {fr}");
        assert!(close(t, ft, 1e-6), "transmitted at {phi}: {t} vs {ft}");
        // Explicit branch phases: Δz = -τ_y ∂θ/∂kz.
        let kz = beam.k.kz;
        let pa = fd_shift_oracle(|x| theta_a_ky0(&cfg, x), kz, 1.0).unwrap();
        let pc = fd_shift_oracle(|x| theta_c_ky0(&cfg, x), kz, 1.0).unwrap();
        assert!(close(r, tau.ty * pa, 1e-6), "θ_a at {phi}: {r} vs {}", tau.ty * pa);
        assert!(close(t, tau.ty * pc, 1e-6), "θ_c at {phi}: {t} vs {}", tau.ty * pc);
    }
}

#[test]
fn finite_differences_near_the_zero_crossing() {
    let cfg = working_point();
    for deg in [29.5f64, 30.0, 30.5] {
        let phi = deg.to_radians();
        let beam = IncidentBeam::from_angle(cfg, phi, 0.0, chi_from_bloch(&y_basis())).unwrap();
        let r = shift_reflected_ky0(&cfg, phi, 1.0).unwrap();
        let f = fd_beam_shift(&beam, Side::Reflected, Axis::Z, &y_basis()).unwrap();
        assert!((r - f).abs() < 1e-8, "{deg}: {r} vs {f}");
    }
}

#[test]
fn out_of_plane_shift_at_ky_zero() {
    let cfg = working_point();
    let tau = BlochVector::normalized(0.5, 0.3, 0.4).unwrap();
    for deg in [0.0f64, 40.0] {
        let beam = IncidentBeam::from_angle(cfg, deg.to_radians(), 0.0, chi_from_bloch(&tau)).unwrap();
        let r = shift_reflected_vector(&beam.k, &tau, &cfg).unwrap();
        let t = shift_transmitted_vector(&beam.k, &tau, &cfg).unwrap();
        assert!(r.dy.abs() > 1e-2);
        assert!(close(r.dy, fd_beam_shift(&beam, Side::Reflected, Axis::Y, &y_basis()).unwrap(), 1e-6));
        assert!(close(t.dy, fd_beam_shift(&beam, Side::Transmitted, Axis::Y, &y_basis()).unwrap(), 1e-6));
    }
}

#[test]
fn vector_forms_match_finite_differences_off_plane() {
    let cfg = working_point();
    let tau = BlochVector::normalized(-0.4, 0.5, 0.7).unwrap();
    let chi = chi_from_bloch(&tau);
    for (i, phi) in interior_angles().into_iter().enumerate() {
        let ky = if i % 2 == 0 { 0.6 } else { -0.9 };
        let beam = IncidentBeam::from_angle(cfg, phi, ky, chi).unwrap();
        if !beam.channel().is_propagating() {
            continue;
        }
        let r = shift_reflected_vector(&beam.k, &tau, &cfg).unwrap();
        let t = shift_transmitted_vector(&beam.k, &tau, &cfg).unwrap();
        let basis = y_basis();
        let fr = ShiftVector {
            dy: fd_beam_shift(&beam, Side::Reflected, Axis::Y, &basis).unwrap(),
            dz: fd_beam_shift(&beam, Side::Reflected, Axis::Z, &basis).unwrap(),
        };
        let ft = ShiftVector {
            dy: fd_beam_shift(&beam, Side::Transmitted, Axis::Y, &basis).unwrap(),
            dz: fd_beam_shift(&beam, Side::Transmitted, Axis::Z, &basis).unwrap(),
        };
        // Relative to the length of the shift vector.
        for (a, f) in [(r, fr), (t, ft)] {
            let err = (a + -f).norm();
            assert!(err <= 1e-6 * a.norm(), "phi {phi}, ky {ky}: {a:?} vs {f:?}");
        }
    }
}

#[test]
fn non_relativistic_exponent() {
    let phi = 60f64.to_radians();
    let pts: Vec<(f64, f64)> = (0..=30)
        .map(|i| {
            let eps = 10f64.powf(-6.0 + 3.0 * i as f64 / 30.0);
            let cfg = BarrierConfig::new(1.0 + eps, 0.01 * eps, 1.0).unwrap();
            (eps.ln(), shift_reflected_ky0(&cfg, phi, 0.92).unwrap().abs().ln())
        })
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    assert!((slope - 0.5).abs() <= 0.02, "slope {slope}");
}

#[test]
fn special_direction_keeps_ratio() {
    let cfg = working_point();
    let k = WaveVector::new(1.5, 1.2, -1.9);
    let k = WaveVector::new((cfg.momentum().powi(2) - k.ky * k.ky - k.kz * k.kz).sqrt(), k.ky, k.kz);
    let tau = special_spin_direction(&k).unwrap();
    let beam = IncidentBeam::new(cfg, k, chi_from_bloch(&tau)).unwrap();
    let amps = amplitudes_closed_form(&beam);
    let ratio = beam.chi.l2 / beam.chi.l1;
    assert!((amps.b / amps.a - ratio).norm() < 1e-12);
    assert!((amps.d / amps.c - ratio).norm() < 1e-12);
    let t = special_spin_direction(&WaveVector::new(1.0, 0.0, -0.3)).unwrap();
    assert_eq!((t.tx, t.ty, t.tz), (0.0, -1.0, 0.0));
}

#[test]
fn normal_incidence_is_finite() {
    let cfg = working_point();
    let tau = BlochVector::new(0.0, 1.0, 0.0).unwrap();
    let k = WaveVector::new(cfg.momentum(), 0.0, 0.0);
    let r = shift_reflected_vector(&k, &tau, &cfg).unwrap();
    assert!(close(r.dz, shift_reflected_ky0(&cfg, 0.0, 1.0).unwrap(), 1e-12));
    let x = BlochVector::new(1.0, 0.0, 0.0).unwrap();
    assert_eq!(shift_transmitted_vector(&k, &x, &cfg).unwrap().norm(), 0.0);
}

#[test]
fn evanescent_transmitted_rejected() {
    let cfg = working_point();
    let k = cfg.momentum();
    let wv = WaveVector::new(k * 0.3, 0.0, k * (1.0f64 - 0.09).sqrt());
    let tau = BlochVector::new(0.0, 1.0, 0.0).unwrap();
    assert_eq!(shift_transmitted_vector(&wv, &tau, &cfg).unwrap_err(), Error::EvanescentChannel);
    assert!(matches!(shift_reflected_ky0(&cfg, 1.2, 1.0), Err(Error::OutOfAngularRange(_))));
    assert!(matches!(shift_reflected_ky0(&cfg, -0.1, 1.0), Err(Error::OutOfAngularRange(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn spin_flip_negates_every_shift(beam in propagating_beam(), tau in common::bloch()) {
        let cfg = beam.config;
        let k = beam.k;
        let fns: [fn(&WaveVector, &BlochVector, &BarrierConfig) -> etsg::Result<ShiftVector>; 4] = [
            shift_reflected_vector, shift_transmitted_vector, shift_reflected_omega, shift_transmitted_omega,
        ];
        for f in fns {
            let a = f(&k, &tau, &cfg).unwrap();
            let b = f(&k, &-tau, &cfg).unwrap();
            prop_assert_eq!(a, -b);
        }
        let phi = k.kz.abs().atan2(k.kx);
        if let Ok(a) = shift_reflected_ky0(&cfg, phi, tau.ty) {
            prop_assert_eq!(a, -shift_reflected_ky0(&cfg, phi, -tau.ty).unwrap());
        }
    }

    #[test]
    fn omega_forms_match_vector_forms(beam in propagating_beam(), tau in common::bloch()) {
        let (k, cfg) = (beam.k, beam.config);
        let pairs = [
            (shift_reflected_vector(&k, &tau, &cfg).unwrap(), shift_reflected_omega(&k, &tau, &cfg).unwrap()),
            (shift_transmitted_vector(&k, &tau, &cfg).unwrap(), shift_transmitted_omega(&k, &tau, &cfg).unwrap()),
        ];
        for (v, o) in pairs {
            let scale = v.norm().max(o.norm()).max(1e-12);
            prop_assert!((v.dy - o.dy).abs() <= 1e-10 * scale, "{:?} vs {:?}", v, o);
            prop_assert!((v.dz - o.dz).abs() <= 1e-10 * scale, "{:?} vs {:?}", v, o);
        }
    }

    #[test]
    fn vector_forms_reduce_in_plane(cfg in common::config(), u in 0.0f64..0.999, tau in common::bloch()) {
        let (cr1, _) = critical_angles(&cfg);
        let phi = u * cr1.min(1.4);
        let k = cfg.momentum();
        let wv = WaveVector::new(k * phi.cos(), 0.0, k * phi.sin());
        let r = shift_reflected_vector(&wv, &tau, &cfg).unwrap();
        let t = shift_transmitted_vector(&wv, &tau, &cfg).unwrap();
        let r0 = shift_reflected_ky0(&cfg, phi, tau.ty).unwrap();
        let t0 = shift_transmitted_ky0(&cfg, phi, tau.ty).unwrap();
        prop_assert!((r.dz - r0).abs() <= 1e-10 * r0.abs().max(1.0));
        prop_assert!((t.dz - t0).abs() <= 1e-10 * t0.abs().max(1.0));
        // The out-of-plane shift at ky = 0 comes only from τx and τz; it vanishes for τ ∥ y.
        let y = BlochVector::new(0.0, tau.ty.signum(), 0.0).unwrap();
        prop_assert_eq!(shift_reflected_vector(&wv, &y, &cfg).unwrap().dy, 0.0);
        prop_assert!(shift_transmitted_vector(&wv, &y, &cfg).unwrap().dy.abs() <= 1e-15);
    }

    #[test]
    fn reflected_shift_ignores_barrier(beam in propagating_beam(), tau in common::bloch(), v in 0.0f64..1.0) {
        let cfg = beam.config;
        let other = BarrierConfig::new(cfg.energy(), v * 0.99 * (cfg.energy() - cfg.mass()), cfg.mass()).unwrap();
        let a = shift_reflected_vector(&beam.k, &tau, &cfg).unwrap();
        let b = shift_reflected_vector(&beam.k, &tau, &other).unwrap();
        prop_assert!((a.dy - b.dy).abs() <= 1e-12 && (a.dz - b.dz).abs() <= 1e-12);
    }

    #[test]
    fn basis_change_is_unitary(a in proptest::array::uniform4(-1.0f64..1.0), tau in common::bloch()) {
        let (ca, cb) = (Complex64::new(a[0], a[1]), Complex64::new(a[2], a[3]));
        prop_assume!(ca.norm_sqr() + cb.norm_sqr() > 1e-6);
        let d = basis_decompose(ca, cb, &tau, None).unwrap();
        let (wa, wb) = d.weights();
        prop_assert!((wa + wb - ca.norm_sqr() - cb.norm_sqr()).abs() <= 1e-12);
        let back = chi_from_bloch(&tau);
        let back_m = chi_from_bloch(&-tau);
        let la = back.l1 * d.a_prime + back_m.l1 * d.b_prime;
        let lb = back.l2 * d.a_prime + back_m.l2 * d.b_prime;
        prop_assert!((la - ca).norm() <= 1e-12 && (lb - cb).norm() <= 1e-12);
    }

    #[test]
    fn in_plane_y_basis_phases_are_opposite(cfg in common::config(), u in 0.01f64..0.99, tau in common::bloch()) {
        prop_assume!(cfg.barrier() > 0.0 && tau.ty.abs() < 0.99);
        let (cr1, _) = critical_angles(&cfg);
        let phi = u * cr1.min(1.4);
        let beam = IncidentBeam::from_angle(cfg, phi, 0.0, chi_from_bloch(&tau)).unwrap();
        let amps = matching_solve(&beam).unwrap();
        for (x, y) in [(amps.a, amps.b), (amps.c, amps.d)] {
            let d = basis_decompose(x, y, &y_basis(), Some(&beam.chi)).unwrap();
            let s = (d.theta_a + d.theta_b).rem_euclid(std::f64::consts::TAU);
            prop_assert!(s.min(std::f64::consts::TAU - s) <= 1e-12, "θa {} θb {}", d.theta_a, d.theta_b);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn weighted_shift_is_basis_independent(
        beam in propagating_beam(),
        bases in proptest::collection::vec(common::bloch(), 5),
    ) {
        let ev = beam.config.energy() - beam.config.barrier();
        let kp = ((ev - beam.config.mass()) * (ev + beam.config.mass())).sqrt();
        // Stay clear of the grazing transmitted wave, where the FD step would cross the edge.
        prop_assume!(beam.k.ky.hypot(beam.k.kz) < 0.95 * kp && beam.config.barrier() > 1e-3);
        for side in [Side::Reflected, Side::Transmitted] {
            for axis in [Axis::Y, Axis::Z] {
                let vals: Vec<f64> = bases
                    .iter()
                    .map(|b| {
                        let (d, sa, sb) = branch_shifts(&beam, side, axis, b).unwrap();
                        weighted_shift(&d, sa, sb).unwrap()
                    })
                    .collect();
                let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-9);
                for v in &vals {
                    prop_assert!((v - vals[0]).abs() <= 1e-10 * scale, "{:?}", vals);
                }
            }
        }
    }
}

#[test]
fn weighted_shift_edge_cases() {
    let d = basis_decompose(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), &BlochVector::new(0.0, 0.0, 1.0).unwrap(), None).unwrap();
    assert_eq!(weighted_shift(&d, 0.25, f64::NAN).unwrap(), 0.25);
    assert_eq!(
        basis_decompose(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), &y_basis(), None).unwrap_err(),
        Error::ZeroAmplitude
    );
    let _ = SpinState::up();
}
