//! Dirac matrices, the free Hamiltonian and its plane-wave eigenstates.

use nalgebra::{Matrix2, Matrix4, Vector2, Vector3, Vector4};
use num_complex::Complex64;

use crate::spin::SpinState;
use crate::{Error, Result};

pub type Bispinor = Vector4<Complex64>;
pub type ComplexMatrix4 = Matrix4<Complex64>;
pub type ComplexMatrix2 = Matrix2<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Cartesian wavevector in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVector {
    pub kx: f64,
    pub ky: f64,
    pub kz: f64,
}

impl WaveVector {
    pub const fn new(kx: f64, ky: f64, kz: f64) -> Self {
        Self { kx, ky, kz }
    }

    pub fn norm_sq(&self) -> f64 {
        self.kx * self.kx + self.ky * self.ky + self.kz * self.kz
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Mirror image across the interface plane x = 0.
    pub fn reflected(&self) -> Self {
        Self::new(-self.kx, self.ky, self.kz)
    }

    pub fn to_vector(&self) -> Vector3<f64> {
        Vector3::new(self.kx, self.ky, self.kz)
    }

    pub fn is_finite(&self) -> bool {
        self.kx.is_finite() && self.ky.is_finite() && self.kz.is_finite()
    }
}

/// The three Pauli matrices.
pub fn pauli() -> [ComplexMatrix2; 3] {
    [
        Matrix2::new(ZERO, ONE, ONE, ZERO),
        Matrix2::new(ZERO, -I, I, ZERO),
        Matrix2::new(ONE, ZERO, ZERO, -ONE),
    ]
}

/// σ·v for a real 3-vector.
pub fn sigma_dot(v: [f64; 3]) -> ComplexMatrix2 {
    Matrix2::new(
        Complex64::new(v[2], 0.0),
        Complex64::new(v[0], -v[1]),
        Complex64::new(v[0], v[1]),
        Complex64::new(-v[2], 0.0),
    )
}

/// Assembles a 4×4 matrix from 2×2 blocks.
pub fn from_blocks(
    a: &ComplexMatrix2,
    b: &ComplexMatrix2,
    c: &ComplexMatrix2,
    d: &ComplexMatrix2,
) -> ComplexMatrix4 {
    let mut m = ComplexMatrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(b);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(c);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(d);
    m
}

/// Returns (α_x, α_y, α_z, β) in the Dirac representation.
pub fn dirac_matrices() -> (ComplexMatrix4, ComplexMatrix4, ComplexMatrix4, ComplexMatrix4) {
    let [sx, sy, sz] = pauli();
    let z = ComplexMatrix2::zeros();
    let id = ComplexMatrix2::identity();
    let alpha = |s: &ComplexMatrix2| from_blocks(&z, s, s, &z);
    (alpha(&sx), alpha(&sy), alpha(&sz), from_blocks(&id, &z, &z, &(-id)))
}

/// Spin operator Σ = diag(σ, σ) contracted with a real vector.
pub fn big_sigma_dot(v: [f64; 3]) -> ComplexMatrix4 {
    let s = sigma_dot(v);
    let z = ComplexMatrix2::zeros();
    from_blocks(&s, &z, &z, &s)
}

/// Free Hamiltonian α·k + βm.
pub fn hamiltonian(k: &WaveVector, m: f64) -> ComplexMatrix4 {
    let sk = sigma_dot([k.kx, k.ky, k.kz]);
    let id = ComplexMatrix2::identity();
    let mm = Complex64::new(m, 0.0);
    from_blocks(&(id * mm), &sk, &sk, &(id * -mm))
}

/// Positive-branch energy √(k² + m²).
pub fn free_energy(k: &WaveVector, m: f64) -> f64 {
    k.norm().hypot(m)
}

/// Positive-energy eigenstate carrying the rest-frame spin state χ.
pub fn positive_energy_spinor(k: &WaveVector, m: f64, chi: &SpinState) -> Bispinor {
    let e = free_energy(k, m);
    let up = Vector2::new(chi.l1, chi.l2);
    let lower = sigma_dot([k.kx, k.ky, k.kz]) * up;
    let norm = 1.0 / (2.0 * e * (e + m)).sqrt();
    Vector4::new(
        up[0] * (e + m),
        up[1] * (e + m),
        lower[0],
        lower[1],
    ) * Complex64::new(norm, 0.0)
}

/// Negative-energy partner of [`positive_energy_spinor`]: ((E-m)χ, -(σ·k)χ)/√(2E(E-m)).
///
/// Requires |k| > 0.
pub fn negative_energy_spinor(k: &WaveVector, m: f64, chi: &SpinState) -> Bispinor {
    let e = free_energy(k, m);
    let up = Vector2::new(chi.l1, chi.l2);
    let lower = sigma_dot([k.kx, k.ky, k.kz]) * up;
    // E - m computed as k²/(E + m) to stay accurate for small k.
    let e_minus_m = k.norm_sq() / (e + m);
    let norm = 1.0 / (2.0 * e * e_minus_m).sqrt();
    Vector4::new(
        up[0] * e_minus_m,
        up[1] * e_minus_m,
        -lower[0],
        -lower[1],
    ) * Complex64::new(norm, 0.0)
}

/// Helicity operator (1/2) Σ·k̂.
pub fn helicity_operator(k: &WaveVector) -> Result<ComplexMatrix4> {
    let kn = k.norm();
    if kn < 1e-15 {
        return Err(Error::ZeroMomentum);
    }
    Ok(big_sigma_dot([k.kx / kn, k.ky / kn, k.kz / kn]) * Complex64::new(0.5, 0.0))
}

/// The four helicity eigenstates: (+E, +1/2), (+E, -1/2), (-E, +1/2), (-E, -1/2).
pub fn helicity_spinors(k: &WaveVector, m: f64) -> Result<[Bispinor; 4]> {
    let kn = k.norm();
    if kn < 1e-15 {
        return Err(Error::ZeroMomentum);
    }
    let kpz = kn + k.kz;
    if kpz.abs() < 1e-12 * kn {
        return Err(Error::DegenerateDirection);
    }
    let e = free_energy(k, m);
    let up = (e + m).sqrt();
    let um = (kn * kn / (e + m)).sqrt();
    let kp = Complex64::new(k.kx, k.ky);
    let km = Complex64::new(k.kx, -k.ky);
    let c = |x: f64| Complex64::new(x, 0.0);
    let norm = c(1.0 / (2.0 * (e * kn * kpz).sqrt()));
    let s1 = Vector4::new(c(up * kpz), kp * up, c(kn / up * kpz), kp * (kn / up));
    let s2 = Vector4::new(-km * up, c(up * kpz), km * (kn / up), c(-kn / up * kpz));
    let s3 = Vector4::new(c(um * kpz), kp * um, c(-kn / um * kpz), -kp * (kn / um));
    let s4 = Vector4::new(-km * um, c(um * kpz), -km * (kn / um), c(kn / um * kpz));
    Ok([s1 * norm, s2 * norm, s3 * norm, s4 * norm])
}

/// Which unitary diagonalizer of H to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diagonalizer {
    /// Columns are the helicity eigenstates.
    W,
    /// Columns are the spin-basis eigenstates built from χ = |↑⟩, |↓⟩.
    WPrime,
}

/// Unitary U with U† H U = diag(E, E, -E, -E).
///
/// For `WPrime` with |k| ≤ 1e-12 the identity is returned; the lower-right block
/// has no direction-independent limit there.
pub fn diagonalizer(k: &WaveVector, m: f64, variant: Diagonalizer) -> Result<ComplexMatrix4> {
    let cols: [Bispinor; 4] = match variant {
        Diagonalizer::W => helicity_spinors(k, m)?,
        Diagonalizer::WPrime => {
            if k.norm() <= 1e-12 {
                return Ok(ComplexMatrix4::identity());
            }
            let (up, down) = (SpinState::up(), SpinState::down());
            [
                positive_energy_spinor(k, m, &up),
                positive_energy_spinor(k, m, &down),
                negative_energy_spinor(k, m, &up),
                negative_energy_spinor(k, m, &down),
            ]
        }
    };
    let u = ComplexMatrix4::from_columns(&cols);
    if u.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("diagonalizer"));
    }
    Ok(u)
}

/// Frobenius norm of [H, diag(T, (σ·k̂) T (σ·k̂))].
pub fn commutator_with_h(block_t: &ComplexMatrix2, k: &WaveVector, m: f64) -> Result<f64> {
    let kn = k.norm();
    if kn < 1e-15 {
        return Err(Error::ZeroMomentum);
    }
    let sk = sigma_dot([k.kx / kn, k.ky / kn, k.kz / kn]);
    let z = ComplexMatrix2::zeros();
    let o = from_blocks(block_t, &z, &z, &(sk * block_t * sk));
    let h = hamiltonian(k, m);
    Ok((h * o - o * h).norm())
}
