//! Rest-frame spin states, their Bloch vectors, and the boosted spin four-vector.

use nalgebra::Vector2;
use num_complex::Complex64;

use crate::dirac_core::{
    free_energy, from_blocks, hamiltonian, positive_energy_spinor, sigma_dot, Bispinor,
    ComplexMatrix2, ComplexMatrix4, WaveVector,
};
use crate::{Error, Result};

/// Two-component spin state χ = (l1, l2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinState {
    pub l1: Complex64,
    pub l2: Complex64,
}

impl SpinState {
    /// Builds a state and checks |l1|² + |l2|² = 1 within 1e-12.
    pub fn new(l1: Complex64, l2: Complex64) -> Result<Self> {
        let s = Self { l1, l2 };
        if !(l1.re.is_finite() && l1.im.is_finite() && l2.re.is_finite() && l2.im.is_finite()) {
            return Err(Error::NonFinite("spin state"));
        }
        if (s.norm_sq() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "spin state norm² = {} is not 1",
                s.norm_sq()
            )));
        }
        Ok(s)
    }

    /// Rescales an arbitrary nonzero pair to unit norm.
    pub fn normalized(l1: Complex64, l2: Complex64) -> Result<Self> {
        let n = (l1.norm_sqr() + l2.norm_sqr()).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroAmplitude);
        }
        Ok(Self { l1: l1 / n, l2: l2 / n })
    }

    pub fn up() -> Self {
        Self { l1: Complex64::new(1.0, 0.0), l2: Complex64::new(0.0, 0.0) }
    }

    pub fn down() -> Self {
        Self { l1: Complex64::new(0.0, 0.0), l2: Complex64::new(1.0, 0.0) }
    }

    pub fn norm_sq(&self) -> f64 {
        self.l1.norm_sqr() + self.l2.norm_sqr()
    }

    pub fn as_vector(&self) -> Vector2<Complex64> {
        Vector2::new(self.l1, self.l2)
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &SpinState) -> Complex64 {
        self.l1.conj() * other.l1 + self.l2.conj() * other.l2
    }
}

/// Unit Bloch vector τ of a pure spin state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub tx: f64,
    pub ty: f64,
    pub tz: f64,
}

impl BlochVector {
    /// Builds a Bloch vector and checks it is a unit vector within 1e-12.
    pub fn new(tx: f64, ty: f64, tz: f64) -> Result<Self> {
        let b = Self { tx, ty, tz };
        if !(tx.is_finite() && ty.is_finite() && tz.is_finite()) {
            return Err(Error::NonFinite("Bloch vector"));
        }
        if (b.norm_sq() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "Bloch vector norm² = {} is not 1",
                b.norm_sq()
            )));
        }
        Ok(b)
    }

    /// Rescales a nonzero vector to unit length.
    pub fn normalized(tx: f64, ty: f64, tz: f64) -> Result<Self> {
        let n = (tx * tx + ty * ty + tz * tz).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidInput("Bloch vector must be nonzero".into()));
        }
        Ok(Self { tx: tx / n, ty: ty / n, tz: tz / n })
    }

    /// τ = (sinθ cosφ, sinθ sinφ, cosθ), angles in radians.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self { tx: st * cp, ty: st * sp, tz: ct }
    }

    pub fn norm_sq(&self) -> f64 {
        self.tx * self.tx + self.ty * self.ty + self.tz * self.tz
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.tx, self.ty, self.tz]
    }

    pub fn to_vector(&self) -> nalgebra::Vector3<f64> {
        nalgebra::Vector3::new(self.tx, self.ty, self.tz)
    }
}

impl std::ops::Neg for BlochVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self { tx: -self.tx, ty: -self.ty, tz: -self.tz }
    }
}

/// Spin four-vector (s0, s) of a moving particle; rest magnitude 1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinFourVector {
    pub s0: f64,
    pub sv: [f64; 3],
}

impl SpinFourVector {
    /// Minkowski product s^μ p_μ = s0 E - s·k.
    pub fn dot_momentum(&self, k: &WaveVector, energy: f64) -> f64 {
        self.s0 * energy - (self.sv[0] * k.kx + self.sv[1] * k.ky + self.sv[2] * k.kz)
    }
}

/// Boosts the rest spin τ/2 to the frame where the particle has wavevector `k`.
pub fn boost_spin(k: &WaveVector, m: f64, tau: &BlochVector) -> SpinFourVector {
    let rest = [0.5 * tau.tx, 0.5 * tau.ty, 0.5 * tau.tz];
    let kn = k.norm();
    if kn == 0.0 {
        return SpinFourVector { s0: 0.0, sv: rest };
    }
    let e = free_energy(k, m);
    let khat = [k.kx / kn, k.ky / kn, k.kz / kn];
    let proj = khat[0] * rest[0] + khat[1] * rest[1] + khat[2] * rest[2];
    // γβ̄ = |k|/m and γ - 1 = k²/(m(E + m)).
    let gamma_beta = kn / m;
    let gamma_minus_one = kn * kn / (m * (e + m));
    SpinFourVector {
        s0: gamma_beta * proj,
        sv: [
            gamma_minus_one * proj * khat[0] + rest[0],
            gamma_minus_one * proj * khat[1] + rest[1],
            gamma_minus_one * proj * khat[2] + rest[2],
        ],
    }
}

/// Γ = γ5 γ^μ s_μ written in 2×2 blocks [[σ·s, -s0], [s0, -σ·s]].
pub fn gamma_spin_operator(s: &SpinFourVector) -> ComplexMatrix4 {
    let ss = sigma_dot(s.sv);
    let id = ComplexMatrix2::identity();
    let s0 = Complex64::new(s.s0, 0.0);
    from_blocks(&ss, &(id * -s0), &(id * s0), &(-ss))
}

/// ‖[Γ, H] ψ‖ for an arbitrary bispinor ψ.
pub fn commutator_residual(k: &WaveVector, m: f64, s: &SpinFourVector, psi: &Bispinor) -> f64 {
    let g = gamma_spin_operator(s);
    let h = hamiltonian(k, m);
    ((g * h - h * g) * psi).norm()
}

/// ‖[Γ, H] Ψ'‖ with Ψ' the positive-energy spinor carrying χ.
pub fn positive_subspace_commutator(
    k: &WaveVector,
    m: f64,
    s: &SpinFourVector,
    chi: &SpinState,
) -> f64 {
    commutator_residual(k, m, s, &positive_energy_spinor(k, m, chi))
}

/// Bloch vector of χ; invariant under a global phase.
pub fn bloch_from_chi(chi: &SpinState) -> BlochVector {
    let n = chi.norm_sq();
    let c = chi.l1.conj() * chi.l2;
    BlochVector {
        tx: 2.0 * c.re / n,
        ty: 2.0 * c.im / n,
        tz: (chi.l1.norm_sqr() - chi.l2.norm_sqr()) / n,
    }
}

/// χ = (cos(θ/2), sin(θ/2) e^{iφ}) with l1 real and nonnegative; φ = 0 on the z axis.
pub fn chi_from_bloch(tau: &BlochVector) -> SpinState {
    let c = ((1.0 + tau.tz) / 2.0).max(0.0).sqrt();
    let s = ((1.0 - tau.tz) / 2.0).max(0.0).sqrt();
    let rho = tau.tx.hypot(tau.ty);
    let phase = if rho > 0.0 {
        Complex64::new(tau.tx / rho, tau.ty / rho)
    } else {
        Complex64::new(1.0, 0.0)
    };
    let l1 = Complex64::new(c, 0.0);
    let l2 = phase * s;
    let n = (c * c + s * s).sqrt();
    SpinState { l1: l1 / n, l2: l2 / n }
}
