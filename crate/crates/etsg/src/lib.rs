//! Relativistic Dirac scattering at a one-dimensional electrostatic step and the
//! spin-dependent lateral shifts of the reflected and transmitted beams.
//!
//! Units: ħ = c = 1 and the particle mass `m` is an explicit parameter. Energies
//! carry units of energy, wavevectors of inverse length, and every length handed
//! back to the caller is expressed in Compton wavelengths λ_C = 2π/m.

pub mod dirac_core;
pub mod error;
pub mod scattering;
pub mod shifts;
pub mod spin;
pub mod trajectory;
pub mod wavepacket;

pub use error::{Error, Result};

pub use num_complex::Complex64;

/// Converts a length in natural units (1/energy) into Compton wavelengths.
pub fn to_compton(length: f64, mass: f64) -> f64 {
    length * mass / std::f64::consts::TAU
}

/// Inverse of [`to_compton`].
pub fn from_compton(length: f64, mass: f64) -> f64 {
    length * std::f64::consts::TAU / mass
}
