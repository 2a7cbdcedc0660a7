//! Published values at the standard working point E = 3m, V0 = m/4, τ_y = 0.92.

pub const ANGLES_DEG: [f64; 36] = [
    0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0, 22.0, 24.0, 26.0, 28.0, 30.0,
    32.0, 34.0, 36.0, 38.0, 40.0, 42.0, 44.0, 46.0, 48.0, 50.0, 52.0, 54.0, 56.0, 58.0, 59.0,
    60.0, 61.0, 62.0, 63.0, 64.0,
];

pub const PHI_T_DEG: [f64; 36] = [
    0.0, 2.21, 4.42, 6.62, 8.84, 11.05, 13.27, 15.49, 17.72, 19.95, 22.19, 24.43, 26.68, 28.95,
    31.22, 33.51, 35.81, 38.13, 40.46, 42.82, 45.21, 47.63, 50.08, 52.58, 55.14, 57.76, 60.46,
    63.28, 66.25, 69.44, 71.16, 72.98, 74.94, 77.13, 79.66, 82.91,
];

/// Reflected shift Δz_r in Compton wavelengths.
pub const DZ_R: [f64; 36] = [
    -0.1035, -0.1021, -0.0980, -0.0916, -0.0835, -0.0745, -0.0650, -0.0556, -0.0466, -0.0381,
    -0.0302, -0.0231, -0.0165, -0.0105, -0.0050, 0.0, 0.0046, 0.0089, 0.0130, 0.0168, 0.0205,
    0.0241, 0.0275, 0.0310, 0.0345, 0.0381, 0.0418, 0.0457, 0.0498, 0.0543, 0.0567, 0.0592,
    0.0617, 0.0646, 0.0675, 0.0706,
];

pub const TAU_Y: f64 = 0.92;
