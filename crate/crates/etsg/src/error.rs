use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("helicity basis is singular for k along -z (k + kz = 0)")]
    DegenerateDirection,
    #[error("wavevector has zero magnitude")]
    ZeroMomentum,
    #[error("Klein regime: E - V0 + m = {0} must be positive")]
    KleinRegime(f64),
    #[error("energy E - V0 = {0} above the step must be positive")]
    SubBarrierEnergy(f64),
    #[error("boundary matching system is singular")]
    SingularMatching,
    #[error("current density has a non-negligible imaginary part {0}")]
    NonRealCurrent(f64),
    #[error("incidence too close to grazing (kx = {0})")]
    GrazingIncidence(f64),
    #[error("transmitted channel is evanescent; no transmitted angle")]
    EvanescentNoAngle,
    #[error("transmitted channel is evanescent")]
    EvanescentChannel,
    #[error("incident angle {0} rad lies outside [0, phi_cr1)")]
    OutOfAngularRange(f64),
    #[error("spin direction undefined at normal incidence")]
    NormalIncidenceUndefined,
    #[error("phase jumped by {0} rad between stencil points; unwrap before differentiating")]
    BranchDiscontinuity(f64),
    #[error("amplitude vanishes; phase undefined")]
    ZeroAmplitude,
    #[error("spectral band reaches the critical angle")]
    BandCrossesCritical,
    #[error("profile carries no intensity")]
    EmptyProfile,
    #[error("kx = {kx} is below 0.1 |k| = {limit}")]
    SmallKx { kx: f64, limit: f64 },
    #[error("energy {0} is not above the rest energy")]
    BelowRest(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}
