use thiserror::Error;

/// Everything that can go wrong while building models, solving spectra or
/// integrating scattering amplitudes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("Schrieffer-Wolff denominator U^2 - (eps_{bond_plus_one} - eps_{bond})^2 = {value:e} vanishes")]
    ResonantDenominator { bond: usize, bond_plus_one: usize, value: f64 },

    #[error("eigensolver did not converge ({0})")]
    ConvergenceFailure(&'static str),

    #[error("matrix is not {expected}: asymmetry {deviation:e}")]
    StructureMismatch { expected: &'static str, deviation: f64 },

    #[error("eigenvector matrix is near-defective (condition number {condition:e})")]
    NearDefective { condition: f64 },

    #[error("energy {energy} lies within {distance:e} of eigenvalue {eigenvalue}")]
    PoleProximity { energy: num_complex::Complex64, eigenvalue: f64, distance: f64 },

    #[error("eigenvalue {alpha} is degenerate within {gap:e}")]
    DegenerateEigenvalue { alpha: usize, gap: f64 },

    #[error("adaptive quadrature failed: {0}")]
    IntegrationFailure(String),

    #[error("time-domain correlation has only decayed to {remaining:e} at tmax")]
    InsufficientDecay { remaining: f64 },

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("resonant path {path} of eigenstate {alpha} failed: {source}")]
    PathFailure { alpha: usize, path: usize, source: Box<Error> },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
