//! Two- and four-point Green's functions, wavepacket convolutions and
//! two-photon transmission probabilities.

mod amplitude;
mod evaluator;
mod oracle;
mod poles;
mod ports;
mod probability;
mod wavepacket;

pub use amplitude::{rho_conditional, rho_conditional_quadrature, ShellAmplitude};
pub use evaluator::{GreenEvaluator, S1Element};
pub use oracle::{TimeDomainOracle, ORACLE_DECAY_MARGIN, ORACLE_MAX_SITES};
pub use poles::{NormIntegral, PoleKernel, ReducedAmplitude};
pub use ports::{PortPair, TwoPhotonPorts, Waveguide};
pub use probability::{
    delta_pulse_probability, transmission_probability, DeltaVariant, InnerStrategy, ProbabilityEstimate,
    ProbabilityOptions,
};
pub use wavepacket::{pair_normalization, PulseShape, WavepacketSpec};
