use serde::{Deserialize, Serialize};

use super::cell::ScatteringCell;
use crate::error::{Error, Result};
use crate::scattering::{
    delta_pulse_probability, transmission_probability, DeltaVariant, ProbabilityOptions, PulseShape, TwoPhotonPorts,
};

/// Below this T2 the effective localisation length is reported as infinite.
pub const UNDERFLOW: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct T2Options {
    pub pulse: PulseShape,
    pub probability: ProbabilityOptions,
}

impl Default for T2Options {
    fn default() -> Self {
        Self { pulse: PulseShape::Lorentzian, probability: ProbabilityOptions::default() }
    }
}

/// A probability-valued observable with the diagnostics of its evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Observation {
    pub value: f64,
    /// Some probability was slightly negative and reported as zero.
    pub clamped: bool,
    /// Inner integrals that fell back from residues to quadrature.
    pub fallbacks: usize,
}

fn probability(cell: &ScatteringCell, k1: f64, k2: f64, options: &T2Options) -> Result<Observation> {
    let ports = TwoPhotonPorts::TRANSMISSION;
    match options.pulse {
        PulseShape::Delta => {
            let value = delta_pulse_probability(k1, k2, ports, &cell.evaluator, DeltaVariant::Full)?;
            Ok(Observation { value, ..Default::default() })
        }
        PulseShape::Lorentzian => {
            let e = transmission_probability(k1, k2, cell.params.sigma, ports, &cell.evaluator, &options.probability)?;
            Ok(Observation { value: e.value, clamped: e.clamped, fallbacks: e.fallbacks })
        }
    }
}

/// Two-photon transmission of eigenstate `alpha` averaged over its resonant paths.
pub fn t2(alpha: usize, cell: &ScatteringCell, options: &T2Options) -> Result<Observation> {
    let set = cell.paths(alpha)?;
    let mut out = Observation::default();
    for (path, &(k1, k2)) in set.paths.iter().enumerate() {
        let p = probability(cell, k1, k2, options)
            .map_err(|source| Error::PathFailure { alpha, path: path + 1, source: Box::new(source) })?;
        out.value += p.value;
        out.clamped |= p.clamped;
        out.fallbacks += p.fallbacks;
    }
    out.value /= set.paths.len() as f64;
    Ok(out)
}

/// Two-photon transmission for two identical photons at half the energy of
/// eigenstate `alpha`.
pub fn t2_coherent(alpha: usize, cell: &ScatteringCell, options: &T2Options) -> Result<Observation> {
    let set = cell.paths(alpha)?;
    let half = 0.5 * (set.paths[0].0 + set.paths[0].1);
    probability(cell, half, half, options)
}

/// Inverse effective two-particle localisation length -ln(T2) / (2(N-1)).
pub fn effective_lambda2(t2_value: f64, n: usize) -> f64 {
    if t2_value < UNDERFLOW {
        return f64::INFINITY;
    }
    -t2_value.ln() / (2.0 * (n as f64 - 1.0))
}
