use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PulseShape {
    Lorentzian,
    Delta,
}

/// Single-photon input profile centred at momentum `center`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavepacketSpec {
    pub center: f64,
    pub width: f64,
    pub shape: PulseShape,
}

impl WavepacketSpec {
    pub fn lorentzian(center: f64, width: f64) -> Self {
        Self { center, width, shape: PulseShape::Lorentzian }
    }

    /// Lorentzian amplitude sqrt(sigma/pi) / (q - k + i sigma). Delta pulses
    /// have no pointwise amplitude and return `None`.
    pub fn amplitude(&self, q: f64) -> Option<Complex64> {
        match self.shape {
            PulseShape::Lorentzian => {
                let c0 = (self.width / PI).sqrt();
                Some(c0 / Complex64::new(q - self.center, self.width))
            }
            PulseShape::Delta => None,
        }
    }
}

/// Norm 1 + 4 sigma^2 / ((k1 - k2)^2 + 4 sigma^2) of the symmetrized
/// two-photon Lorentzian input.
pub fn pair_normalization(k1: f64, k2: f64, sigma: f64) -> f64 {
    let s2 = 4.0 * sigma * sigma;
    1.0 + s2 / ((k1 - k2).powi(2) + s2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coincident_momenta_double_the_norm() {
        assert_eq!(pair_normalization(0.3, 0.3, 0.01), 2.0);
        assert!((pair_normalization(0.0, 10.0, 0.01) - 1.0).abs() < 1e-5);
    }

    #[test]
    fn lorentzian_is_normalized() {
        let w = WavepacketSpec::lorentzian(0.2, 0.05);
        let dx = 1e-3;
        let total: f64 = (-200_000..200_000).map(|k| w.amplitude(k as f64 * dx).unwrap().norm_sqr() * dx).sum();
        assert!((total - 1.0).abs() < 1e-3);
        assert!(WavepacketSpec { shape: PulseShape::Delta, ..w }.amplitude(0.0).is_none());
    }
}
