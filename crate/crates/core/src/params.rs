use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// The golden-mean incommensuration ratio (sqrt(5) - 1) / 2.
pub const GOLDEN_RATIO_CONJUGATE: f64 = 0.618_033_988_749_894_9;

/// Physical parameters of the chain and its waveguide coupling, all energies
/// in units of the hopping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LatticeParams {
    /// Number of sites.
    pub n: usize,
    /// Nearest-neighbour hopping. The energy unit, so normally 1.
    pub j: f64,
    /// On-site Bose-Hubbard interaction.
    pub u: f64,
    /// Amplitude of the quasiperiodic potential.
    pub h: f64,
    /// Incommensuration ratio of the potential.
    pub b: f64,
    /// Waveguide coupling at sites 1 and N.
    pub kappa: f64,
    /// Uniform local loss rate.
    pub gamma: f64,
    /// Lorentzian wavepacket width.
    pub sigma: f64,
}

impl Default for LatticeParams {
    fn default() -> Self {
        Self {
            n: 15,
            j: 1.0,
            u: 0.0,
            h: 0.0,
            b: GOLDEN_RATIO_CONJUGATE,
            kappa: 0.25,
            gamma: 0.0,
            sigma: 0.01,
        }
    }
}

impl LatticeParams {
    pub fn with_n(n: usize) -> Self {
        Self { n, ..Self::default() }
    }

    /// Checks the ranges every builder relies on.
    ///
    /// A zero waveguide coupling is accepted here so the closed system can be
    /// recovered from the effective-Hamiltonian builder; scattering code
    /// additionally requires `kappa > 0`.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("n", "need at least one site"));
        }
        let finite = [
            ("j", self.j),
            ("u", self.u),
            ("h", self.h),
            ("b", self.b),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
            ("sigma", self.sigma),
        ];
        for (name, value) in finite {
            if !value.is_finite() {
                return Err(invalid(name, format!("{value} is not finite")));
            }
        }
        for (name, value) in [("u", self.u), ("h", self.h), ("kappa", self.kappa), ("gamma", self.gamma)] {
            if value < 0.0 {
                return Err(invalid(name, format!("{value} is negative")));
            }
        }
        if self.sigma <= 0.0 {
            return Err(invalid("sigma", format!("{} must be positive", self.sigma)));
        }
        Ok(())
    }

    /// On-site energy of the 1-based site `site`: h cos(2 pi b site).
    pub fn onsite(&self, site: usize) -> f64 {
        self.h * (2.0 * PI * self.b * site as f64).cos()
    }

    /// On-site energies for sites 1..=N, stored 0-based.
    pub fn onsite_energies(&self) -> Vec<f64> {
        (1..=self.n).map(|site| self.onsite(site)).collect()
    }

    /// Two-particle Hilbert-space dimension N(N+1)/2.
    pub fn d2(&self) -> usize {
        self.n * (self.n + 1) / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_ratio_constant() {
        assert!((GOLDEN_RATIO_CONJUGATE - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-16);
    }

    #[test]
    fn onsite_uses_one_based_sites() {
        let p = LatticeParams { n: 3, h: 2.0, b: 0.5, ..LatticeParams::default() };
        let eps = p.onsite_energies();
        assert!((eps[0] + 2.0).abs() < 1e-12);
        assert!((eps[1] - 2.0).abs() < 1e-12);
        assert!((eps[2] + 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(LatticeParams { n: 0, ..Default::default() }.validate().is_err());
        assert!(LatticeParams { sigma: 0.0, ..Default::default() }.validate().is_err());
        assert!(LatticeParams { gamma: -1e-3, ..Default::default() }.validate().is_err());
        assert!(LatticeParams { h: f64::NAN, ..Default::default() }.validate().is_err());
        assert!(LatticeParams::default().validate().is_ok());
    }
}
