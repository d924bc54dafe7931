use crate::error::{invalid, Result};
use crate::model::{build_h1, build_h2, TwoParticleBasis};
use crate::params::LatticeParams;
use crate::scattering::GreenEvaluator;
use crate::spectral::{eig_hermitian, HermitianSpectrum};

/// Input momentum pairs (E_mu^(1), E_alpha^(2) - E_mu^(1)) that make both the
/// one- and the two-photon transition resonant with the closed chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonantPathSet {
    pub alpha: usize,
    pub paths: Vec<(f64, f64)>,
}

impl ResonantPathSet {
    pub fn new(alpha: usize, one: &HermitianSpectrum, two: &HermitianSpectrum) -> Result<Self> {
        if alpha == 0 || alpha > two.dim() {
            return Err(invalid("alpha", format!("{alpha} outside 1..={}", two.dim())));
        }
        let total = two.values[alpha - 1];
        let paths = one.values.iter().map(|&e| (e, total - e)).collect();
        Ok(Self { alpha, paths })
    }
}

/// Everything needed to evaluate observables at one parameter point: closed
/// spectra for resonance energies and participation ratios, and the open
/// evaluator for amplitudes.
#[derive(Debug, Clone)]
pub struct ScatteringCell {
    pub params: LatticeParams,
    pub closed1: HermitianSpectrum,
    pub closed2: HermitianSpectrum,
    pub evaluator: GreenEvaluator,
}

impl ScatteringCell {
    pub fn new(params: &LatticeParams) -> Result<Self> {
        let closed1 = eig_hermitian(&build_h1(params)?)?;
        let closed2 = eig_hermitian(&build_h2(params, &TwoParticleBasis::new(params.n))?)?;
        let evaluator = GreenEvaluator::new(params)?;
        Ok(Self { params: params.clone(), closed1, closed2, evaluator })
    }

    pub fn d2(&self) -> usize {
        self.closed2.dim()
    }

    pub fn paths(&self, alpha: usize) -> Result<ResonantPathSet> {
        ResonantPathSet::new(alpha, &self.closed1, &self.closed2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths_add_up_to_the_two_particle_energy() {
        let cell = ScatteringCell::new(&LatticeParams { n: 4, u: 1.5, h: 0.8, ..Default::default() }).unwrap();
        for alpha in 1..=cell.d2() {
            let set = cell.paths(alpha).unwrap();
            assert_eq!(set.paths.len(), 4);
            for (k1, k2) in set.paths {
                assert!((k1 + k2 - cell.closed2.values[alpha - 1]).abs() < 1e-12);
            }
        }
        assert!(cell.paths(0).is_err());
        assert!(cell.paths(11).is_err());
    }
}
