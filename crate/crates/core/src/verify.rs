//! Self-consistency suites run on small chains: the U = 0 null test,
//! unitarity, time-domain equivalence and residue-versus-quadrature checks.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::params::{LatticeParams, GOLDEN_RATIO_CONJUGATE};
use crate::quadrature::QuadSettings;
use crate::scattering::{
    rho_conditional, rho_conditional_quadrature, transmission_probability, GreenEvaluator, PortPair,
    ProbabilityOptions, TimeDomainOracle, TwoPhotonPorts, Waveguide, ORACLE_MAX_SITES,
};
use crate::spectral::{eig_hermitian, participation_ratio, pr_inverse_via_residues};
use crate::model::{build_h2, TwoParticleBasis};

/// Time steps of the time-domain propagation.
pub const ORACLE_STEPS: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub max_deviation: f64,
    pub threshold: f64,
    pub passed: bool,
    pub samples: usize,
}

impl SuiteReport {
    fn new(name: &'static str, deviations: &[f64], threshold: f64) -> Self {
        let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
        let finite = deviations.iter().all(|d| d.is_finite());
        Self { name, max_deviation, threshold, passed: finite && max_deviation < threshold, samples: deviations.len() }
    }
}

/// Deterministic low-discrepancy points in [lo, hi).
fn points(count: usize, lo: f64, hi: f64, offset: f64) -> Vec<f64> {
    (0..count).map(|k| lo + (hi - lo) * (offset + k as f64 * GOLDEN_RATIO_CONJUGATE).fract()).collect()
}

fn shells(count: usize) -> Vec<(f64, f64, f64, f64)> {
    let a = points(count, -2.5, 2.5, 0.1);
    let b = points(count, -2.5, 2.5, 0.45);
    let c = points(count, -2.5, 2.5, 0.8);
    (0..count).map(|k| (a[k], b[k], c[k], a[k] + b[k] - c[k])).collect()
}

const PORT_SETS: [TwoPhotonPorts; 2] = [
    TwoPhotonPorts::TRANSMISSION,
    TwoPhotonPorts { input: Waveguide::W1, first: Waveguide::WN, second: Waveguide::W1 },
];

/// Largest |G4| with the interaction switched off.
pub fn u0_null(params: &LatticeParams) -> Result<SuiteReport> {
    let ev = GreenEvaluator::new(&LatticeParams { u: 0.0, ..params.clone() })?;
    let mut dev = Vec::new();
    for (p1, p2, q1, q2) in shells(20) {
        for ports in PORT_SETS {
            dev.push(ev.g4(p1, p2, q1, q2, ports).norm());
        }
    }
    Ok(SuiteReport::new("u0_null", &dev, 1e-9))
}

/// Photon-number conservation. With loss the sums may only fall short of one.
pub fn unitarity(params: &LatticeParams) -> Result<(SuiteReport, SuiteReport)> {
    let ev = GreenEvaluator::new(params)?;
    let lossy = params.gamma > 0.0;
    let excess = |total: f64| if lossy { (total - 1.0).max(0.0) } else { (total - 1.0).abs() };
    let mut one = Vec::new();
    for q in points(50, -3.0, 3.0, 0.2) {
        for input in Waveguide::BOTH {
            let total: f64 = Waveguide::BOTH
                .iter()
                .map(|&output| ev.s1_element(q, PortPair { input, output }).value().norm_sqr())
                .sum();
            one.push(excess(total));
        }
    }
    let options = ProbabilityOptions::default();
    let mut two = Vec::new();
    let k1s = points(5, -2.0, 2.0, 0.3);
    let k2s = points(5, -2.0, 2.0, 0.7);
    for (&k1, &k2) in k1s.iter().zip(&k2s) {
        let mut total = 0.0;
        for ports in TwoPhotonPorts::all_outputs(Waveguide::W1) {
            total += transmission_probability(k1, k2, params.sigma, ports, &ev, &options)?.value;
        }
        two.push(excess(total));
    }
    Ok((SuiteReport::new("unitarity_one_photon", &one, 1e-10), SuiteReport::new("unitarity_two_photon", &two, 1e-4)))
}

/// Relative deviation of the spectral Green's functions from the Fourier
/// transform of the propagated wavefunction.
pub fn time_domain(params: &LatticeParams) -> Result<SuiteReport> {
    if params.n > ORACLE_MAX_SITES {
        return Err(invalid("n", format!("the time-domain oracle is limited to N <= {ORACLE_MAX_SITES}")));
    }
    let ev = GreenEvaluator::new(params)?;
    let oracle = TimeDomainOracle::with_default_window(params, ORACLE_STEPS)?;
    let rel = |a: Complex64, b: Complex64| (a - b).norm() / b.norm().max(1e-12);
    let mut dev = Vec::new();
    for q in points(5, -2.0, 2.0, 0.15) {
        for ports in [PortPair::TRANSMISSION, PortPair::REFLECTION] {
            dev.push(rel(oracle.g2(q, ports)?, ev.g2_reduced(q, ports)));
        }
    }
    for (p1, p2, q1, q2) in shells(3) {
        for ports in PORT_SETS {
            dev.push(rel(oracle.g4_g1(p1, p2, q1, q2, ports)?, ev.g4_g1(p1, p2, q1, q2, ports)));
            dev.push(rel(oracle.g4_g2(p1, p2, q1, q2, ports)?, ev.g4_g2(p1, p2, q1, q2, ports)));
        }
    }
    Ok(SuiteReport::new("time_domain", &dev, 1e-3))
}

/// Closed-form wavepacket convolution against quadrature, and participation
/// ratios from resolvent residues against eigenvector components.
pub fn residue_quadrature(params: &LatticeParams) -> Result<(SuiteReport, SuiteReport)> {
    let ev = GreenEvaluator::new(params)?;
    let settings = QuadSettings { rel_tol: 1e-9, ..QuadSettings::default() };
    let mut rho = Vec::new();
    for (p1, p2, k1, k2) in shells(4) {
        for ports in PORT_SETS {
            let a = rho_conditional(p1, p2, k1, k2, params.sigma, ports, &ev);
            let b = rho_conditional_quadrature(p1, p2, k1, k2, params.sigma, ports, &ev, &settings)?;
            rho.push((a - b).abs() / a.abs().max(1e-300));
        }
    }
    let closed = eig_hermitian(&build_h2(params, &TwoParticleBasis::new(params.n))?)?;
    let mut pr = Vec::new();
    for alpha in 1..=closed.dim() {
        match pr_inverse_via_residues(alpha, &closed) {
            Ok(inverse) => pr.push((inverse * participation_ratio(alpha, &closed)?.r - 1.0).abs()),
            Err(Error::DegenerateEigenvalue { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok((SuiteReport::new("residue_quadrature", &rho, 1e-6), SuiteReport::new("pr_residues", &pr, 1e-10)))
}

/// Every suite for the given parameters.
pub fn run_all(params: &LatticeParams) -> Result<Vec<SuiteReport>> {
    let (one, two) = unitarity(params)?;
    let (rho, pr) = residue_quadrature(params)?;
    Ok(vec![u0_null(params)?, one, two, time_domain(params)?, rho, pr])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suites_pass_on_small_chains() {
        for p in [
            LatticeParams { n: 2, u: 3.0, h: 0.5, ..Default::default() },
            LatticeParams { n: 3, u: 0.0, h: 1.2, ..Default::default() },
        ] {
            for report in run_all(&p).unwrap() {
                assert!(report.passed, "{report:?}");
            }
        }
    }

    #[test]
    fn oracle_size_is_enforced() {
        assert!(time_domain(&LatticeParams::with_n(5)).is_err());
    }
}
