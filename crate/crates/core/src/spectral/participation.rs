use std::f64::consts::PI;

use num_complex::Complex64;

use super::hermitian::HermitianSpectrum;
use crate::error::{invalid, Error, Result};

/// Participation ratio R and its normalized logarithm log_{d2} R.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticipationRatio {
    pub r: f64,
    pub log_d2: f64,
}

impl ParticipationRatio {
    fn from_inverse(inverse: f64, dim: usize) -> Self {
        let r = 1.0 / inverse;
        let log_d2 = if dim > 1 { r.ln() / (dim as f64).ln() } else { 0.0 };
        Self { r, log_d2 }
    }
}

/// Participation ratio of an arbitrary normalized amplitude vector.
pub fn participation_ratio_of(vector: &[f64]) -> ParticipationRatio {
    let inverse: f64 = vector.iter().map(|c| c.powi(4)).sum();
    ParticipationRatio::from_inverse(inverse, vector.len())
}

fn check_alpha(alpha: usize, spectrum: &HermitianSpectrum) -> Result<()> {
    if alpha == 0 || alpha > spectrum.dim() {
        return Err(invalid("alpha", format!("{alpha} outside 1..={}", spectrum.dim())));
    }
    Ok(())
}

/// R(alpha) = 1 / sum_k |c_k^alpha|^4 for the 1-based eigenstate `alpha`.
pub fn participation_ratio(alpha: usize, spectrum: &HermitianSpectrum) -> Result<ParticipationRatio> {
    check_alpha(alpha, spectrum)?;
    let col: Vec<f64> = spectrum.vectors.column(alpha - 1).iter().copied().collect();
    Ok(participation_ratio_of(&col))
}

const CONTOUR_POINTS: usize = 64;

/// Inverse participation ratio 1/R recovered from the residues of the diagonal resolvent
/// elements <k|G(E)|k> at E = E_alpha.
///
/// Each residue is a contour integral on a circle of half the distance to the
/// nearest other eigenvalue, evaluated with the trapezoidal rule, which
/// converges geometrically for this meromorphic integrand.
pub fn pr_inverse_via_residues(alpha: usize, spectrum: &HermitianSpectrum) -> Result<f64> {
    check_alpha(alpha, spectrum)?;
    let e_alpha = spectrum.values[alpha - 1];
    let norm = spectrum.values.iter().map(|e| e.abs()).fold(0.0, f64::max).max(1.0);
    let gap = spectrum
        .values
        .iter()
        .enumerate()
        .filter(|&(b, _)| b != alpha - 1)
        .map(|(_, e)| (e - e_alpha).abs())
        .fold(f64::INFINITY, f64::min);
    if gap < 1e-9 * norm {
        return Err(Error::DegenerateEigenvalue { alpha, gap });
    }
    let radius = if gap.is_finite() { 0.5 * gap } else { 1.0 };
    let nodes: Vec<Complex64> = (0..CONTOUR_POINTS)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / CONTOUR_POINTS as f64))
        .collect();
    let d = spectrum.dim();
    let mut inverse = 0.0;
    for k in 0..d {
        let weights: Vec<f64> = (0..d).map(|b| spectrum.vectors[(k, b)].powi(2)).collect();
        let mut residue = Complex64::default();
        for &dz in &nodes {
            let z = e_alpha + dz;
            let g: Complex64 = weights.iter().zip(&spectrum.values).map(|(w, e)| *w / (z - e)).sum();
            residue += g * dz;
        }
        residue /= CONTOUR_POINTS as f64;
        inverse += residue.norm_sqr();
    }
    Ok(inverse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_h2, TwoParticleBasis};
    use crate::params::LatticeParams;
    use crate::spectral::eig_hermitian;

    #[test]
    fn equal_weight_vector() {
        let d = 10;
        let v = vec![(1.0 / d as f64).sqrt(); d];
        let pr = participation_ratio_of(&v);
        assert!((pr.r - d as f64).abs() < 1e-12);
        assert!((pr.log_d2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decoupled_sites_are_fock_states() {
        let p = LatticeParams { n: 4, j: 0.0, u: 0.37, h: 1.0, ..Default::default() };
        let s = eig_hermitian(&build_h2(&p, &TwoParticleBasis::new(4)).unwrap()).unwrap();
        for alpha in 1..=s.dim() {
            let pr = participation_ratio(alpha, &s).unwrap();
            assert!((pr.r - 1.0).abs() < 1e-14 && pr.log_d2.abs() < 1e-14);
            assert!((pr_inverse_via_residues(alpha, &s).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_state_is_rejected() {
        let p = LatticeParams { n: 3, u: 0.0, ..Default::default() };
        let s = eig_hermitian(&build_h2(&p, &TwoParticleBasis::new(3)).unwrap()).unwrap();
        // Free bosons on a symmetric chain have the degenerate pair sums
        // E1 + E3 = 2 E2 = 0.
        let zero = s.values.iter().position(|e| e.abs() < 1e-12).unwrap() + 1;
        assert!(matches!(pr_inverse_via_residues(zero, &s), Err(Error::DegenerateEigenvalue { .. })));
    }

    #[test]
    fn residues_reproduce_inverse_ratio() {
        let p = LatticeParams { n: 4, u: 2.3, h: 0.7, ..Default::default() };
        let s = eig_hermitian(&build_h2(&p, &TwoParticleBasis::new(4)).unwrap()).unwrap();
        for alpha in 1..=s.dim() {
            let r = participation_ratio(alpha, &s).unwrap().r;
            assert!((pr_inverse_via_residues(alpha, &s).unwrap() * r - 1.0).abs() < 1e-10);
        }
    }
}
