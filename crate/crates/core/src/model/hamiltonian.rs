use nalgebra::DMatrix;
use num_complex::Complex64;

use super::basis::{creation_matrix, Sector, TwoParticleBasis};
use crate::error::Result;
use crate::params::LatticeParams;

/// Dense Hamiltonian restricted to one particle-number sector.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorHamiltonian {
    pub sector: Sector,
    pub matrix: DMatrix<Complex64>,
    pub hermitian: bool,
}

impl SectorHamiltonian {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Largest absolute entry, used as the scale for relative tolerances.
    pub fn scale(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Tridiagonal one-particle Hamiltonian with diagonal eps_j and hopping J.
pub fn build_h1(params: &LatticeParams) -> Result<SectorHamiltonian> {
    params.validate()?;
    let n = params.n;
    let eps = params.onsite_energies();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = eps[i].into();
        if i + 1 < n {
            m[(i, i + 1)] = params.j.into();
            m[(i + 1, i)] = params.j.into();
        }
    }
    Ok(SectorHamiltonian { sector: Sector::One, matrix: m, hermitian: true })
}

/// Two-particle Bose-Hubbard Hamiltonian in the ordered Fock basis.
pub fn build_h2(params: &LatticeParams, basis: &TwoParticleBasis) -> Result<SectorHamiltonian> {
    params.validate()?;
    let n = params.n;
    assert_eq!(basis.n(), n, "basis built for a different chain length");
    let eps = params.onsite_energies();
    let d2 = basis.d2();
    let mut real = DMatrix::<f64>::zeros(d2, d2);
    for (k, &(i, j)) in basis.states().iter().enumerate() {
        real[(k, k)] = eps[i - 1] + eps[j - 1] + if i == j { params.u } else { 0.0 };
    }
    if n > 1 {
        // a_x^dagger a_y in the two-particle sector is C_x C_y^T with C the 1->2 creation map.
        let c: Vec<DMatrix<f64>> = (1..=n).map(|s| creation_matrix(n, s, Sector::One)).collect();
        for x in 0..n - 1 {
            let hop = &c[x] * c[x + 1].transpose();
            real += (&hop + hop.transpose()) * params.j;
        }
    }
    Ok(SectorHamiltonian { sector: Sector::Two, matrix: real.map(Complex64::from), hermitian: true })
}

/// Effective non-Hermitian Hamiltonian H - i(kappa/2)(n_1 + n_N), optionally
/// with the uniform loss -i(gamma/2) M.
pub fn build_effective(params: &LatticeParams, sector: Sector, include_loss: bool) -> Result<SectorHamiltonian> {
    let mut ham = match sector {
        Sector::One => build_h1(params)?,
        Sector::Two => build_h2(params, &TwoParticleBasis::new(params.n))?,
        Sector::Vacuum => {
            params.validate()?;
            return Ok(SectorHamiltonian {
                sector,
                matrix: DMatrix::zeros(1, 1),
                hermitian: true,
            });
        }
    };
    let n = params.n;
    let basis = TwoParticleBasis::new(n);
    let occupation = |k: usize, site: usize| -> f64 {
        match sector {
            Sector::One => (k + 1 == site) as u8 as f64,
            _ => {
                let (i, j) = basis.states()[k];
                (i == site) as u8 as f64 + (j == site) as u8 as f64
            }
        }
    };
    let loss = if include_loss { 0.5 * params.gamma * sector.particles() as f64 } else { 0.0 };
    for k in 0..ham.dim() {
        let ports = occupation(k, 1) + occupation(k, n);
        ham.matrix[(k, k)] -= Complex64::new(0.0, 0.5 * params.kappa * ports + loss);
    }
    ham.hermitian = params.kappa == 0.0 && loss == 0.0;
    Ok(ham)
}
