use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::model::{Sector, SectorHamiltonian};

/// Real eigenvalues in ascending order with orthonormal eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianSpectrum {
    pub sector: Sector,
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl HermitianSpectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Chain length implied by the sector dimension.
    pub fn sites(&self) -> usize {
        match self.sector {
            Sector::Two => ((((8 * self.dim() + 1) as f64).sqrt() as usize) - 1) / 2,
            _ => self.dim(),
        }
    }
}

/// Diagonalizes a Hermitian sector Hamiltonian. All builders in this crate
/// produce real symmetric closed Hamiltonians, so the solve is done in real
/// arithmetic.
pub fn eig_hermitian(ham: &SectorHamiltonian) -> Result<HermitianSpectrum> {
    let d = ham.dim();
    let scale = ham.scale().max(f64::MIN_POSITIVE);
    let mut asym: f64 = 0.0;
    let mut imag: f64 = 0.0;
    for r in 0..d {
        for c in 0..d {
            asym = asym.max((ham.matrix[(r, c)] - ham.matrix[(c, r)].conj()).norm());
            imag = imag.max(ham.matrix[(r, c)].im.abs());
        }
    }
    if !ham.hermitian || asym > 1e-12 * scale {
        return Err(Error::StructureMismatch { expected: "Hermitian", deviation: asym });
    }
    if imag > 1e-12 * scale {
        return Err(Error::StructureMismatch { expected: "real symmetric", deviation: imag });
    }
    let real = ham.matrix.map(|z| z.re);
    let eig = SymmetricEigen::try_new(real, f64::EPSILON, 1000 * d.max(1))
        .ok_or(Error::ConvergenceFailure("symmetric QR iteration"))?;
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::zeros(d, d);
    for (col, &k) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(k).into_owned();
        // Fix the column sign so the largest component is positive.
        let lead = v.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        if lead < 0.0 {
            v.neg_mut();
        }
        vectors.set_column(col, &v);
    }
    Ok(HermitianSpectrum { sector: ham.sector, values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_effective, build_h1, build_h2, TwoParticleBasis};
    use crate::params::LatticeParams;

    #[test]
    fn two_site_one_particle() {
        let s = eig_hermitian(&build_h1(&LatticeParams::with_n(2)).unwrap()).unwrap();
        assert!((s.values[0] + 1.0).abs() < 1e-14 && (s.values[1] - 1.0).abs() < 1e-14);
        let r = 0.5f64.sqrt();
        assert!((s.vectors[(0, 0)].abs() - r).abs() < 1e-14);
        assert!((s.vectors[(0, 0)] + s.vectors[(1, 0)]).abs() < 1e-14);
    }

    #[test]
    fn two_site_two_particle_free() {
        let p = LatticeParams::with_n(2);
        let s = eig_hermitian(&build_h2(&p, &TwoParticleBasis::new(2)).unwrap()).unwrap();
        for (v, e) in s.values.iter().zip([-2.0, 0.0, 2.0]) {
            assert!((v - e).abs() < 1e-13);
        }
        assert_eq!(s.sites(), 2);
    }

    #[test]
    fn open_chain_plane_waves() {
        let s = eig_hermitian(&build_h1(&LatticeParams::with_n(15)).unwrap()).unwrap();
        let mut exact: Vec<f64> = (1..=15).map(|m| 2.0 * (std::f64::consts::PI * m as f64 / 16.0).cos()).collect();
        exact.sort_by(f64::total_cmp);
        for (v, e) in s.values.iter().zip(exact) {
            assert!((v - e).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_open_hamiltonian() {
        let h = build_effective(&LatticeParams::with_n(3), Sector::One, false).unwrap();
        assert!(matches!(eig_hermitian(&h), Err(Error::StructureMismatch { .. })));
    }

    #[test]
    fn sites_from_two_particle_dimension() {
        for n in 1..=20 {
            let p = LatticeParams::with_n(n);
            let s = eig_hermitian(&build_h2(&p, &TwoParticleBasis::new(n)).unwrap()).unwrap();
            assert_eq!(s.sites(), n);
        }
    }
}
