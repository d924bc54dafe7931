use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Particle-number sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sector {
    Vacuum,
    One,
    Two,
}

impl Sector {
    pub fn particles(self) -> usize {
        match self {
            Sector::Vacuum => 0,
            Sector::One => 1,
            Sector::Two => 2,
        }
    }

    /// Dimension C(N+M-1, M) of the sector on an `n`-site chain.
    pub fn dim(self, n: usize) -> usize {
        match self {
            Sector::Vacuum => 1,
            Sector::One => n,
            Sector::Two => n * (n + 1) / 2,
        }
    }
}

/// Ordered two-boson Fock states |i,j> with 1 <= i <= j <= N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoParticleBasis {
    n: usize,
    states: Vec<(usize, usize)>,
}

impl TwoParticleBasis {
    pub fn new(n: usize) -> Self {
        let mut states = Vec::with_capacity(n * (n + 1) / 2);
        for i in 1..=n {
            for j in i..=n {
                states.push((i, j));
            }
        }
        Self { n, states }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d2(&self) -> usize {
        self.states.len()
    }

    /// 1-based site pairs in lexicographic order.
    pub fn states(&self) -> &[(usize, usize)] {
        &self.states
    }

    /// Linear index of |i,j>; the pair may be given in either order.
    pub fn index_of(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        assert!(i >= 1 && j <= self.n, "site pair ({i},{j}) outside 1..={}", self.n);
        (i - 1) * (self.n + 1) - (i - 1) * i / 2 + (j - i)
    }

    /// Normalization 1/sqrt(1 + delta_ij) of the state at `index`.
    pub fn norm(&self, index: usize) -> f64 {
        let (i, j) = self.states[index];
        if i == j {
            std::f64::consts::FRAC_1_SQRT_2
        } else {
            1.0
        }
    }
}

/// Matrix of the creation operator a_site^dagger from sector `from` to the next sector.
///
/// Entries are real: a_j^dagger |0> = |j> and a_j^dagger |m> = sqrt(1 + delta_jm) |min, max>.
pub fn creation_matrix(n: usize, site: usize, from: Sector) -> DMatrix<f64> {
    assert!((1..=n).contains(&site), "site {site} outside 1..={n}");
    match from {
        Sector::Vacuum => {
            let mut m = DMatrix::zeros(n, 1);
            m[(site - 1, 0)] = 1.0;
            m
        }
        Sector::One => {
            let basis = TwoParticleBasis::new(n);
            let mut m = DMatrix::zeros(basis.d2(), n);
            for other in 1..=n {
                let amp = if other == site { std::f64::consts::SQRT_2 } else { 1.0 };
                m[(basis.index_of(site, other), other - 1)] = amp;
            }
            m
        }
        Sector::Two => panic!("three-particle sector is not supported"),
    }
}

/// Applies a_site^dagger to a vector in sector `from` (vacuum or one particle).
pub fn apply_creation(n: usize, site: usize, from: Sector, vector: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(vector.len(), from.dim(n), "vector length does not match sector");
    let m = creation_matrix(n, site, from);
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| vector[c] * m[(r, c)]).sum())
        .collect()
}

/// Applies a_site, the adjoint of [`apply_creation`], to a vector in the sector above `to`.
pub fn apply_annihilation(n: usize, site: usize, to: Sector, vector: &[Complex64]) -> Vec<Complex64> {
    let m = creation_matrix(n, site, to);
    assert_eq!(vector.len(), m.nrows(), "vector length does not match sector");
    (0..m.ncols())
        .map(|c| (0..m.nrows()).map(|r| vector[r] * m[(r, c)]).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_order_and_index() {
        let b = TwoParticleBasis::new(3);
        assert_eq!(b.states(), &[(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]);
        for (k, &(i, j)) in b.states().iter().enumerate() {
            assert_eq!(b.index_of(i, j), k);
            assert_eq!(b.index_of(j, i), k);
        }
        assert_eq!(TwoParticleBasis::new(15).d2(), 120);
    }

    #[test]
    fn creation_examples() {
        let one = Complex64::new(1.0, 0.0);
        let v = apply_creation(2, 1, Sector::Vacuum, &[one]);
        assert_eq!(v, vec![one, Complex64::default()]);
        let v = apply_creation(2, 1, Sector::One, &[one, Complex64::default()]);
        assert!((v[0].re - 2f64.sqrt()).abs() < 1e-15 && v[1].norm() == 0.0 && v[2].norm() == 0.0);
        let v = apply_creation(2, 1, Sector::One, &[Complex64::default(), one]);
        assert_eq!(v[1], one);
    }

    #[test]
    fn norm_factors() {
        let b = TwoParticleBasis::new(2);
        assert!((b.norm(0) - 0.5f64.sqrt()).abs() < 1e-16);
        assert_eq!(b.norm(1), 1.0);
    }
}
