use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{Sector, SectorHamiltonian};
use crate::params::GOLDEN_RATIO_CONJUGATE;

/// Largest accepted condition number of the right-eigenvector matrix.
pub const MAX_CONDITION: f64 = 1e8;

/// Complex eigenvalues of a complex-symmetric Hamiltonian with biorthonormal
/// right and left eigenvectors.
///
/// Column `a` of `right` is the right eigenvector of `values[a]`; row `a` of
/// `left` is the matching left eigenvector, equal to the plain transpose of the
/// right one, so that `left * right` is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct BiorthogonalSpectrum {
    pub sector: Sector,
    pub values: Vec<Complex64>,
    pub right: DMatrix<Complex64>,
    pub left: DMatrix<Complex64>,
    pub condition: f64,
}

impl BiorthogonalSpectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

fn bilinear(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Eigenvectors of an upper-triangular matrix by back-substitution.
fn triangular_eigenvectors(t: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let d = t.nrows();
    let tnorm = t.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let small = f64::EPSILON * tnorm;
    let mut y = DMatrix::zeros(d, d);
    for k in 0..d {
        let lambda = t[(k, k)];
        y[(k, k)] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut acc = Complex64::default();
            for j in i + 1..=k {
                acc += t[(i, j)] * y[(j, k)];
            }
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < small {
                denom = Complex64::new(small, 0.0);
            }
            y[(i, k)] = -acc / denom;
        }
    }
    y
}

/// Complex Schur form H = Q T Q^H. QR iterations can stall on mirror-symmetric
/// chains; a fixed Householder similarity changes the Hessenberg form and is
/// tried before giving up.
fn schur(m: &DMatrix<Complex64>) -> Option<(DMatrix<Complex64>, DMatrix<Complex64>)> {
    let d = m.nrows();
    let iters = 1000 * d.max(1);
    if let Some(s) = Schur::try_new(m.clone(), f64::EPSILON, iters) {
        return Some(s.unpack());
    }
    let w = DVector::from_fn(d, |k, _| Complex64::new(1.0 + (k as f64 * GOLDEN_RATIO_CONJUGATE).fract(), 0.0));
    let h = DMatrix::<Complex64>::identity(d, d) - (&w * w.adjoint()) * Complex64::from(2.0 / w.norm_squared());
    let (q, t) = Schur::try_new(&h * m * &h, f64::EPSILON, iters)?.unpack();
    Some((h * q, t))
}

/// Diagonalizes a complex-symmetric (generally non-Hermitian) Hamiltonian.
///
/// Eigenvectors are normalized with the unconjugated bilinear form
/// v^T v = 1; near-degenerate clusters are re-orthogonalized in that form.
pub fn eig_biorthogonal(ham: &SectorHamiltonian) -> Result<BiorthogonalSpectrum> {
    let d = ham.dim();
    let scale = ham.scale().max(f64::MIN_POSITIVE);
    let asym = (&ham.matrix - ham.matrix.transpose()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if asym > 1e-12 * scale {
        return Err(Error::StructureMismatch { expected: "complex symmetric", deviation: asym });
    }
    let (q, t) = schur(&ham.matrix).ok_or(Error::ConvergenceFailure("complex Schur decomposition"))?;
    let raw = &q * triangular_eigenvectors(&t);

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (t[(a, a)], t[(b, b)]);
        x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
    });
    let values: Vec<Complex64> = order.iter().map(|&k| t[(k, k)]).collect();
    let mut cols: Vec<Vec<Complex64>> =
        order.iter().map(|&k| raw.column(k).iter().copied().collect()).collect();

    let cluster_tol = 1e-9 * scale;
    for a in 0..d {
        for b in 0..a {
            if (values[a] - values[b]).norm() < cluster_tol {
                let overlap = bilinear(&cols[b], &cols[a]);
                let (head, tail) = cols.split_at_mut(a);
                for (x, y) in tail[0].iter_mut().zip(&head[b]) {
                    *x -= overlap * y;
                }
            }
        }
        let euclid: f64 = cols[a].iter().map(|z| z.norm_sqr()).sum();
        let self_overlap = bilinear(&cols[a], &cols[a]);
        if self_overlap.norm() < 1e-14 * euclid {
            return Err(Error::NearDefective { condition: f64::INFINITY });
        }
        let inv = 1.0 / self_overlap.sqrt();
        for x in cols[a].iter_mut() {
            *x *= inv;
        }
    }
    let right = DMatrix::from_fn(d, d, |r, c| cols[c][r]);
    let sv = right.clone().svd(false, false).singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > MAX_CONDITION {
        return Err(Error::NearDefective { condition });
    }
    let left = right.transpose();
    Ok(BiorthogonalSpectrum { sector: ham.sector, values, right, left, condition })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_effective, build_h2, TwoParticleBasis};
    use crate::params::LatticeParams;
    use crate::spectral::eig_hermitian;

    fn max_dev_from_identity(m: &DMatrix<Complex64>) -> f64 {
        let mut dev: f64 = 0.0;
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let want = if r == c { 1.0 } else { 0.0 };
                dev = dev.max((m[(r, c)] - want).norm());
            }
        }
        dev
    }

    #[test]
    fn single_site() {
        let p = LatticeParams { n: 1, h: 0.4, ..Default::default() };
        let s = eig_biorthogonal(&build_effective(&p, Sector::One, false).unwrap()).unwrap();
        assert!((s.values[0] - Complex64::new(p.onsite(1), -p.kappa)).norm() < 1e-15);
        assert!((s.right[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_site_pair() {
        let p = LatticeParams::with_n(2);
        let s = eig_biorthogonal(&build_effective(&p, Sector::One, false).unwrap()).unwrap();
        assert!((s.values[0] - Complex64::new(-1.0, -0.125)).norm() < 1e-14);
        assert!((s.values[1] - Complex64::new(1.0, -0.125)).norm() < 1e-14);
    }

    #[test]
    fn biorthonormal_and_reconstructs() {
        let p = LatticeParams { n: 6, u: 2.5, h: 1.7, gamma: 0.05, ..Default::default() };
        for sector in [Sector::One, Sector::Two] {
            let h = build_effective(&p, sector, true).unwrap();
            let s = eig_biorthogonal(&h).unwrap();
            assert!(max_dev_from_identity(&(&s.left * &s.right)) < 1e-10);
            let lam = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(s.values.clone()));
            let rec = &s.right * lam * &s.left;
            let err = (&rec - &h.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err < 1e-10, "{err}");
            let bound = p.kappa * sector.particles() as f64 + p.gamma * sector.particles() as f64;
            for v in &s.values {
                assert!(v.im <= 1e-14 && v.im >= -bound - 1e-12);
            }
        }
    }

    #[test]
    fn weak_coupling_approaches_closed_spectrum() {
        let p = LatticeParams { n: 5, u: 1.0, h: 0.9, kappa: 1e-6, ..Default::default() };
        let open = eig_biorthogonal(&build_effective(&p, Sector::Two, false).unwrap()).unwrap();
        let closed = eig_hermitian(&build_h2(&p, &TwoParticleBasis::new(5)).unwrap()).unwrap();
        for (a, b) in open.values.iter().zip(&closed.values) {
            assert!((a.re - b).abs() < 1e-6 && a.im.abs() < 1e-6);
        }
    }

    #[test]
    fn rejects_non_symmetric() {
        let mut h = build_effective(&LatticeParams::with_n(3), Sector::One, false).unwrap();
        h.matrix[(0, 1)] = Complex64::new(2.0, 0.0);
        assert!(matches!(eig_biorthogonal(&h), Err(Error::StructureMismatch { .. })));
    }

    #[test]
    fn mirror_symmetric_chain_converges() {
        let p = LatticeParams { n: 3, ..Default::default() };
        let ham = build_effective(&p, Sector::One, true).unwrap();
        let spec = eig_biorthogonal(&ham).unwrap();
        assert!(max_dev_from_identity(&(&spec.left * &spec.right)) < 1e-12);
        let recon = &spec.right * DMatrix::from_diagonal(&DVector::from_vec(spec.values.clone())) * &spec.left;
        assert!((recon - &ham.matrix).iter().all(|z| z.norm() < 1e-12));
    }
}
