use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Rational function of one real momentum stored as simple poles with
/// residues plus a polynomial part.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReducedAmplitude {
    pub poles: Vec<(Complex64, Complex64)>,
    /// Polynomial coefficients, constant term first.
    pub polynomial: Vec<Complex64>,
}

/// Value of an integral over the real line together with the sum of the
/// absolute values of its terms, which bounds the cancellation it suffered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormIntegral {
    pub value: f64,
    pub magnitude: f64,
}

impl NormIntegral {
    /// Estimated relative rounding error.
    pub fn relative_rounding(&self) -> f64 {
        if self.value == 0.0 {
            if self.magnitude == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            64.0 * f64::EPSILON * self.magnitude / self.value.abs()
        }
    }
}

impl ReducedAmplitude {
    pub fn push(&mut self, pole: Complex64, residue: Complex64) {
        self.poles.push((pole, residue));
    }

    pub fn eval(&self, q: f64) -> Complex64 {
        let z = Complex64::new(q, 0.0);
        let poly = self.polynomial.iter().rev().fold(Complex64::default(), |acc, c| acc * z + c);
        poly + self.poles.iter().map(|(p, r)| r / (z - p)).sum::<Complex64>()
    }

    /// Integral of |f(q)|^2 over the real line by residues.
    ///
    /// For poles in the same half-plane, the integral of 1/((q - z_j)(q - conj z_k))
    /// is 2 pi i / (conj z_k - z_j) below the axis and 2 pi i / (z_j - conj z_k)
    /// above it; terms from opposite half-planes vanish.
    pub fn norm_sqr_integral(&self) -> Result<NormIntegral> {
        if self.polynomial.iter().any(|c| *c != Complex64::default()) {
            return Err(invalid("amplitude", "a polynomial part is not square integrable"));
        }
        if self.poles.iter().any(|(p, _)| p.im == 0.0) {
            return Err(invalid("amplitude", "pole on the real axis"));
        }
        let two_pi_i = Complex64::new(0.0, 2.0 * PI);
        let mut total = Complex64::default();
        let mut magnitude = 0.0;
        for (j, &(zj, rj)) in self.poles.iter().enumerate() {
            for (k, &(zk, rk)) in self.poles.iter().enumerate().skip(j) {
                if (zj.im < 0.0) != (zk.im < 0.0) {
                    continue;
                }
                let kernel = if zj.im < 0.0 { two_pi_i / (zk.conj() - zj) } else { two_pi_i / (zj - zk.conj()) };
                let term = rj * rk.conj() * kernel;
                if k == j {
                    total += term;
                    magnitude += term.norm();
                } else {
                    // The (k, j) term is the complex conjugate of the (j, k) term.
                    total += 2.0 * term.re;
                    magnitude += 2.0 * term.norm();
                }
            }
        }
        Ok(NormIntegral { value: total.re, magnitude })
    }
}

/// Precomputed kernel for integrals of |sum_j r_j / (q - z_j)|^2 whose poles
/// all lie at fixed `nodes` in the lower half-plane, or all at P - nodes in
/// the upper half-plane for some real P.
#[derive(Debug, Clone)]
pub struct PoleKernel {
    dim: usize,
    /// Row-major 2 pi i / (conj(z_k) - z_j).
    kernel: Vec<Complex64>,
}

impl PoleKernel {
    pub fn new(nodes: &[Complex64]) -> Result<Self> {
        if nodes.iter().any(|z| !(z.im < 0.0)) {
            return Err(invalid("nodes", "kernel nodes must lie strictly below the real axis"));
        }
        let two_pi_i = Complex64::new(0.0, 2.0 * PI);
        let dim = nodes.len();
        let mut kernel = Vec::with_capacity(dim * dim);
        for zj in nodes {
            for zk in nodes {
                kernel.push(two_pi_i / (zk.conj() - zj));
            }
        }
        Ok(Self { dim, kernel })
    }

    /// Integral contribution of residues `r` attached to the kernel nodes (or
    /// to their mirrored upper-half-plane positions).
    pub fn quadratic(&self, r: &[Complex64]) -> NormIntegral {
        assert_eq!(r.len(), self.dim);
        let mut value = 0.0;
        let mut magnitude = 0.0;
        for (j, rj) in r.iter().enumerate() {
            let row = &self.kernel[j * self.dim..(j + 1) * self.dim];
            let mut acc = Complex64::default();
            for (k, rk) in r.iter().enumerate() {
                acc += row[k] * rk.conj();
            }
            let term = rj * acc;
            value += term.re;
            magnitude += term.re.abs() + term.im.abs();
        }
        NormIntegral { value, magnitude }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_real_line, QuadSettings};

    #[test]
    fn single_lorentzian() {
        let mut f = ReducedAmplitude::default();
        f.push(Complex64::new(0.3, -0.2), Complex64::new(1.0, 0.0));
        let n = f.norm_sqr_integral().unwrap();
        assert!((n.value - PI / 0.2).abs() < 1e-12);
    }

    #[test]
    fn matches_quadrature_for_mixed_half_planes() {
        let mut f = ReducedAmplitude::default();
        f.push(Complex64::new(0.3, -0.2), Complex64::new(1.0, 0.5));
        f.push(Complex64::new(-0.1, -0.05), Complex64::new(-0.3, 0.2));
        f.push(Complex64::new(0.7, 0.1), Complex64::new(0.2, -1.0));
        f.push(Complex64::new(0.0, 0.3), Complex64::new(0.4, 0.4));
        let exact = f.norm_sqr_integral().unwrap().value;
        let settings = QuadSettings { rel_tol: 1e-12, abs_tol: 0.0, max_subdivisions: 5000 };
        let num = integrate_real_line(|q| Ok(f.eval(q).norm_sqr()), &[-0.1, 0.0, 0.3, 0.7], 1.0, &settings).unwrap();
        assert!((exact - num.value).abs() < 1e-10 * exact, "{exact} {}", num.value);
    }

    #[test]
    fn kernel_matches_general_integral() {
        let nodes = [Complex64::new(0.1, -0.3), Complex64::new(-0.4, -0.02), Complex64::new(0.5, -1.0)];
        let lower = [Complex64::new(1.0, 0.2), Complex64::new(-0.3, 0.0), Complex64::new(0.1, 0.9)];
        let upper = [Complex64::new(0.4, -0.1), Complex64::new(0.0, 0.3), Complex64::new(-0.2, -0.2)];
        let total = 0.7;
        let mut f = ReducedAmplitude::default();
        for j in 0..3 {
            f.push(nodes[j], lower[j]);
            f.push(total - nodes[j], upper[j]);
        }
        let k = PoleKernel::new(&nodes).unwrap();
        let split = k.quadratic(&lower).value + k.quadratic(&upper).value;
        let full = f.norm_sqr_integral().unwrap().value;
        assert!((split - full).abs() < 1e-12 * full);
    }
}
