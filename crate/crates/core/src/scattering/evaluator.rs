use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::ports::{PortPair, TwoPhotonPorts, Waveguide};
use crate::error::{invalid, Result};
use crate::model::{build_effective, creation_matrix, Sector};
use crate::params::LatticeParams;
use crate::spectral::{eig_biorthogonal, BiorthogonalSpectrum};

/// One-photon S-matrix element split into its identity part and the smooth
/// Green's-function part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct S1Element {
    /// 1 for reflection (the unscattered photon), 0 for transmission.
    pub identity_coeff: u8,
    pub smooth: Complex64,
}

impl S1Element {
    pub fn value(&self) -> Complex64 {
        self.smooth + f64::from(self.identity_coeff)
    }
}

/// Biorthogonal spectra of the effective Hamiltonian and the coupling chains
/// needed by every scattering amplitude, built once per parameter set.
#[derive(Debug, Clone)]
pub struct GreenEvaluator {
    params: LatticeParams,
    one: BiorthogonalSpectrum,
    two: BiorthogonalSpectrum,
    /// Eigenvalues with imaginary parts kept strictly negative.
    xi1: Vec<Complex64>,
    xi2: Vec<Complex64>,
    /// <0|a_w|xi_mu> = <xi_mu bar|a_w^dagger|0> for each waveguide w.
    amp: [Vec<Complex64>; 2],
    /// <xi_beta bar|a_w^dagger|xi_mu><xi_mu bar|a_w^dagger|0>, d2 x d1.
    absorb: [DMatrix<Complex64>; 2],
    /// <xi_nu bar|a_w|xi_beta>, d1 x d2.
    emit: [DMatrix<Complex64>; 2],
}

fn complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(Complex64::from)
}

impl GreenEvaluator {
    pub fn new(params: &LatticeParams) -> Result<Self> {
        params.validate()?;
        if params.kappa <= 0.0 {
            return Err(invalid("kappa", "scattering needs a positive waveguide coupling"));
        }
        let one = eig_biorthogonal(&build_effective(params, Sector::One, true)?)?;
        let two = eig_biorthogonal(&build_effective(params, Sector::Two, true)?)?;
        let n = params.n;
        let d1 = one.dim();
        let mk = |w: Waveguide| {
            let site = w.site(n) - 1;
            let amp: Vec<Complex64> = (0..d1).map(|mu| one.right[(site, mu)]).collect();
            let c = complex(&creation_matrix(n, w.site(n), Sector::One));
            let mut absorb = &two.left * &c * &one.right;
            for mu in 0..d1 {
                let a = amp[mu];
                for b in 0..absorb.nrows() {
                    absorb[(b, mu)] *= a;
                }
            }
            let emit = &one.left * c.transpose() * &two.right;
            (amp, absorb, emit)
        };
        let (a1, b1, e1) = mk(Waveguide::W1);
        let (an, bn, en) = mk(Waveguide::WN);
        // States with no weight on the coupled sites have Im xi = 0 up to
        // rounding; their residues vanish, so a tiny floor only keeps the
        // pole arithmetic finite.
        let floor = |values: &[Complex64]| {
            let scale = values.iter().map(|z| z.norm()).fold(1.0, f64::max);
            let eps = 1e-13 * scale;
            values.iter().map(|z| Complex64::new(z.re, z.im.min(-eps))).collect::<Vec<_>>()
        };
        let xi1 = floor(&one.values);
        let xi2 = floor(&two.values);
        Ok(Self { params: params.clone(), one, two, xi1, xi2, amp: [a1, an], absorb: [b1, bn], emit: [e1, en] })
    }

    pub fn params(&self) -> &LatticeParams {
        &self.params
    }

    pub fn one_photon(&self) -> &BiorthogonalSpectrum {
        &self.one
    }

    pub fn two_photon(&self) -> &BiorthogonalSpectrum {
        &self.two
    }

    pub fn kappa(&self) -> f64 {
        self.params.kappa
    }

    /// xi_mu^(1), the one-photon poles.
    pub fn poles1(&self) -> &[Complex64] {
        &self.xi1
    }

    /// xi_beta^(2), the two-photon poles.
    pub fn poles2(&self) -> &[Complex64] {
        &self.xi2
    }


    /// t_mu = <0|a_out|xi_mu><xi_mu bar|a_in^dagger|0>.
    pub fn t(&self, output: Waveguide, input: Waveguide) -> Vec<Complex64> {
        let (o, i) = (&self.amp[output.slot()], &self.amp[input.slot()]);
        o.iter().zip(i).map(|(a, b)| a * b).collect()
    }

    /// sum_mu t_mu / (x - xi_mu) for complex x.
    pub fn g_tilde(&self, output: Waveguide, input: Waveguide, x: Complex64) -> Complex64 {
        let (o, i) = (&self.amp[output.slot()], &self.amp[input.slot()]);
        let mut acc = Complex64::default();
        for mu in 0..self.one.dim() {
            acc += o[mu] * i[mu] / (x - self.xi1[mu]);
        }
        acc
    }

    /// sum_mu t_mu / ((x - xi_mu)(y - xi_mu)).
    pub fn g_tilde_pair(&self, output: Waveguide, input: Waveguide, x: Complex64, y: Complex64) -> Complex64 {
        let (o, i) = (&self.amp[output.slot()], &self.amp[input.slot()]);
        let mut acc = Complex64::default();
        for mu in 0..self.one.dim() {
            let xi = self.xi1[mu];
            acc += o[mu] * i[mu] / ((x - xi) * (y - xi));
        }
        acc
    }

    /// Two-point Green's function with the momentum delta stripped.
    pub fn g2_reduced(&self, q: f64, ports: PortPair) -> Complex64 {
        Complex64::new(0.0, -self.kappa()) * self.g_tilde(ports.output, ports.input, q.into())
    }

    /// One-photon S-matrix element, analytically continued to complex momentum.
    pub(crate) fn s1_at(&self, output: Waveguide, input: Waveguide, x: Complex64) -> Complex64 {
        let id = if output == input { 1.0 } else { 0.0 };
        Complex64::new(0.0, -self.kappa()) * self.g_tilde(output, input, x) + id
    }

    pub fn s1_element(&self, q: f64, ports: PortPair) -> S1Element {
        S1Element { identity_coeff: ports.is_reflection() as u8, smooth: self.g2_reduced(q, ports) }
    }

    /// Absorbs the second photon into the one-photon coefficients `c` and
    /// propagates at total energy `total`: w_beta = sum_mu absorb_{beta mu} c_mu / (total - xi_beta).
    pub(crate) fn absorb(&self, input: Waveguide, total: Complex64, c: &[Complex64]) -> Vec<Complex64> {
        let m = &self.absorb[input.slot()];
        let mut w = vec![Complex64::default(); self.two.dim()];
        for mu in 0..self.one.dim() {
            let cm = c[mu];
            if cm == Complex64::default() {
                continue;
            }
            let col = m.column(mu);
            for (wb, x) in w.iter_mut().zip(col.iter()) {
                *wb += x * cm;
            }
        }
        for (wb, xi) in w.iter_mut().zip(&self.xi2) {
            *wb /= total - xi;
        }
        w
    }

    /// Emits the photon at waveguide `early` from the two-photon state `w`;
    /// the remaining photon later leaves at `late`.
    pub(crate) fn emit(&self, early: Waveguide, late: Waveguide, w: &[Complex64]) -> Vec<Complex64> {
        let m = &self.emit[early.slot()];
        let o = &self.amp[late.slot()];
        let mut v = vec![Complex64::default(); self.one.dim()];
        for (beta, wb) in w.iter().enumerate() {
            let col = m.column(beta);
            for (vn, x) in v.iter_mut().zip(col.iter()) {
                *vn += x * wb;
            }
        }
        for (vn, on) in v.iter_mut().zip(o) {
            *vn *= on;
        }
        v
    }

    /// Matrix M_{nu mu} = sum_beta amp_late[nu] emit_early[nu, beta] absorb[beta, mu] / (total - xi_beta),
    /// the two-photon chain collapsed at fixed total energy.
    pub fn collapsed(&self, early: Waveguide, late: Waveguide, input: Waveguide, total: Complex64) -> DMatrix<Complex64> {
        let d1 = self.one.dim();
        let mut m = DMatrix::zeros(d1, d1);
        let mut unit = vec![Complex64::default(); d1];
        for mu in 0..d1 {
            unit[mu] = Complex64::new(1.0, 0.0);
            let w = self.absorb(input, total, &unit);
            let v = self.emit(early, late, &w);
            m.set_column(mu, &nalgebra::DVector::from_vec(v));
            unit[mu] = Complex64::default();
        }
        m
    }

    /// Element W_{nu beta mu} of the two-photon coupling chain for photons
    /// absorbed from `ports.input` and both emitted into `ports.output`.
    pub fn w_element(&self, ports: PortPair, nu: usize, beta: usize, mu: usize) -> Complex64 {
        let out = ports.output.slot();
        self.amp[out][nu] * self.emit[out][(nu, beta)] * self.absorb[ports.input.slot()][(beta, mu)]
    }

    fn prefactor(&self) -> Complex64 {
        Complex64::new(0.0, -self.kappa().powi(2) / (2.0 * PI))
    }

    /// Four-point Green's function of two independent one-photon transitions,
    /// with the total-momentum delta stripped.
    ///
    /// The coincident-momentum factors 1/(q - p) are cancelled analytically by
    /// pairing permutations, leaving divided differences of the one-photon
    /// Green's function.
    pub fn g4_g1(&self, p1: f64, p2: f64, q1: f64, q2: f64, ports: TwoPhotonPorts) -> Complex64 {
        let (a, b, i) = (ports.first, ports.second, ports.input);
        let z = |x: f64| Complex64::from(x);
        let gb = self.g_tilde(b, i, z(p2));
        let ga = self.g_tilde(a, i, z(p1));
        let sum = gb * self.g_tilde_pair(a, i, z(q1), z(p1))
            + ga * self.g_tilde_pair(b, i, z(p2), z(q2))
            + ga * self.g_tilde_pair(b, i, z(q1), z(p2))
            + gb * self.g_tilde_pair(a, i, z(p1), z(q2));
        -self.prefactor() * sum
    }

    /// Four-point Green's function of the genuine two-photon transition through
    /// the two-photon poles, with the total-momentum delta stripped.
    pub fn g4_g2(&self, p1: f64, p2: f64, q1: f64, q2: f64, ports: TwoPhotonPorts) -> Complex64 {
        let u: Vec<Complex64> = self.xi1.iter().map(|xi| 1.0 / (q1 - xi) + 1.0 / (q2 - xi)).collect();
        let w = self.absorb(ports.input, Complex64::from(q1 + q2), &u);
        let late_second = self.emit(ports.first, ports.second, &w);
        let late_first = self.emit(ports.second, ports.first, &w);
        let mut acc = Complex64::default();
        for (nu, xi) in self.xi1.iter().enumerate() {
            acc += late_second[nu] / (p2 - xi) + late_first[nu] / (p1 - xi);
        }
        self.prefactor() * acc
    }

    /// Full connected four-point function g4_g1 + g4_g2.
    pub fn g4(&self, p1: f64, p2: f64, q1: f64, q2: f64, ports: TwoPhotonPorts) -> Complex64 {
        self.g4_g1(p1, p2, q1, q2, ports) + self.g4_g2(p1, p2, q1, q2, ports)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(params: LatticeParams) -> GreenEvaluator {
        GreenEvaluator::new(&params).unwrap()
    }

    #[test]
    fn single_site_two_point() {
        let p = LatticeParams { n: 1, h: 0.3, ..Default::default() };
        let e = ev(p.clone());
        let eps = p.onsite(1);
        let q = 0.17;
        let g = e.g2_reduced(q, PortPair::TRANSMISSION);
        let exact = Complex64::new(0.0, -p.kappa) / Complex64::new(q - eps, p.kappa);
        assert!((g - exact).norm() < 1e-14);
        assert!((e.g2_reduced(eps, PortPair::TRANSMISSION).norm() - 1.0).abs() < 1e-14);
        let r = e.s1_element(q, PortPair::REFLECTION).value();
        assert!((r - (q - eps) / Complex64::new(q - eps, p.kappa)).norm() < 1e-14);
        assert!(e.s1_element(eps, PortPair::REFLECTION).value().norm() < 1e-14);
    }

    #[test]
    fn decoupled_sites_do_not_transmit() {
        let e = ev(LatticeParams { n: 2, j: 0.0, h: 0.5, ..Default::default() });
        assert_eq!(e.g2_reduced(0.3, PortPair::TRANSMISSION), Complex64::default());
    }

    #[test]
    fn two_site_closed_form() {
        let e = ev(LatticeParams::with_n(2));
        let k = 0.25;
        let g = e.g2_reduced(1.0, PortPair::TRANSMISSION);
        let i = Complex64::i();
        let exact = -i * k * (0.5 / (i * k / 2.0) - 0.5 / (2.0 + i * k / 2.0));
        assert!((g - exact).norm() < 1e-12);
    }

    #[test]
    fn four_point_vanishes_without_interaction() {
        let e = ev(LatticeParams { n: 4, h: 1.3, ..Default::default() });
        for ports in TwoPhotonPorts::all_outputs(Waveguide::W1) {
            let (p1, p2, q1) = (0.31, -0.77, 1.2);
            let q2 = p1 + p2 - q1;
            let total = e.g4(p1, p2, q1, q2, ports);
            let scale = e.g4_g1(p1, p2, q1, q2, ports).norm();
            assert!(total.norm() < 1e-12 * scale.max(1.0), "{ports:?}: {total}");
        }
    }

    #[test]
    fn bose_symmetry() {
        let e = ev(LatticeParams { n: 3, u: 2.0, h: 0.7, ..Default::default() });
        let ports = TwoPhotonPorts::TRANSMISSION;
        let (p1, p2, q1) = (0.4, -0.3, 0.9);
        let q2 = p1 + p2 - q1;
        let a = e.g4(p1, p2, q1, q2, ports);
        assert!((a - e.g4(p2, p1, q1, q2, ports)).norm() < 1e-13);
        assert!((a - e.g4(p1, p2, q2, q1, ports)).norm() < 1e-13);
    }

    #[test]
    fn coincident_momenta_are_finite() {
        let e = ev(LatticeParams { n: 3, u: 2.0, h: 0.7, ..Default::default() });
        let g = e.g4_g1(0.2, 0.5, 0.2, 0.5, TwoPhotonPorts::TRANSMISSION);
        assert!(g.re.is_finite() && g.im.is_finite());
    }

    #[test]
    fn requires_coupling() {
        assert!(GreenEvaluator::new(&LatticeParams { kappa: 0.0, ..Default::default() }).is_err());
    }
}
