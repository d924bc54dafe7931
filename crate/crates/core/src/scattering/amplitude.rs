use std::f64::consts::PI;

use num_complex::Complex64;

use super::evaluator::GreenEvaluator;
use super::poles::ReducedAmplitude;
use super::ports::{TwoPhotonPorts, Waveguide};
use super::wavepacket::pair_normalization;
use crate::error::Result;
use crate::quadrature::{integrate_real_line, QuadSettings};

/// Two-photon output amplitude A(p1, total - p1) for a symmetrized pair of
/// Lorentzian inputs, at fixed total momentum.
///
/// The convolution of the four-point function with the input wavepackets is
/// done in closed form: closing the q contour picks up only the wavepacket
/// poles, which reduces every connected term to one-photon sums weighted by
/// the coefficients `s`.
#[derive(Debug, Clone)]
pub struct ShellAmplitude<'a> {
    ev: &'a GreenEvaluator,
    ports: TwoPhotonPorts,
    total: f64,
    k1: f64,
    k2: f64,
    sigma: f64,
    c0sq: f64,
    s: Vec<Complex64>,
    t_first: Vec<Complex64>,
    t_second: Vec<Complex64>,
    /// Chain emitting the p1 photon from the two-photon state, divided later by (p2 - xi).
    late_second: Vec<Complex64>,
    /// Chain emitting the p2 photon from the two-photon state, divided later by (p1 - xi).
    late_first: Vec<Complex64>,
}

impl<'a> ShellAmplitude<'a> {
    pub fn new(ev: &'a GreenEvaluator, ports: TwoPhotonPorts, total: f64, k1: f64, k2: f64, sigma: f64) -> Self {
        let a1 = Complex64::new(k1, -sigma);
        let a2 = Complex64::new(total - k2, sigma);
        let scale = Complex64::new(0.0, -2.0 * sigma) / (a2 - a1);
        let s: Vec<Complex64> = ev
            .poles1()
            .iter()
            .map(|xi| scale * (1.0 / (a2 - xi) + 1.0 / (total - a1 - xi)))
            .collect();
        let w = ev.absorb(ports.input, Complex64::from(total), &s);
        let late_second = ev.emit(ports.first, ports.second, &w);
        let late_first = ev.emit(ports.second, ports.first, &w);
        Self {
            ev,
            ports,
            total,
            k1,
            k2,
            sigma,
            c0sq: sigma / PI,
            t_first: ev.t(ports.first, ports.input),
            t_second: ev.t(ports.second, ports.input),
            s,
            late_second,
            late_first,
        }
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    fn chi(&self, k: f64, q: Complex64) -> Complex64 {
        self.c0sq.sqrt() / (q - k + Complex64::new(0.0, self.sigma))
    }

    /// Symmetrized input profile chi_k1(p) chi_k2(P - p) + chi_k2(p) chi_k1(P - p).
    fn wave(&self, p: Complex64) -> Complex64 {
        let q = self.total - p;
        self.chi(self.k1, p) * self.chi(self.k2, q) + self.chi(self.k2, p) * self.chi(self.k1, q)
    }

    fn h(&self, port: Waveguide, x: Complex64) -> Complex64 {
        let t = if port == self.ports.first { &self.t_first } else { &self.t_second };
        let mut acc = Complex64::default();
        for ((tm, sm), xi) in t.iter().zip(&self.s).zip(self.ev.poles1()) {
            acc += tm * sm / (x - xi);
        }
        acc
    }

    fn pref(&self) -> Complex64 {
        Complex64::new(0.0, self.ev.kappa().powi(2) / (2.0 * PI))
    }

    fn eval_complex(&self, p1: Complex64) -> Complex64 {
        let p2 = self.total - p1;
        let (a, b, i) = (self.ports.first, self.ports.second, self.ports.input);
        let direct = self.wave(p1) * self.ev.s1_at(a, i, p1) * self.ev.s1_at(b, i, p2);
        let one_photon = self.ev.g_tilde(b, i, p2) * self.h(a, p1) + self.ev.g_tilde(a, i, p1) * self.h(b, p2);
        let mut two_photon = Complex64::default();
        for (nu, xi) in self.ev.poles1().iter().enumerate() {
            two_photon += self.late_second[nu] / (p2 - xi) + self.late_first[nu] / (p1 - xi);
        }
        direct + self.pref() * (one_photon - two_photon)
    }

    /// A(p1, total - p1) by direct summation.
    pub fn eval(&self, p1: f64) -> Complex64 {
        self.eval_complex(p1.into())
    }

    /// Nodes k1 - i sigma, k2 - i sigma, xi_mu shared by every total momentum;
    /// the lower-half-plane poles sit at the nodes and the upper-half-plane
    /// poles at total - node.
    pub fn kernel_nodes(ev: &GreenEvaluator, k1: f64, k2: f64, sigma: f64) -> Vec<Complex64> {
        let mut nodes = vec![Complex64::new(k1, -sigma), Complex64::new(k2, -sigma)];
        nodes.extend_from_slice(ev.poles1());
        nodes
    }

    /// Residues of p1 -> A(p1, total - p1) at the kernel nodes (lower) and at
    /// total minus the kernel nodes (upper).
    pub fn residues(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let (a, b, i) = (self.ports.first, self.ports.second, self.ports.input);
        let ik = Complex64::new(0.0, self.ev.kappa());
        let pref = self.pref();
        let (k1, k2, sg, total) = (self.k1, self.k2, self.sigma, self.total);
        let xi = self.ev.poles1();
        let d1 = xi.len();
        let mut lower = Vec::with_capacity(d1 + 2);
        let mut upper = Vec::with_capacity(d1 + 2);

        // Wave poles: chi_k1(p) chi_k2(P - p) has poles at k1 - i sigma and
        // P - k2 + i sigma, the swapped product at k2 - i sigma and P - k1 + i sigma.
        let lo = [Complex64::new(k1, -sg), Complex64::new(k2, -sg)];
        let hi = [Complex64::new(total - k2, sg), Complex64::new(total - k1, sg)];
        for n in 0..2 {
            let (z, other) = (lo[n], hi[n]);
            lower.push(-self.c0sq / (z - other) * self.ev.s1_at(a, i, z) * self.ev.s1_at(b, i, total - z));
        }
        for n in 0..2 {
            // Upper node n mirrors lower node n: total - (k1 - i sigma) pairs with k1's partner.
            let z = total - lo[n];
            let other = lo[1 - n];
            upper.push(-self.c0sq / (z - other) * self.ev.s1_at(a, i, z) * self.ev.s1_at(b, i, total - z));
        }

        let id_a = if a == i { 1.0 } else { 0.0 };
        let id_b = if b == i { 1.0 } else { 0.0 };
        let mut recip = vec![Complex64::default(); d1];
        for mu in 0..d1 {
            let y = total - xi[mu];
            for (r, x) in recip.iter_mut().zip(xi) {
                *r = 1.0 / (y - x);
            }
            let (mut ga, mut gb, mut ha, mut hb) = Default::default();
            for nu in 0..d1 {
                let (ta, tb, r) = (self.t_first[nu], self.t_second[nu], recip[nu]);
                ga += ta * r;
                gb += tb * r;
                ha += ta * self.s[nu] * r;
                hb += tb * self.s[nu] * r;
            }
            let (ga, gb, ha, hb): (Complex64, Complex64, Complex64, Complex64) = (ga, gb, ha, hb);
            let sa = id_a - ik * ga;
            let sb = id_b - ik * gb;
            let (ta, tb, sm) = (self.t_first[mu], self.t_second[mu], self.s[mu]);
            lower.push(
                self.wave(xi[mu]) * (-ik * ta) * sb + pref * (gb * ta * sm + ta * hb) - pref * self.late_first[mu],
            );
            upper.push(
                self.wave(y) * sa * (ik * tb) - pref * (ha * tb + ga * tb * sm) + pref * self.late_second[mu],
            );
        }
        (lower, upper)
    }

    /// Pole-residue form of p1 -> A(p1, total - p1).
    pub fn to_poles(&self) -> ReducedAmplitude {
        let nodes = Self::kernel_nodes(self.ev, self.k1, self.k2, self.sigma);
        let (lower, upper) = self.residues();
        let mut out = ReducedAmplitude::default();
        for ((z, rl), ru) in nodes.iter().zip(lower).zip(upper) {
            out.push(*z, rl);
            out.push(self.total - z, ru);
        }
        out
    }
}

/// Conditional output density |A(p1, p2)|^2 / M for Lorentzian inputs centred
/// at k1 and k2, with the wavepacket convolution done in closed form.
pub fn rho_conditional(
    p1: f64,
    p2: f64,
    k1: f64,
    k2: f64,
    sigma: f64,
    ports: TwoPhotonPorts,
    ev: &GreenEvaluator,
) -> f64 {
    let amp = ShellAmplitude::new(ev, ports, p1 + p2, k1, k2, sigma).eval(p1);
    amp.norm_sqr() / pair_normalization(k1, k2, sigma)
}

/// Same density with the wavepacket convolution done by adaptive quadrature
/// over the internal momentum.
pub fn rho_conditional_quadrature(
    p1: f64,
    p2: f64,
    k1: f64,
    k2: f64,
    sigma: f64,
    ports: TwoPhotonPorts,
    ev: &GreenEvaluator,
    settings: &QuadSettings,
) -> Result<f64> {
    let total = p1 + p2;
    let c0 = (sigma / PI).sqrt();
    let chi = |k: f64, q: f64| c0 / Complex64::new(q - k, sigma);
    let direct = (chi(k1, p1) * chi(k2, p2) + chi(k2, p1) * chi(k1, p2))
        * ev.s1_at(ports.first, ports.input, p1.into())
        * ev.s1_at(ports.second, ports.input, p2.into());
    let late_second = ev.collapsed(ports.first, ports.second, ports.input, total.into());
    let late_first = ev.collapsed(ports.second, ports.first, ports.input, total.into());
    let xi = ev.poles1();
    let pref2 = Complex64::new(0.0, -ev.kappa().powi(2) / (2.0 * PI));
    let g4 = |q1: f64| {
        let q2 = total - q1;
        let u = nalgebra::DVector::from_iterator(xi.len(), xi.iter().map(|x| 1.0 / (q1 - x) + 1.0 / (q2 - x)));
        let (ys, yf) = (&late_second * &u, &late_first * &u);
        let mut g2 = Complex64::default();
        for (nu, x) in xi.iter().enumerate() {
            g2 += ys[nu] / (p2 - x) + yf[nu] / (p1 - x);
        }
        ev.g4_g1(p1, p2, q1, q2, ports) + pref2 * g2
    };
    let mut breaks = vec![k1, total - k2];
    for x in xi {
        breaks.push(x.re);
        breaks.push(total - x.re);
    }
    // The connected term can vanish identically, so its tolerance is also
    // anchored to the size of the direct term it is added to.
    let settings = QuadSettings { abs_tol: settings.abs_tol.max(settings.rel_tol * direct.norm()), ..*settings };
    let conv = integrate_real_line(|q| Ok(chi(k1, q) * chi(k2, total - q) * g4(q)), &breaks, 1.0, &settings)?;
    Ok((direct + conv.value).norm_sqr() / pair_normalization(k1, k2, sigma))
}
