use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::amplitude::ShellAmplitude;
use super::evaluator::GreenEvaluator;
use super::poles::{NormIntegral, PoleKernel, ReducedAmplitude};
use super::ports::TwoPhotonPorts;
use super::wavepacket::pair_normalization;
use crate::error::{invalid, Error, Result};
use crate::quadrature::{integrate_partitioned, integrate_real_line, QuadSettings};

/// How the inner integral over p1 at fixed total momentum is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InnerStrategy {
    /// Closed form from the pole-residue representation, falling back to
    /// quadrature when near-coincident poles cost too much precision.
    Residues,
    /// Adaptive quadrature of |A|^2.
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbabilityOptions {
    pub quad: QuadSettings,
    pub inner: InnerStrategy,
}

impl Default for ProbabilityOptions {
    fn default() -> Self {
        Self { quad: QuadSettings::default(), inner: InnerStrategy::Residues }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityEstimate {
    pub value: f64,
    pub error: f64,
    /// Set when a slightly negative result was reported as zero.
    pub clamped: bool,
    /// Number of inner integrals that fell back from residues to quadrature.
    pub fallbacks: usize,
    /// Evaluations of the outer integrand.
    pub evaluations: usize,
}

/// Tolerated relative rounding of the residue sum before falling back.
const RESIDUE_ROUNDING_LIMIT: f64 = 1e-9;
const NEGATIVE_SLACK: f64 = 1e-6;

pub(crate) fn clamp_probability(value: f64) -> Result<(f64, bool)> {
    if value > 1.0 + NEGATIVE_SLACK || value < -NEGATIVE_SLACK || !value.is_finite() {
        return Err(Error::ProbabilityOutOfRange(value));
    }
    if value < 0.0 {
        return Ok((0.0, true));
    }
    Ok((value, false))
}

fn inner_quadrature(amp: &ShellAmplitude, nodes: &[Complex64], settings: &QuadSettings) -> Result<f64> {
    let mut breaks: Vec<f64> = nodes.iter().map(|z| z.re).collect();
    breaks.extend(nodes.iter().map(|z| amp.total() - z.re));
    Ok(integrate_real_line(|p| Ok(amp.eval(p).norm_sqr()), &breaks, 1.0, settings)?.value)
}

/// Two-photon detection probability (1/2) integral of rho over both output
/// momenta for Lorentzian inputs of width `sigma` centred at k1 and k2.
///
/// The outer integral over the total momentum P uses P = k1 + k2 + 2 sigma tan(theta),
/// which flattens the input Lorentzian and maps the real line to a finite
/// interval; resonance positions are used as initial breakpoints.
pub fn transmission_probability(
    k1: f64,
    k2: f64,
    sigma: f64,
    ports: TwoPhotonPorts,
    ev: &GreenEvaluator,
    options: &ProbabilityOptions,
) -> Result<ProbabilityEstimate> {
    if !(sigma > 0.0) {
        return Err(invalid("sigma", "Lorentzian inputs need a positive width"));
    }
    let centre = k1 + k2;
    let width = 2.0 * sigma;
    let theta = |p: f64| ((p - centre) / width).atan();
    let mut breaks = vec![-FRAC_PI_2, FRAC_PI_2];
    for m in [0.0f64, 0.5, 1.0, 3.0, 10.0, 30.0] {
        breaks.push(m.atan());
        breaks.push(-m.atan());
    }
    for xi in ev.poles1() {
        breaks.push(theta(k1 + xi.re));
        breaks.push(theta(k2 + xi.re));
    }
    for xi in ev.poles2() {
        breaks.push(theta(xi.re));
    }
    let inner_settings = QuadSettings { rel_tol: options.quad.rel_tol * 0.1, ..options.quad };
    let nodes = ShellAmplitude::kernel_nodes(ev, k1, k2, sigma);
    let kernel = PoleKernel::new(&nodes)?;
    let mut fallbacks = 0;
    let outer = integrate_partitioned(
        |th: f64| {
            let (sin, cos) = th.sin_cos();
            if cos <= 0.0 {
                return Ok(0.0);
            }
            let total = centre + width * sin / cos;
            let jac = width / (cos * cos);
            let amp = ShellAmplitude::new(ev, ports, total, k1, k2, sigma);
            let inner = match options.inner {
                InnerStrategy::Residues => {
                    let (lower, upper) = amp.residues();
                    let (lo, hi) = (kernel.quadratic(&lower), kernel.quadratic(&upper));
                    let n = NormIntegral { value: lo.value + hi.value, magnitude: lo.magnitude + hi.magnitude };
                    if n.relative_rounding() <= RESIDUE_ROUNDING_LIMIT {
                        n.value
                    } else {
                        fallbacks += 1;
                        inner_quadrature(&amp, &nodes, &inner_settings)?
                    }
                }
                InnerStrategy::Quadrature => inner_quadrature(&amp, &nodes, &inner_settings)?,
            };
            Ok(inner * jac)
        },
        &breaks,
        &options.quad,
    )?;
    let norm = 0.5 / pair_normalization(k1, k2, sigma);
    let (value, clamped) = clamp_probability(outer.value * norm)?;
    Ok(ProbabilityEstimate { value, error: outer.error * norm, clamped, fallbacks, evaluations: outer.evaluations })
}

/// Which terms of the delta-pulse probability to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaVariant {
    /// Disconnected, interference and connected terms.
    Full,
    /// Only (1/2) integral |G2|^2, the fully resonant two-photon transition.
    ResonantOnly,
}

/// Pole form of p -> G4(p, K - p; k1, k2), optionally restricted to the
/// two-photon-pole diagram.
fn connected_poles(ev: &GreenEvaluator, k1: f64, k2: f64, ports: TwoPhotonPorts, with_g1: bool) -> ReducedAmplitude {
    let (a, b, i) = (ports.first, ports.second, ports.input);
    let total = k1 + k2;
    let (q1, q2) = (Complex64::from(k1), Complex64::from(k2));
    let pref = Complex64::new(0.0, -ev.kappa().powi(2) / (2.0 * PI));
    let xi = ev.poles1();
    let ta = ev.t(a, i);
    let tb = ev.t(b, i);
    let u: Vec<Complex64> = xi.iter().map(|x| 1.0 / (q1 - x) + 1.0 / (q2 - x)).collect();
    let w = ev.absorb(i, total.into(), &u);
    let late_second = ev.emit(a, b, &w);
    let late_first = ev.emit(b, a, &w);
    let mut out = ReducedAmplitude::default();
    for (mu, &x) in xi.iter().enumerate() {
        let y = total - x;
        let mut r_lo = pref * late_first[mu];
        let mut r_hi = -pref * late_second[mu];
        if with_g1 {
            let gb = ev.g_tilde(b, i, y);
            let lo = gb * ta[mu] / (q1 - x)
                + ta[mu] * ev.g_tilde_pair(b, i, y, q2)
                + ta[mu] * ev.g_tilde_pair(b, i, q1, y)
                + gb * ta[mu] / (q2 - x);
            let ga = ev.g_tilde(a, i, y);
            let hi = -tb[mu] * ev.g_tilde_pair(a, i, q1, y)
                - ga * tb[mu] / (q2 - x)
                - ga * tb[mu] / (q1 - x)
                - tb[mu] * ev.g_tilde_pair(a, i, y, q2);
            r_lo -= pref * lo;
            r_hi -= pref * hi;
        }
        out.push(x, r_lo);
        out.push(y, r_hi);
    }
    out
}

/// Probability for idealized delta-pulse inputs at momenta k1 and k2.
///
/// Coincident inputs carry the doubled input norm, which halves the
/// interference and connected terms.
pub fn delta_pulse_probability(
    k1: f64,
    k2: f64,
    ports: TwoPhotonPorts,
    ev: &GreenEvaluator,
    variant: DeltaVariant,
) -> Result<f64> {
    let norm = if k1 == k2 { 2.0 } else { 1.0 };
    let (a, b, i) = (ports.first, ports.second, ports.input);
    let value = match variant {
        DeltaVariant::ResonantOnly => {
            0.5 * connected_poles(ev, k1, k2, ports, false).norm_sqr_integral()?.value / norm
        }
        DeltaVariant::Full => {
            let s = |port, k: f64| ev.s1_at(port, i, k.into());
            let forward = s(a, k1) * s(b, k2);
            let backward = s(a, k2) * s(b, k1);
            let disconnected = if k1 == k2 {
                forward.norm_sqr()
            } else {
                0.5 * (forward.norm_sqr() + backward.norm_sqr())
            };
            let interference = (forward.conj() * ev.g4(k1, k2, k1, k2, ports)
                + backward.conj() * ev.g4(k2, k1, k1, k2, ports))
            .re;
            let connected = 0.5 * connected_poles(ev, k1, k2, ports, true).norm_sqr_integral()?.value;
            disconnected + (interference + connected) / norm
        }
    };
    Ok(clamp_probability(value)?.0)
}
