use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::ports::{PortPair, TwoPhotonPorts, Waveguide};
use crate::error::{invalid, Error, Result};
use crate::model::{build_effective, creation_matrix, Sector};
use crate::params::LatticeParams;
use crate::spectral::eig_biorthogonal;

/// Largest chain the oracle accepts.
pub const ORACLE_MAX_SITES: usize = 4;
/// Required tmax times the slowest decay rate.
pub const ORACLE_DECAY_MARGIN: f64 = 20.0;
const DECAY_FLOOR: f64 = 1e-8;

/// Green's functions from real-time propagation under the effective
/// Hamiltonian, independent of the spectral formulas.
///
/// Every resolvent (x - H_eff)^-1 is replaced by -i times the Fourier
/// transform of e^{-i H_eff t} on [0, tmax], integrated with the composite
/// Simpson rule on a uniform grid.
#[derive(Debug, Clone)]
pub struct TimeDomainOracle {
    n: usize,
    kappa: f64,
    dt: f64,
    nsteps: usize,
    step1: DMatrix<Complex64>,
    step2: DMatrix<Complex64>,
    creators: Vec<DMatrix<Complex64>>,
}

impl TimeDomainOracle {
    pub fn new(params: &LatticeParams, tmax: f64, nsteps: usize) -> Result<Self> {
        params.validate()?;
        if params.n > ORACLE_MAX_SITES {
            return Err(invalid("n", format!("the time-domain oracle is limited to N <= {ORACLE_MAX_SITES}")));
        }
        if params.kappa <= 0.0 {
            return Err(invalid("kappa", "scattering needs a positive waveguide coupling"));
        }
        if nsteps < 2 || nsteps % 2 != 0 {
            return Err(invalid("nsteps", "Simpson integration needs a positive even step count"));
        }
        let h1 = build_effective(params, Sector::One, true)?.matrix;
        let h2 = build_effective(params, Sector::Two, true)?.matrix;
        let slowest = Self::slowest_decay(params)?;
        if tmax * slowest < ORACLE_DECAY_MARGIN {
            return Err(invalid(
                "tmax",
                format!("tmax * min|Im xi| = {:.3} is below {ORACLE_DECAY_MARGIN}", tmax * slowest),
            ));
        }
        let dt = tmax / nsteps as f64;
        let minus_i_dt = Complex64::new(0.0, -dt);
        let creators = (1..=params.n)
            .map(|s| creation_matrix(params.n, s, Sector::One).map(Complex64::from))
            .collect();
        Ok(Self {
            n: params.n,
            kappa: params.kappa,
            dt,
            nsteps,
            step1: (h1 * minus_i_dt).exp(),
            step2: (h2 * minus_i_dt).exp(),
            creators,
        })
    }

    /// Oracle whose tmax is the decay margin divided by the slowest decay rate.
    pub fn with_default_window(params: &LatticeParams, nsteps: usize) -> Result<Self> {
        let slowest = Self::slowest_decay(params)?;
        Self::new(params, ORACLE_DECAY_MARGIN * 1.25 / slowest, nsteps)
    }

    /// Smallest |Im xi| over the one- and two-photon sectors.
    pub fn slowest_decay(params: &LatticeParams) -> Result<f64> {
        let mut slowest = f64::INFINITY;
        for sector in [Sector::One, Sector::Two] {
            let s = eig_biorthogonal(&build_effective(params, sector, true)?)?;
            slowest = s.values.iter().map(|z| z.im.abs()).fold(slowest, f64::min);
        }
        Ok(slowest)
    }

    fn unit(&self, w: Waveguide) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.n);
        v[w.site(self.n) - 1] = Complex64::new(1.0, 0.0);
        v
    }

    /// (x - H)^-1 v for the sector whose one-step propagator is `step`.
    fn resolve(&self, step: &DMatrix<Complex64>, v: &DVector<Complex64>, x: f64) -> Result<DVector<Complex64>> {
        let start = v.norm();
        let phase_step = Complex64::from_polar(1.0, x * self.dt);
        let mut phase = Complex64::new(1.0, 0.0);
        let mut state = v.clone();
        let mut acc = v * Complex64::from(1.0);
        for k in 1..=self.nsteps {
            state = step * &state;
            phase *= phase_step;
            if k % 1024 == 0 {
                phase = Complex64::from_polar(1.0, x * self.dt * k as f64);
            }
            let weight = if k == self.nsteps {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc.axpy(phase * weight, &state, Complex64::new(1.0, 0.0));
        }
        let remaining = if start > 0.0 { state.norm() / start } else { 0.0 };
        if remaining > DECAY_FLOOR {
            return Err(Error::InsufficientDecay { remaining });
        }
        Ok(acc * Complex64::new(0.0, -self.dt / 3.0))
    }

    /// Two-point Green's function with the momentum delta stripped.
    pub fn g2(&self, q: f64, ports: PortPair) -> Result<Complex64> {
        let r = self.resolve(&self.step1, &self.unit(ports.input), q)?;
        Ok(Complex64::new(0.0, -self.kappa) * r[ports.output.site(self.n) - 1])
    }

    fn prefactor(&self) -> Complex64 {
        Complex64::new(0.0, -self.kappa.powi(2) / (2.0 * PI))
    }

    /// <0|a_late R1(p_late) a_early R2(total) a_in^dagger R1(q) a_in^dagger|0>.
    fn chain(&self, ports_in: Waveguide, q: f64, total: f64, early: Waveguide, late: Waveguide, p_late: f64) -> Result<Complex64> {
        let v1 = self.resolve(&self.step1, &self.unit(ports_in), q)?;
        let c_in = &self.creators[ports_in.site(self.n) - 1];
        let v2 = self.resolve(&self.step2, &(c_in * v1), total)?;
        let c_out = &self.creators[early.site(self.n) - 1];
        let v3 = self.resolve(&self.step1, &(c_out.transpose() * v2), p_late)?;
        Ok(v3[late.site(self.n) - 1])
    }

    /// Two-photon-pole part of the four-point function.
    pub fn g4_g2(&self, p1: f64, p2: f64, q1: f64, q2: f64, ports: TwoPhotonPorts) -> Result<Complex64> {
        let total = q1 + q2;
        let mut acc = Complex64::default();
        for q in [q1, q2] {
            acc += self.chain(ports.input, q, total, ports.first, ports.second, p2)?;
            acc += self.chain(ports.input, q, total, ports.second, ports.first, p1)?;
        }
        Ok(self.prefactor() * acc)
    }

    /// <0|a_out R1(x) R1(y) a_in^dagger|0>.
    fn double(&self, output: Waveguide, input: Waveguide, x: f64, y: f64) -> Result<Complex64> {
        let v = self.resolve(&self.step1, &self.unit(input), y)?;
        Ok(self.resolve(&self.step1, &v, x)?[output.site(self.n) - 1])
    }

    fn single(&self, output: Waveguide, input: Waveguide, x: f64) -> Result<Complex64> {
        Ok(self.resolve(&self.step1, &self.unit(input), x)?[output.site(self.n) - 1])
    }

    /// Part of the four-point function made of two one-photon transitions.
    pub fn g4_g1(&self, p1: f64, p2: f64, q1: f64, q2: f64, ports: TwoPhotonPorts) -> Result<Complex64> {
        let (a, b, i) = (ports.first, ports.second, ports.input);
        let gb = self.single(b, i, p2)?;
        let ga = self.single(a, i, p1)?;
        let sum = gb * self.double(a, i, q1, p1)?
            + ga * self.double(b, i, p2, q2)?
            + ga * self.double(b, i, q1, p2)?
            + gb * self.double(a, i, p1, q2)?;
        Ok(-self.prefactor() * sum)
    }
}
