use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use super::basis::TwoParticleBasis;
use super::hamiltonian::build_h2;
use crate::params::LatticeParams;

/// Second-order effective Hamiltonian of the doubly-occupied subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct DoublonEffectiveModel {
    pub matrix: DMatrix<f64>,
    /// Effective quasiperiodic amplitude 2h.
    pub h_d: f64,
    /// Bond hoppings J_Dj for j = 1..N-1.
    pub j_d: Vec<f64>,
    /// Transition point h/J = 2J/U predicted for the doublon band.
    pub predicted_transition: f64,
}

const RESONANCE_TOL: f64 = 1e-9;

/// Constant C in the bound C J^2 / U on the deviation of the doublon
/// eigenvalues from the N highest exact two-particle eigenvalues. Measured
/// 4.14 at U = 50J, h = J over N <= 15.
pub const SW_BOUND_CONSTANT: f64 = 4.5;

/// Doublon eigenvalues against the N highest exact two-particle eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct DoublonComparison {
    /// Both ascending.
    pub doublon: Vec<f64>,
    pub exact: Vec<f64>,
    pub max_deviation: f64,
    /// SW_BOUND_CONSTANT * J^2 / U.
    pub bound: f64,
    pub predicted_transition: f64,
}

impl DoublonComparison {
    pub fn within_bound(&self) -> bool {
        self.max_deviation <= self.bound
    }
}

/// Compares the doublon model with exact diagonalization of the closed chain.
pub fn compare_sw_doublon(params: &LatticeParams) -> Result<DoublonComparison> {
    let model = build_sw_doublon(params)?;
    let doublon = model.eigenvalues();
    let h2 = build_h2(params, &TwoParticleBasis::new(params.n))?;
    let mut all: Vec<f64> = h2.matrix.map(|z| z.re).symmetric_eigenvalues().iter().copied().collect();
    all.sort_by(f64::total_cmp);
    let exact = all[all.len() - params.n..].to_vec();
    let max_deviation = doublon.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(DoublonComparison {
        doublon,
        exact,
        max_deviation,
        bound: SW_BOUND_CONSTANT * params.j * params.j / params.u,
        predicted_transition: model.predicted_transition,
    })
}

/// Builds H'_D with diagonal 2 eps_j + U and hoppings 2J^2 U / (U^2 - (eps_{j+1} - eps_j)^2).
pub fn build_sw_doublon(params: &LatticeParams) -> Result<DoublonEffectiveModel> {
    params.validate()?;
    if params.u <= 0.0 {
        return Err(invalid("u", "the doublon expansion needs U > 0"));
    }
    let n = params.n;
    let eps = params.onsite_energies();
    let mut matrix = DMatrix::zeros(n, n);
    for i in 0..n {
        matrix[(i, i)] = 2.0 * eps[i] + params.u;
    }
    let mut j_d = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n.saturating_sub(1) {
        let delta = eps[i + 1] - eps[i];
        let denom = params.u * params.u - delta * delta;
        if denom.abs() < RESONANCE_TOL {
            return Err(Error::ResonantDenominator { bond: i + 1, bond_plus_one: i + 2, value: denom });
        }
        let hop = 2.0 * params.j * params.j * params.u / denom;
        matrix[(i, i + 1)] = hop;
        matrix[(i + 1, i)] = hop;
        j_d.push(hop);
    }
    Ok(DoublonEffectiveModel {
        matrix,
        h_d: 2.0 * params.h,
        j_d,
        predicted_transition: 2.0 * params.j / params.u,
    })
}

impl DoublonEffectiveModel {
    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }
}
