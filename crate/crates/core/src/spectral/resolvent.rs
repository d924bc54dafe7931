use num_complex::Complex64;

use super::hermitian::HermitianSpectrum;
use crate::error::{invalid, Error, Result};
use crate::model::{Sector, TwoParticleBasis};

/// Normalized Fock state used as a resolvent bra or ket (1-based sites).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FockState {
    Site(usize),
    Pair(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventQuery {
    pub energy: Complex64,
    pub bra: FockState,
    pub ket: FockState,
}

const POLE_EXCLUSION: f64 = 1e-12;

fn fock_index(state: FockState, spectrum: &HermitianSpectrum) -> Result<usize> {
    let n = spectrum.sites();
    match (state, spectrum.sector) {
        (FockState::Site(i), Sector::One) if (1..=n).contains(&i) => Ok(i - 1),
        (FockState::Pair(i, j), Sector::Two) if (1..=n).contains(&i) && (1..=n).contains(&j) => {
            Ok(TwoParticleBasis::new(n).index_of(i, j))
        }
        _ => Err(invalid("fock state", format!("{state:?} does not belong to the {:?} sector of {n} sites", spectrum.sector))),
    }
}

/// <bra| (E - H)^-1 |ket> as a spectral sum over the closed eigenbasis.
pub fn resolvent_element(query: ResolventQuery, spectrum: &HermitianSpectrum) -> Result<Complex64> {
    let a = fock_index(query.bra, spectrum)?;
    let b = fock_index(query.ket, spectrum)?;
    let mut acc = Complex64::default();
    for (beta, &e) in spectrum.values.iter().enumerate() {
        let gap = query.energy - e;
        if gap.norm() < POLE_EXCLUSION {
            return Err(Error::PoleProximity { energy: query.energy, eigenvalue: e, distance: gap.norm() });
        }
        acc += spectrum.vectors[(a, beta)] * spectrum.vectors[(b, beta)] / gap;
    }
    Ok(acc)
}

fn inverse_length(element: Complex64, n: usize) -> f64 {
    let mag = element.norm_sqr();
    if mag == 0.0 {
        f64::INFINITY
    } else {
        -mag.ln() / (2.0 * (n as f64 - 1.0))
    }
}

/// Inverse single-particle localisation length -ln|<N|G(E)|1>|^2 / (2(N-1)).
pub fn localisation_length_1p(energy: Complex64, spectrum: &HermitianSpectrum) -> Result<f64> {
    let n = spectrum.sites();
    if spectrum.sector != Sector::One {
        return Err(invalid("spectrum", "expected the one-particle sector"));
    }
    if n < 2 {
        return Err(invalid("n", "a localisation length needs at least two sites"));
    }
    let g = resolvent_element(ResolventQuery { energy, bra: FockState::Site(n), ket: FockState::Site(1) }, spectrum)?;
    Ok(inverse_length(g, n))
}

/// Inverse two-particle localisation length from <N,N|G(E)|1,1>.
pub fn localisation_length_2p(energy: Complex64, spectrum: &HermitianSpectrum) -> Result<f64> {
    let n = spectrum.sites();
    if spectrum.sector != Sector::Two {
        return Err(invalid("spectrum", "expected the two-particle sector"));
    }
    if n < 2 {
        return Err(invalid("n", "a localisation length needs at least two sites"));
    }
    let g = resolvent_element(
        ResolventQuery { energy, bra: FockState::Pair(n, n), ket: FockState::Pair(1, 1) },
        spectrum,
    )?;
    Ok(inverse_length(g, n))
}
